#include "freqshape/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "freqshape/errors.hpp"
#include "freqshape/frequency.hpp"
#include "freqshape/roots.hpp"
#include "freqshape/state_space.hpp"
#include "parallel.hpp"

namespace freqshape::analysis {

using lti::Polynomial;
using lti::TransferFunction;

namespace {

struct PeakSample {
  double value = 0.0;
  double t = 0.0;
};

// Max of |y| with a parabola through the samples bracketing the discrete max.
PeakSample refined_peak(const lti::Trajectory& tr) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < tr.y.size(); ++i)
    if (std::abs(tr.y[i]) > std::abs(tr.y[k])) k = i;
  PeakSample out{std::abs(tr.y[k]), tr.t[k]};
  if (k == 0 || k + 1 >= tr.y.size()) return out;
  const double ym = std::abs(tr.y[k - 1]);
  const double y0 = std::abs(tr.y[k]);
  const double yp = std::abs(tr.y[k + 1]);
  const double curvature = ym - 2.0 * y0 + yp;
  if (curvature >= 0.0) return out;
  const double offset = 0.5 * (ym - yp) / curvature;
  out.value = y0 - 0.25 * (ym - yp) * offset;
  out.t = tr.t[k] + offset * tr.dt();
  return out;
}

void require_stable(const TransferFunction& tf, const char* what) {
  if (tf.is_zero() || tf.den().degree() < 1) return;
  if (!lti::is_hurwitz(tf.den())) throw UnstableSystem(std::string("step_metrics: ") + what + " is not stable");
}

}  // namespace

unsigned sweep_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FREQSHAPE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

SimulatedStep simulate_step(const TransferFunction& freq_tf, const TransferFunction& power_tf, double step,
                            double f_base, const SimConfig& sim) {
  require_stable(freq_tf, "frequency channel");
  require_stable(power_tf, "power channel");

  double fastest = 0.0;
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto* tf : {&freq_tf, &power_tf}) {
    if (tf->is_zero() || tf->den().degree() < 1) continue;
    for (const auto& p : lti::roots(tf->den())) {
      fastest = std::max(fastest, std::abs(p));
      slowest = std::min(slowest, std::abs(p.real()));
    }
  }
  const double dt = sim.dt > 0.0 ? sim.dt : (fastest > 0.0 ? 1.0 / (50.0 * fastest) : 1e-3);
  double horizon = sim.horizon;
  if (!(horizon > 0.0)) {
    horizon = std::isfinite(slowest) ? 10.0 / slowest : 1.0;
    horizon = std::min(horizon, static_cast<double>(sim.max_steps) * dt);
  }
  horizon = std::max(horizon, dt);

  SimulatedStep out;
  StepMetrics& m = out.metrics;
  m.steady_state_freq = step * freq_tf.dc_gain();
  out.frequency = lti::step_response(freq_tf, step, dt, horizon);
  const PeakSample freq = refined_peak(out.frequency);
  m.nadir_pu = std::max(freq.value, std::abs(m.steady_state_freq));
  m.t_nadir = freq.value >= std::abs(m.steady_state_freq) ? freq.t : std::numeric_limits<double>::infinity();
  m.nadir_mhz = m.nadir_pu * f_base * 1e3;
  if (!power_tf.is_zero()) {
    out.power = lti::step_response(power_tf, step, dt, horizon);
    const PeakSample power = refined_peak(out.power);
    m.peak_power = std::max(power.value, std::abs(step * power_tf.dc_gain()));
  }
  return out;
}

StepMetrics step_metrics(const TransferFunction& freq_tf, const TransferFunction& power_tf, double step, double f_base,
                         const SimConfig& sim) {
  return simulate_step(freq_tf, power_tf, step, f_base, sim).metrics;
}

ShapedResponse shaped_response(const SystemParams& params, double rho) {
  const ShapingSpec spec{rho};
  return {plant::target_transfer(params, spec, plant::RhoDomain::kIncludeNoIbr),
          plant::ibr_power_from_load(params, spec, plant::RhoDomain::kIncludeNoIbr)};
}

std::vector<double> default_rho_grid(const SystemParams& params) {
  std::vector<double> grid;
  for (int k = 0; k < 19; ++k) grid.push_back(params.tau * (0.05 + 0.05 * k));
  grid.push_back(params.tau);
  return grid;
}

bool is_pareto_monotone(const std::vector<ParetoPoint>& pts, double rel_slack) {
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].nadir_mhz < pts[k - 1].nadir_mhz * (1.0 - rel_slack)) return false;
    if (pts[k].peak_power > pts[k - 1].peak_power * (1.0 + rel_slack) + 1e-12) return false;
  }
  return true;
}

std::vector<ParetoPoint> pareto_sweep(const SystemParams& params, std::vector<double> rho_grid, double step,
                                      const SimConfig& sim) {
  params.validate();
  std::sort(rho_grid.begin(), rho_grid.end());
  for (double rho : rho_grid) plant::check_rho(params, rho, plant::RhoDomain::kIncludeNoIbr);

  std::vector<ParetoPoint> out(rho_grid.size());
  detail::parallel_for(rho_grid.size(), sweep_threads(), [&](std::size_t i) {
    const ShapedResponse r = shaped_response(params, rho_grid[i]);
    const StepMetrics m = step_metrics(r.frequency, r.power, step, params.f_base, sim);
    out[i] = {rho_grid[i], m.nadir_mhz, m.peak_power};
  });
  return out;
}

std::optional<ParetoPoint> solve_min_peak(const SystemParams& params, const std::vector<double>& rho_grid,
                                          double nadir_bound_mhz, double step, const SimConfig& sim) {
  std::optional<ParetoPoint> best;
  for (const auto& pt : pareto_sweep(params, rho_grid, step, sim)) {
    if (pt.nadir_mhz > nadir_bound_mhz) continue;
    if (!best || pt.peak_power < best->peak_power || (pt.peak_power == best->peak_power && pt.rho > best->rho))
      best = pt;
  }
  return best;
}

namespace {

void check_open_rho(const SystemParams& params, double rho) {
  if (!(rho > 0.0 && rho < params.tau))
    throw RhoOutOfRange("sensitivity: rho must lie in (0, tau), got " + std::to_string(rho));
}

}  // namespace

double sensitivity_norm_closed_form(const SystemParams& params, double rho) {
  check_open_rho(params, rho);
  return params.alpha_g * (params.tau - rho) / (params.tau * params.tau * rho);
}

TransferFunction sensitivity_tf(const SystemParams& params, double rho) {
  check_open_rho(params, rho);
  const Polynomial turbine{1.0, params.tau};
  return {Polynomial{0.0, 0.0, 0.0, params.alpha_g * (params.tau - rho)},
          Polynomial{1.0, rho} * turbine * turbine};
}

TransferFunction mismatch_sensitivity_tf(const SystemParams& params, double rho) {
  const TransferFunction stated = sensitivity_tf(params, rho);
  const Polynomial target_den{params.alpha_l + params.alpha_g, params.alpha_l * rho + 2.0 * params.h,
                              2.0 * params.h * rho};
  return {stated.num(), stated.den() * target_den};
}

TransferFunction closed_loop_beta_form(const SystemParams& p, double rho, double beta) {
  const Polynomial turbine{1.0, p.tau};
  const Polynomial beta_s2{0.0, 0.0, beta};
  const Polynomial inner = beta_s2 + turbine * Polynomial{1.0, rho};
  // -1 / (swing + a_g (beta s^2 + turbine^2) / (turbine * inner))
  const Polynomial swing{p.alpha_l, 2.0 * p.h};
  const Polynomial den_turbine = turbine * inner;
  const Polynomial total = swing * den_turbine + p.alpha_g * (beta_s2 + turbine * turbine);
  return {-den_turbine, total};
}

double scaled_mismatch(const SystemParams& p, double rho) {
  return p.alpha_g * (p.tau - rho) * (1.0 / p.b - 1.0 / p.b_hat);
}

std::vector<MismatchCell> mismatch_sweep(const SystemParams& params, double rho, const std::vector<double>& c_grid,
                                         const std::vector<double>& b_grid, double step, const SimConfig& sim) {
  params.validate();
  plant::check_rho(params, rho);
  for (double c : c_grid)
    if (!(c > 0.0)) throw InvalidParameter("mismatch_sweep: c must be positive");
  for (double b : b_grid)
    if (!(b > 0.0)) throw InvalidParameter("mismatch_sweep: b must be positive");

  std::vector<MismatchCell> cells(c_grid.size() * b_grid.size());
  detail::parallel_for(cells.size(), sweep_threads(), [&](std::size_t idx) {
    const double c = c_grid[idx / b_grid.size()];
    const double b = b_grid[idx % b_grid.size()];
    SystemParams p = params;
    p.b = b;
    p.b_hat = c * b;
    MismatchCell cell{.rho = rho, .c = c, .b = b, .nadir_mhz = std::nullopt};
    const synthesis::StabilityCertificate cert = synthesis::certify(p, {rho});
    cell.verdict = cert.verdict;
    cell.stable = cert.verdict != synthesis::Verdict::kUnstable;
    if (cell.stable) {
      const TransferFunction loop = lti::reduce_common_factors(plant::closed_loop(p, cert.gains));
      cell.nadir_mhz = step_metrics(loop, TransferFunction{}, step, p.f_base, sim).nadir_mhz;
    }
    cells[idx] = cell;
  });
  return cells;
}

std::vector<SensitivityRow> sensitivity_sweep(const SystemParams& params, const std::vector<double>& rho_grid) {
  params.validate();
  std::vector<SensitivityRow> rows(rho_grid.size());
  detail::parallel_for(rho_grid.size(), sweep_threads(), [&](std::size_t i) {
    const double rho = rho_grid[i];
    rows[i] = {rho, sensitivity_norm_closed_form(params, rho), lti::hinf_norm(sensitivity_tf(params, rho))};
  });
  return rows;
}

}  // namespace freqshape::analysis
