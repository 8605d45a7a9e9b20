#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freqshape/plant.hpp"
#include "freqshape/state_space.hpp"
#include "freqshape/synthesis.hpp"
#include "freqshape/transfer_function.hpp"

namespace freqshape::analysis {

using plant::ShapingSpec;
using plant::SystemParams;

/// Simulation settings; non-positive values select the defaults
/// (dt = fastest time constant / 50, horizon = 10 / slowest decay rate).
/// A default horizon is shortened to max_steps samples; very lightly damped
/// slow modes (weak lines, large mismatch) otherwise need millions of steps
/// long after the nadir has passed.
struct SimConfig {
  double dt = 0.0;
  double horizon = 0.0;
  std::size_t max_steps = 200000;
};

struct StepMetrics {
  double nadir_pu = 0.0;   ///< sup_t |w(t)|, at least |steady state|
  double nadir_mhz = 0.0;  ///< nadir_pu * f_base * 1e3
  double peak_power = 0.0; ///< sup_t |p_vsi(t)| (p.u.)
  double steady_state_freq = 0.0;
  double t_nadir = 0.0;
};

/// Simulates both channels for a load step on one shared time grid. The
/// maxima are refined by a parabola through the three samples around the
/// discrete maximum; the steady state comes from the DC gain.
/// Throws UnstableSystem if either transfer function has a pole with Re >= 0.
StepMetrics step_metrics(const lti::TransferFunction& freq_tf, const lti::TransferFunction& power_tf, double step,
                         double f_base, const SimConfig& sim = {});

/// Trajectories behind step_metrics; power is empty when power_tf is zero.
struct SimulatedStep {
  lti::Trajectory frequency;
  lti::Trajectory power;
  StepMetrics metrics;
};
SimulatedStep simulate_step(const lti::TransferFunction& freq_tf, const lti::TransferFunction& power_tf, double step,
                            double f_base, const SimConfig& sim = {});

/// Frequency (target) and inverter power transfer functions for the matched
/// design at rho; rho == tau gives the unassisted machine and zero power.
struct ShapedResponse {
  lti::TransferFunction frequency;
  lti::TransferFunction power;
};
ShapedResponse shaped_response(const SystemParams& params, double rho);

struct ParetoPoint {
  double rho = 0.0;
  double nadir_mhz = 0.0;
  double peak_power = 0.0;
};

/// Matched-case trade-off over a rho grid (values in [0, tau]; tau is the
/// no-IBR endpoint). Output sorted by rho. Monotonicity is not enforced:
/// when the nadir is pinned at the steady state (small rho) the peak power
/// can still grow with rho; check with is_pareto_monotone.
std::vector<ParetoPoint> pareto_sweep(const SystemParams& params, std::vector<double> rho_grid, double step = 1.0,
                                      const SimConfig& sim = {});

/// True iff nadir is nondecreasing and peak power nonincreasing in rho, up to
/// a relative slack.
bool is_pareto_monotone(const std::vector<ParetoPoint>& points, double rel_slack = 1e-9);

/// 19 points evenly spaced over [0.05 tau, 0.95 tau] plus tau.
std::vector<double> default_rho_grid(const SystemParams& params);

/// Cheapest grid point (minimum peak power) whose nadir is within the bound;
/// nullopt when none qualifies.
std::optional<ParetoPoint> solve_min_peak(const SystemParams& params, const std::vector<double>& rho_grid,
                                          double nadir_bound_mhz, double step = 1.0, const SimConfig& sim = {});

/// Peak sensitivity a_g (tau - rho)/(tau^2 rho). rho in (0, tau).
double sensitivity_norm_closed_form(const SystemParams& params, double rho);

/// a_g (tau - rho) s^3 / ((rho s + 1)(tau s + 1)^2). rho in (0, tau).
lti::TransferFunction sensitivity_tf(const SystemParams& params, double rho);

/// Exact derivative of the relative closed-loop mismatch (G_cl - G*)/G* with
/// respect to beta at beta = 0. Equals sensitivity_tf divided by the target
/// denominator 2H rho s^2 + (a_l rho + 2H)s + a_l + a_g.
lti::TransferFunction mismatch_sensitivity_tf(const SystemParams& params, double rho);

/// Load-to-frequency closed loop written in terms of the scaled mismatch
/// beta = a_g (tau - rho)(1/b - 1/b_hat):
///   -1 / (2Hs + a_l + a_g [beta s^2 + (tau s+1)^2] / ((tau s+1)[beta s^2 + (tau s+1)(rho s+1)])).
lti::TransferFunction closed_loop_beta_form(const SystemParams& params, double rho, double beta);

/// a_g (tau - rho)(1/b - 1/b_hat).
double scaled_mismatch(const SystemParams& params, double rho);

struct MismatchCell {
  double rho = 0.0;
  double c = 1.0;
  double b = 1.0;
  bool stable = false;
  synthesis::Verdict verdict = synthesis::Verdict::kUnstable;
  std::optional<double> nadir_mhz;  ///< empty for unstable cells
};

/// Nadir for every (c, b) cell with gains synthesised from b_hat = c b and
/// the loop closed over the true b. Cells are certified first; unstable ones
/// carry no nadir. Row-major in c_grid then b_grid.
std::vector<MismatchCell> mismatch_sweep(const SystemParams& params, double rho, const std::vector<double>& c_grid,
                                         const std::vector<double>& b_grid, double step = 1.0,
                                         const SimConfig& sim = {});

struct SensitivityRow {
  double rho = 0.0;
  double norm_closed = 0.0;
  double norm_numeric = 0.0;
};
std::vector<SensitivityRow> sensitivity_sweep(const SystemParams& params, const std::vector<double>& rho_grid);

/// Worker count for sweeps: FREQSHAPE_THREADS if set, else hardware concurrency.
unsigned sweep_threads();

}  // namespace freqshape::analysis
