#include "freqshape/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "freqshape/analysis.hpp"
#include "freqshape/errors.hpp"
#include "freqshape/format.hpp"
#include "parallel.hpp"

namespace freqshape::analysis {

namespace {

using Eigen::VectorXd;

constexpr int kFitDims = 4;  // log H, log a_l, log a_g, log tau

SystemParams unpack(const VectorXd& x, double f_base) {
  SystemParams p;
  p.h = std::exp(x[0]);
  p.alpha_l = std::exp(x[1]);
  p.alpha_g = std::exp(x[2]);
  p.tau = std::exp(x[3]);
  p.f_base = f_base;
  return p;
}

VectorXd pack(const SystemParams& p) {
  VectorXd x(kFitDims);
  x << std::log(p.h), std::log(p.alpha_l), std::log(p.alpha_g), std::log(p.tau);
  return x;
}

double max_anchor_rho(const std::vector<Anchor>& anchors) {
  double r = 0.0;
  for (const auto& a : anchors)
    if (a.rho) r = std::max(r, *a.rho);
  return r;
}

double peak_scale(const CalibrationOptions& opt, double target) {
  return std::max(opt.peak_tolerance * std::abs(target), opt.peak_abs_floor);
}

class Problem {
 public:
  Problem(const std::vector<Anchor>& anchors, const CalibrationOptions& opt) : anchors_(anchors), opt_(opt) {
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      rows_.push_back({i, false});
      if (anchors[i].peak_pu && anchors[i].rho) rows_.push_back({i, true});
    }
  }

  std::size_t size() const { return rows_.size(); }

  /// Tolerance-normalised residuals; nullopt when some anchor rho is not below tau.
  std::optional<VectorXd> residuals(const VectorXd& x) const {
    const SystemParams p = unpack(x, opt_.f_base);
    if (!std::isfinite(p.h) || !std::isfinite(p.alpha_g) || !std::isfinite(p.tau)) return std::nullopt;
    if (max_anchor_rho(anchors_) >= p.tau) return std::nullopt;
    std::vector<StepMetrics> metrics;
    metrics.reserve(anchors_.size());
    try {
      for (const auto& a : anchors_) {
        const ShapedResponse r = shaped_response(p, a.rho.value_or(p.tau));
        metrics.push_back(step_metrics(r.frequency, r.power, 1.0, p.f_base));
      }
    } catch (const Error&) {
      return std::nullopt;
    }
    VectorXd res(rows_.size());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto [i, is_peak] = rows_[k];
      const Anchor& a = anchors_[i];
      if (is_peak)
        res[k] = (metrics[i].peak_power - *a.peak_pu) / peak_scale(opt_, *a.peak_pu);
      else
        res[k] = (metrics[i].nadir_mhz / a.nadir_mhz - 1.0) / opt_.nadir_tolerance;
    }
    return res;
  }

 private:
  std::vector<Anchor> anchors_;
  CalibrationOptions opt_;
  std::vector<std::pair<std::size_t, bool>> rows_;
};

struct Fit {
  VectorXd x;
  VectorXd r;
  double worst = std::numeric_limits<double>::infinity();
};

// Levenberg-Marquardt on sum (w_k r_k)^2 with a forward-difference Jacobian.
Fit levenberg_marquardt(const Problem& prob, VectorXd x, const VectorXd& weights, int max_iter) {
  auto weighted_cost = [&](const VectorXd& r) { return (weights.array() * r.array()).square().sum(); };
  std::optional<VectorXd> r0 = prob.residuals(x);
  if (!r0) return {};
  VectorXd r = *r0;
  double cost = weighted_cost(r);
  double lambda = 1e-3;
  const double h = 1e-4;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd jac(r.size(), kFitDims);
    bool ok = true;
    for (int j = 0; j < kFitDims && ok; ++j) {
      VectorXd xh = x;
      xh[j] += h;
      const auto rh = prob.residuals(xh);
      if (!rh) {
        ok = false;
        break;
      }
      jac.col(j) = (*rh - r) / h;
    }
    if (!ok) break;
    const Eigen::MatrixXd wj = weights.asDiagonal() * jac;
    const VectorXd wr = weights.asDiagonal() * r;
    const Eigen::MatrixXd jtj = wj.transpose() * wj;
    const VectorXd g = wj.transpose() * wr;
    bool improved = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
      const VectorXd dx = lhs.ldlt().solve(-g);
      const VectorXd xn = x + dx.cwiseMax(-1.0).cwiseMin(1.0);
      const auto rn = prob.residuals(xn);
      if (rn && weighted_cost(*rn) < cost) {
        const double rel_gain = (cost - weighted_cost(*rn)) / std::max(cost, 1e-300);
        x = xn;
        r = *rn;
        cost = weighted_cost(r);
        lambda = std::max(lambda / 3.0, 1e-9);
        improved = true;
        if (rel_gain < 1e-10) it = max_iter;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return {x, r, r.cwiseAbs().maxCoeff()};
}

// Lawson iteration: reweight towards the largest residuals to approach the minimax fit.
Fit lawson(const Problem& prob, Fit start, int rounds) {
  Fit best = start;
  VectorXd w = VectorXd::Ones(static_cast<Eigen::Index>(prob.size()));
  Fit cur = start;
  for (int round = 0; round < rounds; ++round) {
    VectorXd mag = cur.r.cwiseAbs();
    VectorXd u = w.array().square() * mag.array();
    if (!(u.sum() > 0.0)) break;
    u /= u.sum();
    w = u.cwiseSqrt();
    Fit next = levenberg_marquardt(prob, cur.x, w, 15);
    if (!std::isfinite(next.worst)) break;
    cur = next;
    if (cur.worst < best.worst) best = cur;
  }
  return best;
}

}  // namespace

std::vector<AnchorResidual> evaluate_anchors(const SystemParams& params, const std::vector<Anchor>& anchors,
                                             const CalibrationOptions& tolerances) {
  params.validate();
  std::vector<AnchorResidual> out;
  out.reserve(anchors.size());
  for (const auto& a : anchors) {
    const ShapedResponse r = shaped_response(params, a.rho.value_or(params.tau));
    const StepMetrics m = step_metrics(r.frequency, r.power, 1.0, params.f_base);
    AnchorResidual res;
    res.anchor = a;
    res.model_nadir_mhz = m.nadir_mhz;
    res.model_peak_pu = m.peak_power;
    res.nadir_rel_error = std::abs(m.nadir_mhz / a.nadir_mhz - 1.0);
    if (a.peak_pu) {
      res.peak_abs_error = std::abs(m.peak_power - *a.peak_pu);
      res.peak_normalized_error = *res.peak_abs_error / peak_scale(tolerances, *a.peak_pu);
    }
    out.push_back(res);
  }
  return out;
}

CalibrationResult calibrate(const std::vector<Anchor>& anchors, const CalibrationOptions& options) {
  if (anchors.size() < 4) throw InvalidParameter("calibrate: at least 4 anchors are required");
  if (options.starts < 1) throw InvalidParameter("calibrate: starts must be >= 1");
  for (const auto& a : anchors) {
    if (!(a.nadir_mhz > 0.0)) throw InvalidParameter("calibrate: anchor nadir must be positive");
    if (a.rho && !(*a.rho >= 0.0)) throw InvalidParameter("calibrate: anchor rho must be nonnegative");
  }
  const Problem prob(anchors, options);
  const double rho_max = max_anchor_rho(anchors);

  // Starting points: log-uniform over the default plant ranges, with tau above
  // every anchor rho, then (H, a_l, a_g) rescaled jointly so the first anchor's
  // nadir is matched (the nadir scales inversely with that joint factor).
  std::mt19937_64 rng(options.seed);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  std::vector<VectorXd> starts;
  for (int k = 0; k < options.starts; ++k) {
    SystemParams p;
    p.f_base = options.f_base;
    p.h = log_uniform(1.0, 10.0);
    p.alpha_l = log_uniform(0.1, 5.0);
    p.alpha_g = log_uniform(5.0, 50.0);
    p.tau = std::max(log_uniform(0.5, 10.0), 1.05 * rho_max + 1e-6);
    try {
      const ShapedResponse r = shaped_response(p, anchors.front().rho.value_or(p.tau));
      const double nadir = step_metrics(r.frequency, r.power, 1.0, p.f_base).nadir_mhz;
      const double scale = nadir / anchors.front().nadir_mhz;
      p.h *= scale;
      p.alpha_l *= scale;
      p.alpha_g *= scale;
    } catch (const Error&) {
    }
    starts.push_back(pack(p));
  }

  std::vector<Fit> fits(starts.size());
  const VectorXd ones = VectorXd::Ones(static_cast<Eigen::Index>(prob.size()));
  detail::parallel_for(starts.size(), sweep_threads(),
                       [&](std::size_t i) { fits[i] = levenberg_marquardt(prob, starts[i], ones, 60); });
  auto sq = [](const Fit& f) { return std::isfinite(f.worst) ? f.r.squaredNorm() : std::numeric_limits<double>::infinity(); };
  const auto best_ls = std::min_element(fits.begin(), fits.end(), [&](const Fit& a, const Fit& b) { return sq(a) < sq(b); });
  if (!std::isfinite(best_ls->worst)) throw CalibrationDiverged("calibrate: no start produced a feasible fit");
  const Fit best = lawson(prob, *best_ls, options.lawson_rounds);

  CalibrationResult out;
  out.params = unpack(best.x, options.f_base);
  out.cost = best.r.squaredNorm();
  out.residuals = evaluate_anchors(out.params, anchors, options);
  double worst_relative = 0.0;
  for (const auto& r : out.residuals) {
    out.worst_nadir_error = std::max(out.worst_nadir_error, r.nadir_rel_error);
    worst_relative = std::max(worst_relative, r.nadir_rel_error);
    if (r.peak_abs_error) {
      out.worst_peak_normalized_error = std::max(out.worst_peak_normalized_error, *r.peak_normalized_error);
      worst_relative =
          std::max(worst_relative, *r.peak_abs_error / std::max(std::abs(*r.anchor.peak_pu), options.peak_abs_floor));
    }
  }
  if (worst_relative > options.max_residual) {
    throw CalibrationDiverged("calibrate: worst relative residual " + format_double(worst_relative) + " exceeds " +
                              format_double(options.max_residual));
  }
  return out;
}

std::string format_calibration_report(const CalibrationResult& result) {
  std::ostringstream out;
  const auto& p = result.params;
  out << "h = " << format_double(p.h) << '\n'
      << "alpha_l = " << format_double(p.alpha_l) << '\n'
      << "alpha_g = " << format_double(p.alpha_g) << '\n'
      << "tau = " << format_double(p.tau) << '\n'
      << "f_base = " << format_double(p.f_base) << '\n'
      << "cost = " << format_double(result.cost) << '\n'
      << "worst_nadir_rel_error = " << format_double(result.worst_nadir_error) << '\n'
      << "worst_peak_normalized_error = " << format_double(result.worst_peak_normalized_error) << '\n';
  for (std::size_t i = 0; i < result.residuals.size(); ++i) {
    const auto& r = result.residuals[i];
    const std::string key = "anchor." + std::to_string(i);
    out << key << ".rho = " << (r.anchor.rho ? format_double(*r.anchor.rho) : std::string("no_ibr")) << '\n'
        << key << ".nadir_mhz = " << format_double(r.anchor.nadir_mhz) << '\n'
        << key << ".model_nadir_mhz = " << format_double(r.model_nadir_mhz) << '\n'
        << key << ".nadir_rel_error = " << format_double(r.nadir_rel_error) << '\n';
    if (r.anchor.peak_pu) {
      out << key << ".peak_pu = " << format_double(*r.anchor.peak_pu) << '\n'
          << key << ".model_peak_pu = " << format_double(r.model_peak_pu) << '\n'
          << key << ".peak_abs_error = " << format_double(*r.peak_abs_error) << '\n'
          << key << ".peak_normalized_error = " << format_double(*r.peak_normalized_error) << '\n';
    }
  }
  return out.str();
}

}  // namespace freqshape::analysis
