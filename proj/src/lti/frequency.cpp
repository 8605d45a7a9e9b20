#include "freqshape/frequency.hpp"

#include <algorithm>
#include <cmath>

#include "freqshape/errors.hpp"
#include "freqshape/roots.hpp"

namespace freqshape::lti {

std::vector<double> FrequencyGrid::values() const {
  if (points < 2 || !(omega_min > 0.0) || !(omega_max > omega_min))
    throw InvalidParameter("FrequencyGrid: need >= 2 points and 0 < omega_min < omega_max");
  std::vector<double> w(static_cast<std::size_t>(points));
  const double lo = std::log10(omega_min);
  const double step = (std::log10(omega_max) - lo) / (points - 1);
  for (int k = 0; k < points; ++k) w[static_cast<std::size_t>(k)] = std::pow(10.0, lo + step * k);
  return w;
}

bool is_positive_real(const TransferFunction& tf, const FrequencyGrid& grid) {
  constexpr double kAxisTol = 1e-9;
  constexpr double kRealMargin = -1e-10;

  if (tf.is_zero()) return true;
  if (tf.den().degree() >= 1) {
    const auto poles = roots(tf.den());
    const Polynomial dden = tf.den().derivative();
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const auto& p = poles[i];
      const double tol = kAxisTol * std::max(1.0, std::abs(p));
      if (p.real() > tol) return false;
      if (p.real() < -tol) continue;
      // Imaginary-axis pole: must be simple with a real nonnegative residue.
      for (std::size_t j = 0; j < poles.size(); ++j)
        if (j != i && std::abs(poles[j] - p) <= 1e-6 * std::max(1.0, std::abs(p))) return false;
      const std::complex<double> onaxis(0.0, p.imag());
      const std::complex<double> residue = tf.num()(onaxis) / dden(onaxis);
      if (residue.real() < kRealMargin || std::abs(residue.imag()) > 1e-8 * std::max(1.0, std::abs(residue)))
        return false;
    }
  }

  for (double w : grid.values())
    if (tf.at_frequency(w).real() < kRealMargin) return false;
  return true;
}

namespace {

double gain_at(const TransferFunction& tf, double log_omega) { return std::abs(tf.at_frequency(std::exp(log_omega))); }

}  // namespace

double hinf_norm(const TransferFunction& tf, const FrequencyGrid& grid) {
  if (!tf.is_proper()) throw ImproperSystem("hinf_norm: improper transfer function");
  if (tf.is_zero()) return 0.0;
  if (tf.den().degree() >= 1 && !is_hurwitz(tf.den()))
    throw UnstableSystem("hinf_norm: denominator is not Hurwitz");

  const int n = tf.den().degree();
  double best = std::abs(tf.dc_gain());
  if (tf.num().degree() == n) best = std::max(best, std::abs(tf.num().leading() / tf.den().leading()));
  if (n == 0) return best;

  std::vector<double> candidates = grid.values();
  for (const auto& p : roots(tf.den())) {
    if (std::abs(p.imag()) > 0.0) candidates.push_back(std::abs(p.imag()));
    candidates.push_back(std::abs(p));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t arg = 0;
  double grid_best = -1.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double g = std::abs(tf.at_frequency(candidates[k]));
    if (g > grid_best) {
      grid_best = g;
      arg = k;
    }
  }
  if (grid_best <= best) return best;

  // Golden-section refinement on [w_{k-1}, w_{k+1}] in log-frequency.
  double a = std::log(candidates[arg > 0 ? arg - 1 : 0] * (arg > 0 ? 1.0 : 0.5));
  double b = std::log(candidates[std::min(arg + 1, candidates.size() - 1)] * (arg + 1 < candidates.size() ? 1.0 : 2.0));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = gain_at(tf, x1);
  double f2 = gain_at(tf, x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = gain_at(tf, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = gain_at(tf, x2);
    }
  }
  return std::max({best, grid_best, f1, f2});
}

}  // namespace freqshape::lti
