#include "freqshape/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "freqshape/errors.hpp"

namespace freqshape::lti {
namespace {

// Parlett-Reinsch balancing by powers of two; keeps the companion eigenvalues
// accurate when coefficients span many orders of magnitude.
void balance(Eigen::MatrixXd& m) {
  constexpr double kRadix = 2.0;
  const Eigen::Index n = m.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
      double r = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kRadix * kRadix;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kRadix * kRadix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> roots(const Polynomial& p) {
  if (p.degree() < 1) throw DegreeZero("roots: polynomial has degree < 1");

  const auto& c = p.coeffs();
  std::size_t zeros = 0;
  while (c[zeros] == 0.0) ++zeros;

  std::vector<std::complex<double>> out(zeros, {0.0, 0.0});
  const auto n = static_cast<Eigen::Index>(c.size() - 1 - zeros);
  if (n == 0) return out;

  const double lead = c.back();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) companion(0, k) = -c[c.size() - 2 - k] / lead;
  for (Eigen::Index k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
  balance(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  const auto& ev = solver.eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k) out.push_back(ev[k]);
  return out;
}

double max_real_part(const Polynomial& p) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : roots(p)) m = std::max(m, r.real());
  return m;
}

RouthResult routh_array(const Polynomial& p) {
  if (p.degree() < 1) throw DegreeZero("routh_array: polynomial has degree < 1");

  // Rows hold descending-power coefficients: row 0 = a_n, a_{n-2}, ...
  const int n = p.degree();
  const double sign = p.leading() < 0.0 ? -1.0 : 1.0;
  const std::size_t width = static_cast<std::size_t>(n) / 2 + 1;
  std::vector<double> upper(width, 0.0);
  std::vector<double> lower(width, 0.0);
  for (int k = 0; k <= n; ++k) {
    const double a = sign * p.coeff(static_cast<std::size_t>(n - k));
    (k % 2 == 0 ? upper : lower)[static_cast<std::size_t>(k / 2)] = a;
  }

  RouthResult result;
  const double scale = p.max_abs_coeff();
  const double eps = 1e-10 * scale;
  result.first_column.push_back(upper[0]);

  for (int row = 1; row <= n; ++row) {
    double row_max = 0.0;
    for (double v : lower) row_max = std::max(row_max, std::abs(v));
    const double tiny = 1e-13 * std::max(row_max, std::abs(upper[0]));
    if (row_max <= 1e-13 * scale) {
      // Vanishing row: roots symmetric about the origin. Continue with the
      // derivative of the auxiliary polynomial so sign changes stay meaningful.
      result.zero_row = true;
      const int aux_degree = n - row + 1;
      for (std::size_t k = 0; k < width; ++k) {
        const int power = aux_degree - 2 * static_cast<int>(k);
        lower[k] = power > 0 ? power * upper[k] : 0.0;
      }
    }
    if (std::abs(lower[0]) <= tiny) {
      result.epsilon_substituted = true;
      lower[0] = eps;
    }
    result.first_column.push_back(lower[0]);

    std::vector<double> next(width, 0.0);
    for (std::size_t k = 0; k + 1 < width; ++k)
      next[k] = (lower[0] * upper[k + 1] - upper[0] * lower[k + 1]) / lower[0];
    upper = std::move(lower);
    lower = std::move(next);
  }

  for (std::size_t k = 1; k < result.first_column.size(); ++k)
    if ((result.first_column[k] > 0.0) != (result.first_column[k - 1] > 0.0)) ++result.sign_changes;
  return result;
}

bool is_hurwitz(const Polynomial& p) {
  if (p.degree() < 1) throw DegreeZero("is_hurwitz: polynomial has degree < 1");
  const double sign = p.leading() < 0.0 ? -1.0 : 1.0;
  // Necessary condition: all coefficients strictly positive.
  for (double c : p.coeffs())
    if (sign * c <= 0.0) return false;
  const RouthResult r = routh_array(p);
  return r.sign_changes == 0 && !r.zero_row && !r.epsilon_substituted;
}

}  // namespace freqshape::lti
