#include "freqshape/transfer_function.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "freqshape/errors.hpp"
#include "freqshape/roots.hpp"

namespace freqshape::lti {

TransferFunction::TransferFunction() : num_(), den_{1.0} {}

TransferFunction::TransferFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw AlgebraicDegeneracy("transfer function with zero denominator");
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ *= 1.0 / lead;
    den_ *= 1.0 / lead;
  }
}

TransferFunction TransferFunction::gain(double k) { return {Polynomial{k}, Polynomial{1.0}}; }

bool TransferFunction::is_proper() const { return num_.is_zero() || num_.degree() <= den_.degree(); }

bool TransferFunction::is_strictly_proper() const {
  return num_.is_zero() || num_.degree() < den_.degree();
}

std::complex<double> TransferFunction::operator()(std::complex<double> s) const {
  return num_(s) / den_(s);
}

std::complex<double> TransferFunction::at_frequency(double omega) const {
  return (*this)(std::complex<double>(0.0, omega));
}

double TransferFunction::dc_gain() const {
  const double n = num_.coeff(0);
  const double d = den_.coeff(0);
  if (d == 0.0) {
    if (n == 0.0) {
      // Common factor s: fall back to the limit via cancellation.
      return cancel_common_roots(*this).dc_gain();
    }
    return n > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return n / d;
}

TransferFunction operator+(const TransferFunction& a, const TransferFunction& b) {
  if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

TransferFunction operator-(const TransferFunction& a, const TransferFunction& b) { return a + (-b); }

TransferFunction operator*(const TransferFunction& a, const TransferFunction& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

TransferFunction operator*(double k, const TransferFunction& a) { return {k * a.num_, a.den_}; }

TransferFunction operator-(const TransferFunction& a) { return {-a.num_, a.den_}; }

TransferFunction operator/(const TransferFunction& a, const TransferFunction& b) {
  if (b.is_zero()) throw AlgebraicDegeneracy("division by the zero transfer function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

TransferFunction tf_feedback(const TransferFunction& forward, const TransferFunction& loop, int sign) {
  if (sign != 1 && sign != -1) throw InvalidParameter("tf_feedback: sign must be +1 or -1");
  if (!forward.is_proper() || !loop.is_proper())
    throw ImproperSystem("tf_feedback: both blocks must be proper");
  Polynomial num = forward.num() * loop.den();
  Polynomial den = forward.den() * loop.den() - static_cast<double>(sign) * (forward.num() * loop.num());
  if (den.is_zero()) throw AlgebraicDegeneracy("tf_feedback: closed-loop denominator vanishes");
  return {std::move(num), std::move(den)};
}

TransferFunction cancel_common_roots(const TransferFunction& tf, double rel_tol) {
  if (!(rel_tol > 0.0)) throw InvalidParameter("cancel_common_roots: rel_tol must be positive");
  if (tf.num().degree() < 1 || tf.den().degree() < 1) return tf;

  const auto zn = roots(tf.num());
  const auto zd = roots(tf.den());

  struct Candidate {
    double distance;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < zn.size(); ++i) {
    for (std::size_t j = 0; j < zd.size(); ++j) {
      const double distance = std::abs(zn[i] - zd[j]);
      const double magnitude = std::max(std::abs(zn[i]), std::abs(zd[j]));
      const double threshold = magnitude < 1e-6 ? rel_tol : rel_tol * magnitude;
      if (distance <= threshold) candidates.push_back({distance, i, j});
    }
  }
  if (candidates.empty()) return tf;
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });

  std::vector<bool> used_n(zn.size(), false);
  std::vector<bool> used_d(zd.size(), false);
  for (const auto& c : candidates) {
    if (used_n[c.i] || used_d[c.j]) continue;
    used_n[c.i] = true;
    used_d[c.j] = true;
  }

  std::vector<std::complex<double>> keep_n;
  std::vector<std::complex<double>> keep_d;
  for (std::size_t i = 0; i < zn.size(); ++i)
    if (!used_n[i]) keep_n.push_back(zn[i]);
  for (std::size_t j = 0; j < zd.size(); ++j)
    if (!used_d[j]) keep_d.push_back(zd[j]);

  return {Polynomial::from_roots(keep_n, tf.num().leading()), Polynomial::from_roots(keep_d, 1.0)};
}

namespace {

// Columns: p * x for x of degree `degree`, as a (deg p + degree + 1) x (degree + 1) block.
void fill_convolution(Eigen::MatrixXd& m, Eigen::Index col0, const std::vector<double>& p, int degree,
                      double sign) {
  for (int c = 0; c <= degree; ++c)
    for (std::size_t k = 0; k < p.size(); ++k) m(static_cast<Eigen::Index>(k) + c, col0 + c) = sign * p[k];
}

// Newton-polishes approximate roots of a cofactor against the full polynomial
// (the cancelled factor is taken monic, so the cofactor keeps its leading
// coefficient). Roots inside a cluster of the full polynomial are left alone:
// there Newton lands on one perturbed member of the cluster.
Polynomial polished(const Polynomial& cofactor, const Polynomial& full) {
  if (cofactor.degree() < 1) return cofactor;
  const Polynomial d = full.derivative();
  const std::vector<std::complex<double>> full_roots = roots(full);
  std::vector<std::complex<double>> rs = roots(cofactor);
  for (auto& r0 : rs) {
    const double radius = 1e-3 * std::max(1.0, std::abs(r0));
    const auto near = std::count_if(full_roots.begin(), full_roots.end(),
                                    [&](const std::complex<double>& z) { return std::abs(z - r0) <= radius; });
    if (near != 1) continue;
    std::complex<double> r = r0;
    for (int it = 0; it < 30; ++it) {
      const auto slope = d(r);
      if (slope == 0.0) break;
      const auto step = full(r) / slope;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    if (std::abs(full(r)) <= std::abs(full(r0)) && std::abs(r - r0) <= radius) r0 = r;
  }
  return Polynomial::from_roots(rs, full.leading());
}

}  // namespace

TransferFunction reduce_common_factors(const TransferFunction& tf, double tol) {
  const int m = tf.num().degree();
  const int n = tf.den().degree();
  if (m < 1 || n < 1) return tf;

  const double pscale = tf.num().max_abs_coeff();
  const double qscale = tf.den().max_abs_coeff();
  std::vector<double> p = tf.num().coeffs();
  std::vector<double> q = tf.den().coeffs();
  for (double& c : p) c /= pscale;
  for (double& c : q) c /= qscale;

  for (int k = std::min(m, n); k >= 1; --k) {
    const int du = m - k;  // degree of the reduced numerator
    const int dv = n - k;  // degree of the reduced denominator
    // p * v - q * u == 0, unknowns [v; u].
    Eigen::MatrixXd sylvester = Eigen::MatrixXd::Zero(m + n - k + 1, (dv + 1) + (du + 1));
    fill_convolution(sylvester, 0, p, dv, 1.0);
    fill_convolution(sylvester, dv + 1, q, du, -1.0);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sylvester, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    if (smallest > tol * sv(0)) continue;

    const Eigen::VectorXd null = svd.matrixV().col(svd.matrixV().cols() - 1);
    std::vector<double> v(null.data(), null.data() + dv + 1);
    std::vector<double> u(null.data() + dv + 1, null.data() + null.size());
    // Restore the original scaling: num/den = (pscale/qscale) * u/v.
    for (double& c : u) c *= pscale / qscale;
    Polynomial vp(std::move(v));
    if (vp.is_zero()) continue;
    Polynomial up(std::move(u));
    if (up.is_zero()) return {up, polished(vp, tf.den())};
    return {polished(up, tf.num()), polished(vp, tf.den())};
  }
  return tf;
}

double coefficient_distance(const TransferFunction& a, const TransferFunction& b) {
  return std::max(relative_coeff_distance(a.num(), b.num()), relative_coeff_distance(a.den(), b.den()));
}

}  // namespace freqshape::lti
