#include "freqshape/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace freqshape::lti {

Polynomial::Polynomial(std::initializer_list<double> ascending) : coeffs_(ascending) { trim(); }

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) { trim(); }

Polynomial Polynomial::constant(double c) { return Polynomial{c}; }

Polynomial Polynomial::s() { return Polynomial{0.0, 1.0}; }

Polynomial Polynomial::from_roots(std::span<const std::complex<double>> roots, double gain) {
  std::vector<std::complex<double>> acc{1.0};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] += acc[k];
      next[k] -= r * acc[k];
    }
    acc = std::move(next);
  }
  std::vector<double> out(acc.size());
  std::transform(acc.begin(), acc.end(), out.begin(),
                 [gain](const std::complex<double>& c) { return gain * c.real(); });
  return Polynomial(std::move(out));
}

void Polynomial::trim() {
  const double scale = max_abs_coeff();
  if (scale == 0.0 || !std::isfinite(scale)) {
    if (scale == 0.0) coeffs_.clear();
    return;
  }
  while (!coeffs_.empty() && std::abs(coeffs_.back()) < kTrimTolerance * scale) coeffs_.pop_back();
}

int Polynomial::degree() const {
  return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
}

double Polynomial::leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

double Polynomial::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double k) {
  for (double& c : coeffs_) c *= k;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) { return a * b; }

double relative_coeff_distance(const Polynomial& a, const Polynomial& b) {
  const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
  if (scale == 0.0) return 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(a.coeff(k) - b.coeff(k)));
  return worst / scale;
}

}  // namespace freqshape::lti
