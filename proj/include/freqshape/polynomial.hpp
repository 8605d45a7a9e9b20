#pragma once

#include <complex>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace freqshape::lti {

/// Real polynomial in s, coefficients stored in ascending powers.
///
/// Coefficients whose magnitude is below kTrimTolerance times the largest
/// coefficient are stripped from the top on construction, so the leading
/// coefficient of a nonzero polynomial is always significant. The zero
/// polynomial has no coefficients and degree kZeroDegree.
class Polynomial {
 public:
  static constexpr double kTrimTolerance = 1e-12;
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  Polynomial() = default;
  Polynomial(std::initializer_list<double> ascending);
  explicit Polynomial(std::vector<double> ascending);

  static Polynomial constant(double c);
  /// The monomial s.
  static Polynomial s();
  /// gain * prod(s - r). Imaginary parts of the expansion are discarded, so
  /// complex roots should come in conjugate pairs.
  static Polynomial from_roots(std::span<const std::complex<double>> roots, double gain = 1.0);

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] int degree() const;
  [[nodiscard]] double leading() const;
  /// Coefficient of s^k; zero beyond the degree.
  [[nodiscard]] double coeff(std::size_t k) const;
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

  [[nodiscard]] double operator()(double s) const;
  [[nodiscard]] std::complex<double> operator()(std::complex<double> s) const;

  [[nodiscard]] Polynomial derivative() const;
  [[nodiscard]] double max_abs_coeff() const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double k);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double k) { return a *= k; }
  friend Polynomial operator*(double k, Polynomial a) { return a *= k; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();

  std::vector<double> coeffs_;
};

Polynomial poly_mul(const Polynomial& a, const Polynomial& b);

/// Largest |a_k - b_k| over max(max|a|, max|b|). Zero for two zero polynomials.
double relative_coeff_distance(const Polynomial& a, const Polynomial& b);

}  // namespace freqshape::lti
