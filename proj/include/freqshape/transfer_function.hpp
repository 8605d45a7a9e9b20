#pragma once

#include <complex>

#include "freqshape/polynomial.hpp"

namespace freqshape::lti {

/// SISO rational function num(s)/den(s) with a monic denominator.
class TransferFunction {
 public:
  /// The zero transfer function 0/1.
  TransferFunction();
  /// Throws AlgebraicDegeneracy if den is the zero polynomial.
  TransferFunction(Polynomial num, Polynomial den);

  static TransferFunction gain(double k);

  [[nodiscard]] const Polynomial& num() const { return num_; }
  [[nodiscard]] const Polynomial& den() const { return den_; }

  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
  [[nodiscard]] bool is_proper() const;
  [[nodiscard]] bool is_strictly_proper() const;
  /// Number of poles (degree of the denominator).
  [[nodiscard]] int order() const { return den_.degree(); }

  [[nodiscard]] std::complex<double> operator()(std::complex<double> s) const;
  [[nodiscard]] std::complex<double> at_frequency(double omega) const;
  /// tf(0); +-inf when there is a pole at the origin.
  [[nodiscard]] double dc_gain() const;

  friend TransferFunction operator+(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator-(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator*(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator*(double k, const TransferFunction& a);
  friend TransferFunction operator-(const TransferFunction& a);
  /// Throws AlgebraicDegeneracy when b is zero.
  friend TransferFunction operator/(const TransferFunction& a, const TransferFunction& b);

 private:
  Polynomial num_;
  Polynomial den_;
};

/// forward / (1 - sign * forward * loop), without any pole-zero cancellation.
/// sign = -1 is the usual negative feedback.
TransferFunction tf_feedback(const TransferFunction& forward, const TransferFunction& loop, int sign);

/// Pairs numerator and denominator roots that agree within rel_tol (relative to
/// the root magnitude, absolute below magnitude 1e-6) greedily by distance,
/// removes them, and rebuilds the function from the surviving roots and the
/// original gain. Returns tf unchanged when nothing pairs.
TransferFunction cancel_common_roots(const TransferFunction& tf, double rel_tol = 1e-8);

/// Removes the numerically largest common polynomial factor of num and den.
///
/// The cofactors u, v with num * v == den * u are read off the null vector of
/// the Sylvester-type convolution matrix, which is well conditioned even when
/// the common factor has repeated roots (where root pairing breaks down).
/// tol is the singular-value threshold relative to the largest singular value.
TransferFunction reduce_common_factors(const TransferFunction& tf, double tol = 1e-10);

/// Max relative coefficient distance of numerators and denominators, both in
/// monic-denominator form.
double coefficient_distance(const TransferFunction& a, const TransferFunction& b);

}  // namespace freqshape::lti
