#pragma once

#include <complex>
#include <vector>

#include "freqshape/polynomial.hpp"

namespace freqshape::lti {

/// All complex roots, from the eigenvalues of the balanced companion matrix.
/// Exact zero roots (vanishing low-order coefficients) are returned exactly.
/// Throws DegreeZero for constant (or zero) polynomials.
std::vector<std::complex<double>> roots(const Polynomial& p);

/// Largest real part among the roots.
double max_real_part(const Polynomial& p);

struct RouthResult {
  /// Sign changes in the first column, i.e. the number of open right
  /// half-plane roots when no row vanished.
  int sign_changes = 0;
  /// A first-column zero was replaced by epsilon.
  bool epsilon_substituted = false;
  /// An entire row vanished (roots symmetric about the origin).
  bool zero_row = false;
  std::vector<double> first_column;
};

RouthResult routh_array(const Polynomial& p);

/// True iff every root lies strictly in the open left half-plane, decided
/// from the Routh array. Marginal cases (zero pivots, zero rows) are not
/// Hurwitz. The sign of p is normalised first. Throws DegreeZero.
bool is_hurwitz(const Polynomial& p);

}  // namespace freqshape::lti
