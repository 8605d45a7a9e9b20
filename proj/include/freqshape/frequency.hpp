#pragma once

#include <vector>

#include "freqshape/transfer_function.hpp"

namespace freqshape::lti {

/// Logarithmically spaced angular frequencies (rad/s).
struct FrequencyGrid {
  double omega_min = 1e-4;
  double omega_max = 1e4;
  int points = 400;

  [[nodiscard]] std::vector<double> values() const;
};

/// Grid-certified positive-realness test.
///
/// Requires (a) no poles in the open right half-plane, imaginary-axis poles
/// simple with nonnegative real residues, and (b) Re tf(jw) >= -1e-10 at
/// every grid frequency.
bool is_positive_real(const TransferFunction& tf, const FrequencyGrid& grid = {});

/// Peak gain sup_w |tf(jw)|.
///
/// Evaluates the grid, the DC and high-frequency limits and the pole natural
/// frequencies, then refines the best interior candidate by golden-section
/// search in log-frequency. Throws ImproperSystem or UnstableSystem.
double hinf_norm(const TransferFunction& tf, const FrequencyGrid& grid = {});

}  // namespace freqshape::lti
