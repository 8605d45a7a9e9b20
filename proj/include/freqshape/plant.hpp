#pragma once

#include <vector>

#include "freqshape/pid_gains.hpp"
#include "freqshape/transfer_function.hpp"

namespace freqshape::plant {

/// Aggregate two-bus system: one machine behind a lossless line to one
/// grid-forming inverter. Frequencies and powers are per-unit deviations.
struct SystemParams {
  double h = 4.0;         ///< inertia constant H (s)
  double alpha_l = 1.0;   ///< load frequency sensitivity
  double alpha_g = 20.0;  ///< aggregate governor gain (inverse droop)
  double tau = 1.0;       ///< turbine time constant (s)
  double b = 1.0;         ///< true line susceptance (p.u.)
  double b_hat = 1.0;     ///< susceptance estimate used by the controller (p.u.)
  double f_base = 60.0;   ///< reporting base frequency (Hz), only used for mHz output

  /// Throws InvalidParameter unless every field is positive and finite.
  void validate() const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Effective turbine time constant of the shaped target response.
struct ShapingSpec {
  double rho = 0.5;
};

/// Whether rho == tau is accepted as the "no inverter" configuration.
enum class RhoDomain { kAdmissible, kIncludeNoIbr };

/// Throws RhoOutOfRange unless 0 <= rho < tau (or rho == tau with kIncludeNoIbr).
void check_rho(const SystemParams& params, double rho, RhoDomain domain = RhoDomain::kAdmissible);

/// Machine frequency response to its own power, (tau s + 1)/((2Hs + a_l)(tau s + 1) + a_g).
/// The machine frequency is w = -G * p_sm.
lti::TransferFunction sm_transfer(const SystemParams& params);

/// Shaped load-to-frequency target
/// -(rho s + 1)/(2H rho s^2 + (a_l rho + 2H)s + a_l + a_g).
/// With kIncludeNoIbr and rho == tau this is the unassisted machine response.
lti::TransferFunction target_transfer(const SystemParams& params, const ShapingSpec& spec,
                                      RhoDomain domain = RhoDomain::kAdmissible);

/// kp + ki/s + kd s as (kd s^2 + kp s + ki)/s. Improper; only used in algebra.
lti::TransferFunction vsi_pid_transfer(const PidGains& gains);

/// Inverter power from machine frequency through the line and the inverter
/// control: -1/((1/b)s + PID(s)) = -b s/((kd b + 1)s^2 + kp b s + ki b).
lti::TransferFunction pvsi_from_wsm(const SystemParams& params, const PidGains& gains);

/// Load-to-frequency closed loop with the inverter in feedback around the
/// machine (uses the true b). No common factors are removed.
lti::TransferFunction closed_loop(const SystemParams& params, const PidGains& gains);

/// Inverter power required by the target, per unit load, after cancelling the
/// stable (rho s + 1) factor. Zero for the no-IBR configuration.
lti::TransferFunction ibr_power_from_load(const SystemParams& params, const ShapingSpec& spec,
                                          RhoDomain domain = RhoDomain::kAdmissible);

/// One inverter of a star: its line susceptance and its controller.
struct StarBranch {
  double b = 1.0;
  PidGains gains;
};

/// Machine with several inverters on radial lines:
/// w = -G_sm / (1 + sum_i G_sm s / Q_i(s)) p_l, Q_i = (1/b_i + kd_i)s^2 + kp_i s + ki_i.
lti::TransferFunction star_closed_loop(const SystemParams& params, const std::vector<StarBranch>& branches);

}  // namespace freqshape::plant
