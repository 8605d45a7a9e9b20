#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "freqshape/pid_gains.hpp"
#include "freqshape/plant.hpp"

namespace freqshape::synthesis {

using plant::ShapingSpec;
using plant::SystemParams;

/// PID gains that make the closed loop equal the shaped target when
/// b_hat == b:
///   kd = tau rho/(a_g (tau - rho)) - 1/b_hat
///   kp = (tau + rho)/(a_g (tau - rho))
///   ki = 1/(a_g (tau - rho))
/// Reads params.b_hat only, never params.b. Throws RhoOutOfRange.
PidGains synthesize(const SystemParams& params, const ShapingSpec& spec);

/// Gains for each of n identical star branches so that their inverse
/// couplings sum to the single-inverter requirement (each carries 1/n of it).
PidGains synthesize_star_branch(const SystemParams& params, const ShapingSpec& spec, int n, double branch_b_hat);

/// 0 <= rho < tau.
bool in_set_U(const SystemParams& params, double rho);
/// a_g tau/(b_hat tau + a_g) <= rho < tau, i.e. kd >= 0.
bool in_set_N(const SystemParams& params, double rho);
/// b_hat < b and tau a_g (b - b_hat)/(tau b_hat b + a_g (b - b_hat)) <= rho < tau.
bool in_set_M(const SystemParams& params, double rho, double b_hat, double b);

/// Derivative coefficient of the inverse inverter power map,
/// tau rho/(a_g (tau - rho)) + 1/b - 1/b_hat.
double xi(const SystemParams& params, double rho);

enum class Verdict { kStableByConditionI, kStableByConditionII, kStableNumerically, kUnstable };

std::string_view to_string(Verdict v);

struct SetMembership {
  bool in_u = false;
  bool in_n = false;
  bool in_m = false;
};

struct StabilityCertificate {
  Verdict verdict = Verdict::kUnstable;
  /// Poles of the closed loop after removing common factors.
  std::vector<std::complex<double>> poles;
  double max_pole_real = 0.0;
  SetMembership sets;
  double xi = 0.0;
  PidGains gains;
  /// Zeros of kd s^2 + kp s + ki in the open left half-plane.
  bool minimum_phase = false;
  /// s/((1/b + kd)s^2 + kp s + ki) is positive real.
  bool ibr_branch_positive_real = false;
  /// a_g/(tau s + 1) + s/((1/b + kd)s^2 + kp s + ki) is positive real.
  bool effective_turbine_positive_real = false;
  /// Strictly passive rotor in negative feedback with a passive effective turbine.
  bool passive_interconnection = false;
  /// A sufficient condition held but the pole check disagrees.
  bool theorem_contradiction = false;
};

/// Certificate for the controller synthesised from params.b_hat acting on a
/// line with susceptance params.b. Precedence: condition (i) b_hat >= b,
/// condition (ii) (rho, b_hat) in M, then the numeric pole check.
StabilityCertificate certify(const SystemParams& params, const ShapingSpec& spec);

/// Multi-line "key = value" report.
std::string format_report(const SystemParams& params, const ShapingSpec& spec, const StabilityCertificate& cert);

/// CSV header/row pair for sweep outputs.
std::string certificate_csv_header();
std::string certificate_csv_row(const SystemParams& params, const ShapingSpec& spec, const StabilityCertificate& cert);

}  // namespace freqshape::synthesis
