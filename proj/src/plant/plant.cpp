#include "freqshape/plant.hpp"

#include <cmath>
#include <string>

#include "freqshape/errors.hpp"

namespace freqshape::plant {

using lti::Polynomial;
using lti::TransferFunction;

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

// (1/b + kd)s^2 + kp s + ki: the inverse of the inverter power map times s.
Polynomial inverse_line_and_pid(double b, const PidGains& g) {
  Polynomial q{g.ki, g.kp, 1.0 / b + g.kd};
  if (q.is_zero()) throw AlgebraicDegeneracy("(1/b)s + PID(s) vanishes identically");
  return q;
}

}  // namespace

void SystemParams::validate() const {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"h", h}, {"alpha_l", alpha_l}, {"alpha_g", alpha_g}, {"tau", tau},
                {"b", b}, {"b_hat", b_hat},     {"f_base", f_base}};
  for (const auto& f : fields)
    if (!positive(f.value))
      throw InvalidParameter(std::string("SystemParams: ") + f.name + " must be positive, got " +
                             std::to_string(f.value));
}

void check_rho(const SystemParams& params, double rho, RhoDomain domain) {
  const bool ok = std::isfinite(rho) && rho >= 0.0 &&
                  (rho < params.tau || (domain == RhoDomain::kIncludeNoIbr && rho == params.tau));
  if (!ok)
    throw RhoOutOfRange("rho = " + std::to_string(rho) + " outside [0, tau = " + std::to_string(params.tau) +
                        (domain == RhoDomain::kIncludeNoIbr ? "]" : ")"));
}

TransferFunction sm_transfer(const SystemParams& p) {
  p.validate();
  const Polynomial turbine{1.0, p.tau};
  const Polynomial swing{p.alpha_l, 2.0 * p.h};
  return {turbine, swing * turbine + Polynomial{p.alpha_g}};
}

TransferFunction target_transfer(const SystemParams& p, const ShapingSpec& spec, RhoDomain domain) {
  p.validate();
  check_rho(p, spec.rho, domain);
  const double rho = spec.rho;
  return {Polynomial{-1.0, -rho},
          Polynomial{p.alpha_l + p.alpha_g, p.alpha_l * rho + 2.0 * p.h, 2.0 * p.h * rho}};
}

TransferFunction vsi_pid_transfer(const PidGains& g) {
  return {Polynomial{g.ki, g.kp, g.kd}, Polynomial::s()};
}

TransferFunction pvsi_from_wsm(const SystemParams& p, const PidGains& gains) {
  p.validate();
  return {-Polynomial::s(), inverse_line_and_pid(p.b, gains)};
}

TransferFunction closed_loop(const SystemParams& p, const PidGains& gains) {
  // w = -G_sm (p_l - p_vsi), p_vsi = G_pw w  =>  w = -G_sm / (1 - G_sm G_pw) p_l.
  return lti::tf_feedback(-sm_transfer(p), pvsi_from_wsm(p, gains), -1);
}

TransferFunction ibr_power_from_load(const SystemParams& p, const ShapingSpec& spec, RhoDomain domain) {
  p.validate();
  check_rho(p, spec.rho, domain);
  if (spec.rho == p.tau) return {};
  const double rho = spec.rho;
  const TransferFunction required{Polynomial{0.0, -p.alpha_g * (p.tau - rho)},
                                  Polynomial{1.0, p.tau} * Polynomial{1.0, rho}};
  return lti::cancel_common_roots(required * target_transfer(p, spec), 1e-8);
}

TransferFunction star_closed_loop(const SystemParams& p, const std::vector<StarBranch>& branches) {
  if (branches.empty()) throw InvalidParameter("star_closed_loop: need at least one branch");
  TransferFunction coupling;
  for (const auto& br : branches) {
    if (!positive(br.b)) throw InvalidParameter("star_closed_loop: branch susceptance must be positive");
    coupling = coupling + TransferFunction{Polynomial::s(), inverse_line_and_pid(br.b, br.gains)};
  }
  return lti::tf_feedback(-sm_transfer(p), coupling, 1);
}

}  // namespace freqshape::plant
