#include "freqshape/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freqshape/errors.hpp"
#include "freqshape/format.hpp"
#include "freqshape/frequency.hpp"
#include "freqshape/roots.hpp"

namespace freqshape::synthesis {

using lti::Polynomial;
using lti::TransferFunction;

namespace {

constexpr double kPoleMargin = -1e-9;

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

PidGains synthesize(const SystemParams& p, const ShapingSpec& spec) {
  if (!(p.b_hat > 0.0) || !(p.alpha_g > 0.0) || !(p.tau > 0.0))
    throw InvalidParameter("synthesize: alpha_g, tau and b_hat must be positive");
  plant::check_rho(p, spec.rho);
  const double rho = spec.rho;
  const double scale = p.alpha_g * (p.tau - rho);
  return {.kp = (p.tau + rho) / scale, .ki = 1.0 / scale, .kd = p.tau * rho / scale - 1.0 / p.b_hat};
}

PidGains synthesize_star_branch(const SystemParams& p, const ShapingSpec& spec, int n, double branch_b_hat) {
  if (n < 1) throw InvalidParameter("synthesize_star_branch: need n >= 1");
  SystemParams branch = p;
  branch.b_hat = branch_b_hat;
  // Each branch must supply (1/n) of the required admittance, i.e. n times
  // the single-inverter inverse coupling.
  const PidGains single = synthesize(branch, spec);
  const double k = static_cast<double>(n);
  return {.kp = k * single.kp, .ki = k * single.ki, .kd = k * (single.kd + 1.0 / branch_b_hat) - 1.0 / branch_b_hat};
}

bool in_set_U(const SystemParams& p, double rho) { return rho >= 0.0 && rho < p.tau; }

bool in_set_N(const SystemParams& p, double rho) {
  return in_set_U(p, rho) && rho >= p.alpha_g * p.tau / (p.b_hat * p.tau + p.alpha_g);
}

bool in_set_M(const SystemParams& p, double rho, double b_hat, double b) {
  if (!(b_hat < b)) return false;
  const double gap = b - b_hat;
  const double lower = p.tau * p.alpha_g * gap / (p.tau * b_hat * b + p.alpha_g * gap);
  return rho >= lower && rho < p.tau;
}

double xi(const SystemParams& p, double rho) {
  return p.tau * rho / (p.alpha_g * (p.tau - rho)) + (1.0 / p.b - 1.0 / p.b_hat);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kStableByConditionI:
      return "StableByConditionI";
    case Verdict::kStableByConditionII:
      return "StableByConditionII";
    case Verdict::kStableNumerically:
      return "StableNumerically";
    case Verdict::kUnstable:
      return "Unstable";
  }
  return "Unstable";
}

StabilityCertificate certify(const SystemParams& p, const ShapingSpec& spec) {
  p.validate();
  StabilityCertificate cert;
  cert.gains = synthesize(p, spec);
  cert.xi = xi(p, spec.rho);
  cert.sets = {in_set_U(p, spec.rho), in_set_N(p, spec.rho), in_set_M(p, spec.rho, p.b_hat, p.b)};

  const TransferFunction loop = lti::reduce_common_factors(plant::closed_loop(p, cert.gains));
  cert.max_pole_real = -std::numeric_limits<double>::infinity();
  if (loop.den().degree() >= 1) {
    cert.poles = lti::roots(loop.den());
    for (const auto& z : cert.poles) cert.max_pole_real = std::max(cert.max_pole_real, z.real());
  }
  const bool numerically_stable = cert.max_pole_real < kPoleMargin;

  const bool condition_i = p.b_hat >= p.b;
  const bool condition_ii = cert.sets.in_m;
  if (!numerically_stable) {
    cert.verdict = Verdict::kUnstable;
    cert.theorem_contradiction = condition_i || condition_ii;
  } else if (condition_i) {
    cert.verdict = Verdict::kStableByConditionI;
  } else if (condition_ii) {
    cert.verdict = Verdict::kStableByConditionII;
  } else {
    cert.verdict = Verdict::kStableNumerically;
  }

  const Polynomial pid_numerator{cert.gains.ki, cert.gains.kp, cert.gains.kd};
  cert.minimum_phase = pid_numerator.degree() >= 1 && lti::is_hurwitz(pid_numerator);

  const Polynomial coupling{cert.gains.ki, cert.gains.kp, 1.0 / p.b + cert.gains.kd};
  if (!coupling.is_zero()) {
    const TransferFunction ibr_branch{Polynomial::s(), coupling};
    const TransferFunction turbine{Polynomial{p.alpha_g}, Polynomial{1.0, p.tau}};
    const TransferFunction rotor{Polynomial{1.0}, Polynomial{p.alpha_l, 2.0 * p.h}};
    cert.ibr_branch_positive_real = lti::is_positive_real(ibr_branch);
    cert.effective_turbine_positive_real = lti::is_positive_real(turbine + ibr_branch);
    cert.passive_interconnection = lti::is_positive_real(rotor) && cert.effective_turbine_positive_real;
  }
  return cert;
}

std::string format_report(const SystemParams& p, const ShapingSpec& spec, const StabilityCertificate& c) {
  std::ostringstream out;
  out << "verdict = " << to_string(c.verdict) << '\n'
      << "rho = " << format_double(spec.rho) << '\n'
      << "b = " << format_double(p.b) << '\n'
      << "b_hat = " << format_double(p.b_hat) << '\n'
      << "kp = " << format_double(c.gains.kp) << '\n'
      << "ki = " << format_double(c.gains.ki) << '\n'
      << "kd = " << format_double(c.gains.kd) << '\n'
      << "xi = " << format_double(c.xi) << '\n'
      << "in_U = " << flag(c.sets.in_u) << '\n'
      << "in_N = " << flag(c.sets.in_n) << '\n'
      << "in_M = " << flag(c.sets.in_m) << '\n'
      << "max_pole_real = " << format_double(c.max_pole_real) << '\n'
      << "minimum_phase = " << flag(c.minimum_phase) << '\n'
      << "ibr_branch_positive_real = " << flag(c.ibr_branch_positive_real) << '\n'
      << "effective_turbine_positive_real = " << flag(c.effective_turbine_positive_real) << '\n'
      << "passive_interconnection = " << flag(c.passive_interconnection) << '\n'
      << "theorem_contradiction = " << flag(c.theorem_contradiction) << '\n';
  for (std::size_t k = 0; k < c.poles.size(); ++k)
    out << "pole[" << k << "] = " << format_double(c.poles[k].real()) << (c.poles[k].imag() < 0 ? " - " : " + ")
        << format_double(std::abs(c.poles[k].imag())) << "j\n";
  return out.str();
}

std::string certificate_csv_header() {
  return "rho,b,b_hat,verdict,max_pole_real,xi,kp,ki,kd,in_U,in_N,in_M,minimum_phase,passive_interconnection";
}

std::string certificate_csv_row(const SystemParams& p, const ShapingSpec& spec, const StabilityCertificate& c) {
  std::ostringstream out;
  out << format_double(spec.rho) << ',' << format_double(p.b) << ',' << format_double(p.b_hat) << ','
      << to_string(c.verdict) << ',' << format_double(c.max_pole_real) << ',' << format_double(c.xi) << ','
      << format_double(c.gains.kp) << ',' << format_double(c.gains.ki) << ',' << format_double(c.gains.kd) << ','
      << flag(c.sets.in_u) << ',' << flag(c.sets.in_n) << ',' << flag(c.sets.in_m) << ','
      << flag(c.minimum_phase) << ',' << flag(c.passive_interconnection);
  return out.str();
}

}  // namespace freqshape::synthesis
