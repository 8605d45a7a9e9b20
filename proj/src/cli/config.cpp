#include "freqshape/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "freqshape/errors.hpp"
#include "freqshape/format.hpp"

namespace freqshape::cli {

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 6> kModes{{
    {Mode::kSynth, "synth"},
    {Mode::kCertify, "certify"},
    {Mode::kSimulate, "simulate"},
    {Mode::kPareto, "pareto"},
    {Mode::kMismatch, "mismatch"},
    {Mode::kSensitivity, "sensitivity"},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw InvalidParameter("config line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view text, int line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    fail(line, "malformed number '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_list(std::string_view text, int line) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number(text.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidParameter(msg);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModes)
    if (m == mode) return name;
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (const auto& [m, n] : kModes)
    if (n == name) return m;
  throw InvalidParameter("unknown mode '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "params" && section != "calibration" && section != "run")
        fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key '" + key + "' outside a section");
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");
    if (!seen.insert(section + "." + key).second) fail(line_no, "duplicate key '" + key + "'");

    auto& p = cfg.params;
    if (section == "params") {
      double* const target = key == "h"         ? &p.h
                             : key == "alpha_l" ? &p.alpha_l
                             : key == "alpha_g" ? &p.alpha_g
                             : key == "tau"     ? &p.tau
                             : key == "b"       ? &p.b
                             : key == "b_hat"   ? &p.b_hat
                             : key == "f_base"  ? &p.f_base
                                                : nullptr;
      if (!target) fail(line_no, "unknown key '" + key + "' in [params]");
      *target = parse_number(value, line_no);
    } else if (section == "calibration") {
      if (key != "anchors") fail(line_no, "unknown key '" + key + "' in [calibration]");
      cfg.anchors = std::string(value);
    } else if (key == "mode") {
      try {
        cfg.mode = parse_mode(value);
      } catch (const InvalidParameter& e) {
        fail(line_no, e.what());
      }
    } else if (key == "rho") {
      cfg.rho = parse_number(value, line_no);
    } else if (key == "rho_grid") {
      cfg.rho_grid = parse_list(value, line_no);
    } else if (key == "c_grid") {
      cfg.c_grid = parse_list(value, line_no);
    } else if (key == "b_grid") {
      cfg.b_grid = parse_list(value, line_no);
    } else if (key == "step_pu") {
      cfg.step_pu = parse_number(value, line_no);
    } else if (key == "dt") {
      cfg.dt = parse_number(value, line_no);
    } else if (key == "horizon") {
      cfg.horizon = parse_number(value, line_no);
    } else if (key == "nadir_bound") {
      cfg.nadir_bound = parse_number(value, line_no);
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(value);
    } else {
      fail(line_no, "unknown key '" + key + "' in [run]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  const auto& p = c.params;
  out << "[params]\n"
      << "h = " << format_double(p.h) << '\n'
      << "alpha_l = " << format_double(p.alpha_l) << '\n'
      << "alpha_g = " << format_double(p.alpha_g) << '\n'
      << "tau = " << format_double(p.tau) << '\n'
      << "b = " << format_double(p.b) << '\n'
      << "b_hat = " << format_double(p.b_hat) << '\n'
      << "f_base = " << format_double(p.f_base) << '\n';
  if (c.anchors) out << "\n[calibration]\nanchors = " << *c.anchors << '\n';
  out << "\n[run]\n";
  if (c.mode) out << "mode = " << to_string(*c.mode) << '\n';
  if (c.rho) out << "rho = " << format_double(*c.rho) << '\n';
  if (!c.rho_grid.empty()) out << "rho_grid = " << join(c.rho_grid) << '\n';
  if (!c.c_grid.empty()) out << "c_grid = " << join(c.c_grid) << '\n';
  if (!c.b_grid.empty()) out << "b_grid = " << join(c.b_grid) << '\n';
  out << "step_pu = " << format_double(c.step_pu) << '\n';
  if (c.dt) out << "dt = " << format_double(*c.dt) << '\n';
  if (c.horizon) out << "horizon = " << format_double(*c.horizon) << '\n';
  if (c.nadir_bound) out << "nadir_bound = " << format_double(*c.nadir_bound) << '\n';
  if (c.output_dir) out << "output_dir = " << *c.output_dir << '\n';
  return out.str();
}

void validate(const RunConfig& c, Mode mode) {
  c.params.validate();
  if (c.mode && *c.mode != mode)
    throw InvalidParameter("config mode '" + std::string(to_string(*c.mode)) + "' conflicts with requested mode '" +
                           std::string(to_string(mode)) + "'");
  require(std::isfinite(c.step_pu) && c.step_pu != 0.0, "step_pu must be finite and nonzero");
  if (c.dt) require(positive(*c.dt), "dt must be positive");
  if (c.horizon) require(positive(*c.horizon), "horizon must be positive");
  if (c.dt && c.horizon) require(*c.horizon >= *c.dt, "horizon must be at least dt");
  if (c.nadir_bound) require(positive(*c.nadir_bound), "nadir_bound must be positive");
  for (double v : c.c_grid) require(positive(v), "c_grid entries must be positive");
  for (double v : c.b_grid) require(positive(v), "b_grid entries must be positive");
  for (double v : c.rho_grid) require(std::isfinite(v) && v >= 0.0, "rho_grid entries must be nonnegative");

  const bool needs_rho = mode == Mode::kSynth || mode == Mode::kCertify || mode == Mode::kSimulate ||
                         mode == Mode::kMismatch;
  if (needs_rho) require(c.rho.has_value(), "mode '" + std::string(to_string(mode)) + "' needs rho");
  if (mode == Mode::kSensitivity)
    for (double v : c.rho_grid) require(v > 0.0, "sensitivity rho_grid entries must be positive");

  // Checks against tau wait until calibration has fixed it.
  if (c.anchors) return;
  const double tau = c.params.tau;
  if (c.rho) {
    const bool no_ibr_ok = mode == Mode::kSimulate;
    if (no_ibr_ok)
      plant::check_rho(c.params, *c.rho, plant::RhoDomain::kIncludeNoIbr);
    else
      plant::check_rho(c.params, *c.rho);
  }
  for (double v : c.rho_grid) {
    if (mode == Mode::kPareto)
      require(v <= tau, "pareto rho_grid entries must lie in [0, tau]");
    else if (mode == Mode::kSensitivity)
      require(v < tau, "sensitivity rho_grid entries must lie in (0, tau)");
  }
}

}  // namespace freqshape::cli
