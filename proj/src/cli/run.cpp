#include "freqshape/run.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "freqshape/analysis.hpp"
#include "freqshape/errors.hpp"
#include "freqshape/figure_data.hpp"
#include "freqshape/format.hpp"
#include "freqshape/synthesis.hpp"

namespace freqshape::cli {

namespace {

namespace fs = std::filesystem;
using analysis::Anchor;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_number(std::string_view s, const std::string& what) {
  try {
    std::size_t used = 0;
    const std::string text(trim(s));
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidParameter("anchor table: malformed " + what + " '" + std::string(s) + "'");
  }
}

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw InvalidParameter("cannot create output directory '" + dir_.string() + "'");
  }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path path = dir_ / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw InvalidParameter("cannot write '" + path.string() + "'");
    return path;
  }

 private:
  fs::path dir_;
};

analysis::SimConfig sim_config(const RunConfig& c) {
  analysis::SimConfig sim;
  if (c.dt) sim.dt = *c.dt;
  if (c.horizon) sim.horizon = *c.horizon;
  return sim;
}

std::string gains_report(const PidGains& g) {
  std::ostringstream out;
  out << "kp = " << format_double(g.kp) << '\n'
      << "ki = " << format_double(g.ki) << '\n'
      << "kd = " << format_double(g.kd) << '\n';
  return out.str();
}

std::string pareto_csv(const std::vector<analysis::ParetoPoint>& pts) {
  std::ostringstream out;
  out << version_header() << "rho,nadir_mHz,peak_pu\n";
  for (const auto& p : pts)
    out << format_double(p.rho) << ',' << format_double(p.nadir_mhz) << ',' << format_double(p.peak_power) << '\n';
  return out.str();
}

std::string mismatch_csv(const std::vector<analysis::MismatchCell>& cells) {
  std::ostringstream out;
  out << version_header() << "rho,c,b,nadir_mHz,stable\n";
  for (const auto& c : cells)
    out << format_double(c.rho) << ',' << format_double(c.c) << ',' << format_double(c.b) << ','
        << (c.nadir_mhz ? format_double(*c.nadir_mhz) : "") << ',' << (c.stable ? "STABLE" : "UNSTABLE") << '\n';
  return out.str();
}

std::string sensitivity_csv(const std::vector<analysis::SensitivityRow>& rows) {
  std::ostringstream out;
  out << version_header() << "rho,norm_closed,norm_numeric\n";
  for (const auto& r : rows)
    out << format_double(r.rho) << ',' << format_double(r.norm_closed) << ',' << format_double(r.norm_numeric)
        << '\n';
  return out.str();
}

std::string metrics_report(const analysis::StepMetrics& m) {
  std::ostringstream out;
  out << "nadir_pu = " << format_double(m.nadir_pu) << '\n'
      << "nadir_mhz = " << format_double(m.nadir_mhz) << '\n'
      << "peak_power_pu = " << format_double(m.peak_power) << '\n'
      << "steady_state_freq_pu = " << format_double(m.steady_state_freq) << '\n'
      << "t_nadir = " << format_double(m.t_nadir) << '\n';
  return out.str();
}

std::string trajectory_csv(const analysis::SimulatedStep& s) {
  std::ostringstream out;
  out << version_header() << "t,freq_pu,power_pu\n";
  for (std::size_t k = 0; k < s.frequency.t.size(); ++k)
    out << format_double(s.frequency.t[k]) << ',' << format_double(s.frequency.y[k]) << ','
        << format_double(s.power.y.empty() ? 0.0 : s.power.y[k]) << '\n';
  return out.str();
}

std::vector<double> default_c_grid() { return {1.0, 1.01, 1.05, 2.0, 5.0}; }
std::vector<double> default_b_grid() { return {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}; }

std::vector<double> default_sensitivity_grid(const plant::SystemParams& p) {
  std::vector<double> grid = analysis::default_rho_grid(p);
  grid.pop_back();  // tau itself is not admissible
  return grid;
}

void execute(RunConfig cfg, Mode mode, const std::optional<std::string>& out_dir, std::ostream& out,
             std::ostream& err) {
  validate(cfg, mode);
  const std::optional<std::string> dir_name = out_dir ? out_dir : cfg.output_dir;

  if (cfg.anchors) {
    const std::vector<Anchor> anchors = resolve_anchors(*cfg.anchors);
    analysis::CalibrationOptions opts;
    opts.f_base = cfg.params.f_base;
    const analysis::CalibrationResult fit = analysis::calibrate(anchors, opts);
    cfg.params.h = fit.params.h;
    cfg.params.alpha_l = fit.params.alpha_l;
    cfg.params.alpha_g = fit.params.alpha_g;
    cfg.params.tau = fit.params.tau;
    err << "calibrated: worst nadir error " << format_double(fit.worst_nadir_error) << ", worst peak error "
        << format_double(fit.worst_peak_normalized_error) << " of tolerance\n";
    if (dir_name) OutputDir(*dir_name).write("calibration.txt", analysis::format_calibration_report(fit));
    cfg.anchors.reset();
    validate(cfg, mode);
  }

  const auto& p = cfg.params;
  const analysis::SimConfig sim = sim_config(cfg);
  switch (mode) {
    case Mode::kSynth: {
      const std::string report = gains_report(synthesis::synthesize(p, {*cfg.rho}));
      out << report;
      if (dir_name) OutputDir(*dir_name).write("gains.txt", report);
      break;
    }
    case Mode::kCertify: {
      const synthesis::StabilityCertificate cert = synthesis::certify(p, {*cfg.rho});
      const std::string report = synthesis::format_report(p, {*cfg.rho}, cert);
      out << report;
      if (dir_name) {
        const OutputDir dir(*dir_name);
        dir.write("certificate.txt", report);
        dir.write("certificate.csv", version_header() + synthesis::certificate_csv_header() + '\n' +
                                         synthesis::certificate_csv_row(p, {*cfg.rho}, cert) + '\n');
      }
      break;
    }
    case Mode::kSimulate: {
      const double rho = *cfg.rho;
      lti::TransferFunction freq;
      lti::TransferFunction power;
      if (rho == p.tau) {
        const analysis::ShapedResponse r = analysis::shaped_response(p, rho);
        freq = r.frequency;
        power = r.power;
      } else {
        const PidGains gains = synthesis::synthesize(p, {rho});
        const lti::TransferFunction loop = plant::closed_loop(p, gains);
        freq = lti::reduce_common_factors(loop);
        power = lti::reduce_common_factors(plant::pvsi_from_wsm(p, gains) * loop);
      }
      const analysis::SimulatedStep s = analysis::simulate_step(freq, power, cfg.step_pu, p.f_base, sim);
      out << metrics_report(s.metrics);
      OutputDir(dir_name.value_or(".")).write("simulate.csv", trajectory_csv(s));
      break;
    }
    case Mode::kPareto: {
      const std::vector<double> grid = cfg.rho_grid.empty() ? analysis::default_rho_grid(p) : cfg.rho_grid;
      const auto points = analysis::pareto_sweep(p, grid, cfg.step_pu, sim);
      OutputDir(dir_name.value_or(".")).write("pareto.csv", pareto_csv(points));
      out << "points = " << points.size() << '\n'
          << "monotone = " << (analysis::is_pareto_monotone(points) ? "true" : "false") << '\n';
      if (cfg.nadir_bound) {
        std::optional<analysis::ParetoPoint> best;
        for (const auto& pt : points)
          if (pt.nadir_mhz <= *cfg.nadir_bound &&
              (!best || pt.peak_power < best->peak_power || (pt.peak_power == best->peak_power && pt.rho > best->rho)))
            best = pt;
        if (best)
          out << "rho_star = " << format_double(best->rho) << '\n'
              << "nadir_mhz = " << format_double(best->nadir_mhz) << '\n'
              << "peak_pu = " << format_double(best->peak_power) << '\n';
        else
          out << "rho_star = infeasible\n";
      }
      break;
    }
    case Mode::kMismatch: {
      const auto cells = analysis::mismatch_sweep(p, *cfg.rho, cfg.c_grid.empty() ? default_c_grid() : cfg.c_grid,
                                                  cfg.b_grid.empty() ? default_b_grid() : cfg.b_grid, cfg.step_pu,
                                                  sim);
      OutputDir(dir_name.value_or(".")).write("mismatch.csv", mismatch_csv(cells));
      std::size_t unstable = 0;
      for (const auto& c : cells) unstable += c.stable ? 0 : 1;
      out << "cells = " << cells.size() << '\n' << "unstable_cells = " << unstable << '\n';
      break;
    }
    case Mode::kSensitivity: {
      const auto rows =
          analysis::sensitivity_sweep(p, cfg.rho_grid.empty() ? default_sensitivity_grid(p) : cfg.rho_grid);
      OutputDir(dir_name.value_or(".")).write("sensitivity.csv", sensitivity_csv(rows));
      out << "rows = " << rows.size() << '\n';
      break;
    }
  }
}

}  // namespace

std::string version_header() { return std::string("# freqshape ") + kVersion + '\n'; }

std::vector<Anchor> parse_anchor_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  std::vector<Anchor> anchors;
  while (std::getline(in, line)) {
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    if (!header_seen) {
      if (row != "rho,nadir_mHz,peak_pu" && row != "rho,nadir_mHz")
        throw InvalidParameter("anchor table: expected header 'rho,nadir_mHz,peak_pu'");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest = row;
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() < 2 || fields.size() > 3) throw InvalidParameter("anchor table: expected 2 or 3 fields");
    Anchor a;
    if (fields[0] != "no_ibr") a.rho = to_number(fields[0], "rho");
    a.nadir_mhz = to_number(fields[1], "nadir");
    if (fields.size() == 3 && !fields[2].empty()) a.peak_pu = to_number(fields[2], "peak");
    anchors.push_back(a);
  }
  return anchors;
}

std::vector<Anchor> resolve_anchors(const std::string& source) {
  constexpr std::string_view prefix = "figure:";
  if (source.rfind(prefix, 0) == 0) return figures::figure_anchors(std::string_view(source).substr(prefix.size()));
  std::ifstream in(source);
  if (!in) throw InvalidParameter("cannot read anchor file '" + source + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_anchor_csv(text.str());
}

int run(const RunConfig& config, Mode mode, const std::optional<std::string>& out_dir, std::ostream& out,
        std::ostream& err) {
  try {
    execute(config, mode, out_dir, out, err);
    return kOk;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
}

}  // namespace freqshape::cli
