#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "freqshape/plant.hpp"

namespace freqshape::cli {

enum class Mode { kSynth, kCertify, kSimulate, kPareto, kMismatch, kSensitivity };

std::string_view to_string(Mode mode);
/// Throws InvalidParameter for unknown names.
Mode parse_mode(std::string_view name);

/// Run configuration, read from a line-oriented file:
///
///   # comment
///   [params]
///   h = 4
///   alpha_l = 1
///   alpha_g = 20
///   tau = 1
///   b = 1
///   b_hat = 1
///   f_base = 60
///
///   [calibration]
///   anchors = figure:pareto        # or figure:mismatch, or a CSV path
///
///   [run]
///   mode = pareto
///   rho = 0.5
///   rho_grid = 0.1, 0.2, 0.3
///   c_grid = 1, 1.05
///   b_grid = 0.1, 1, 10
///   step_pu = 1
///   dt = 0.001
///   horizon = 20
///   nadir_bound = 350
///   output_dir = out
///
/// With a [calibration] section, H, alpha_l, alpha_g and tau are fitted to the
/// anchors and replace the [params] values; b, b_hat and f_base are kept.
struct RunConfig {
  plant::SystemParams params;
  std::optional<std::string> anchors;
  std::optional<Mode> mode;
  std::optional<double> rho;
  std::vector<double> rho_grid;
  std::vector<double> c_grid;
  std::vector<double> b_grid;
  double step_pu = 1.0;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<double> nadir_bound;
  std::optional<std::string> output_dir;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws InvalidParameter on syntax errors, unknown sections or keys,
/// duplicate keys and malformed numbers.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Inverse of parse_config; numbers are written round-trip exact.
std::string serialize_config(const RunConfig& config);

/// Checks every field the mode will use against the library preconditions.
/// Throws InvalidParameter.
void validate(const RunConfig& config, Mode mode);

}  // namespace freqshape::cli
