#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freqshape/calibration.hpp"
#include "freqshape/config.hpp"

namespace freqshape::cli {

inline constexpr const char* kVersion = "1.0.0";

/// First line of every CSV written by the tool.
std::string version_header();

enum ExitCode : int { kOk = 0, kValidationError = 1, kComputationError = 2 };

/// Anchor table in the --quote-figure layout: header "rho,nadir_mHz,peak_pu",
/// rho may be "no_ibr", peak may be empty, lines starting with '#' skipped.
std::vector<analysis::Anchor> parse_anchor_csv(const std::string& text);

/// "figure:<name>" selects a built-in anchor set, anything else is a CSV path.
std::vector<analysis::Anchor> resolve_anchors(const std::string& source);

/// Validates, calibrates if requested, runs the mode and writes its outputs.
/// out_dir overrides config.output_dir. Reports go to `out`, diagnostics to
/// `err`. Returns an ExitCode; library errors never escape.
int run(const RunConfig& config, Mode mode, const std::optional<std::string>& out_dir, std::ostream& out,
        std::ostream& err);

}  // namespace freqshape::cli
