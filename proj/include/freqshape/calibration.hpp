#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freqshape/plant.hpp"

namespace freqshape::analysis {

/// One reference point of the matched design: the nadir (and optionally the
/// peak inverter power) observed for a 1 p.u. load step at rho.
struct Anchor {
  std::optional<double> rho;  ///< empty for the no-IBR configuration (rho = tau)
  double nadir_mhz = 0.0;
  std::optional<double> peak_pu;
};

struct AnchorResidual {
  Anchor anchor;
  double model_nadir_mhz = 0.0;
  double model_peak_pu = 0.0;
  double nadir_rel_error = 0.0;
  std::optional<double> peak_abs_error;
  /// peak_abs_error / max(peak_tolerance |peak|, peak_abs_floor); <= 1 is within tolerance.
  std::optional<double> peak_normalized_error;
};

struct CalibrationOptions {
  int starts = 16;
  unsigned seed = 20221213;
  double f_base = 60.0;
  double nadir_tolerance = 0.01;  ///< residual weight 1/tolerance
  double peak_tolerance = 0.02;
  double peak_abs_floor = 0.005;
  int lawson_rounds = 30;
  double max_residual = 0.05;  ///< CalibrationDiverged beyond this
};

struct CalibrationResult {
  plant::SystemParams params;
  std::vector<AnchorResidual> residuals;
  double worst_nadir_error = 0.0;           ///< relative
  double worst_peak_normalized_error = 0.0;  ///< see AnchorResidual

  double cost = 0.0;
};

/// Fits H, alpha_l, alpha_g and tau (f_base held fixed) to the anchors by
/// multi-start Levenberg-Marquardt on tolerance-weighted relative residuals,
/// followed by Lawson reweighting towards the minimax fit.
/// Needs at least 4 anchors; throws CalibrationDiverged when the worst
/// relative nadir residual, or peak error relative to max(|peak|, peak_abs_floor),
/// exceeds options.max_residual.
CalibrationResult calibrate(const std::vector<Anchor>& anchors, const CalibrationOptions& options = {});

/// Model nadir and peak for the anchors under the given parameters.
std::vector<AnchorResidual> evaluate_anchors(const plant::SystemParams& params, const std::vector<Anchor>& anchors,
                                             const CalibrationOptions& tolerances = {});

/// "key = value" calibration report.
std::string format_calibration_report(const CalibrationResult& result);

}  // namespace freqshape::analysis
