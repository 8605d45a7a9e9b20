#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "freqshape/calibration.hpp"

namespace freqshape::figures {

/// Marked points of the reference nadir/peak-power trade-off (1 p.u. load
/// step): the no-IBR endpoint and rho = 0.8, 0.6, 0.4, 0.2 s.
std::vector<analysis::Anchor> pareto_anchors();

/// The full reference trade-off curve, (nadir mHz, peak p.u.) pairs ordered
/// from fast to slow shaping.
struct CurvePoint {
  double nadir_mhz;
  double peak_pu;
};
std::vector<CurvePoint> pareto_curve();

/// Matched-design (c = 1) nadirs of the susceptance-mismatch study at
/// rho = 0.9, 0.7, 0.5, 0.3 s, plus the weak-line (no-IBR) limit.
std::vector<analysis::Anchor> mismatch_anchors();

/// Reference nadir (mHz) over true susceptance for one curve of the mismatch study.
struct MismatchCurve {
  double rho;
  double c;
  std::vector<double> b;
  std::vector<double> nadir_mhz;
};

/// c = 1.05 curves for rho = 0.9, 0.7, 0.5, 0.3 s.
std::vector<MismatchCurve> mismatch_by_rho();
/// rho = 0.7 s curves for c = 1, 1.01, 1.05, 2, 5.
std::vector<MismatchCurve> mismatch_by_c();

/// Names accepted by figure_table().
std::vector<std::string> figure_names();

/// CSV rendering of a built-in table; throws InvalidParameter for unknown names.
std::string figure_table(std::string_view name);

/// Anchors for calibration by figure name ("pareto" or "mismatch").
std::vector<analysis::Anchor> figure_anchors(std::string_view name);

}  // namespace freqshape::figures
