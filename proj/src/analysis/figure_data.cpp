#include "freqshape/figure_data.hpp"

#include <sstream>

#include "freqshape/errors.hpp"
#include "freqshape/format.hpp"

namespace freqshape::figures {

namespace {

const std::vector<double> kSusceptance{0.001, 0.01, 0.1, 1, 10, 100, 1000};

}  // namespace

std::vector<analysis::Anchor> pareto_anchors() {
  return {
      {std::nullopt, 424.177710580167, 7.61307890438353e-17},
      {0.8, 389.18896868097, 0.135018331344184},
      {0.6, 348.972412047316, 0.27558446625031},
      {0.4, 300.758677900104, 0.418307175705351},
      {0.2, 237.099422510742, 0.545341275691656},
  };
}

std::vector<CurvePoint> pareto_curve() {
  return {
      {211.215244610773, 0.580209654966924}, {214.569967689315, 0.567773220643045},
      {237.099422510742, 0.545341275691656}, {255.483677460081, 0.517239860610336},
      {271.850407845722, 0.485993769840851}, {286.837130248348, 0.452721742230255},
      {300.758677900104, 0.418307175705351}, {313.811576797325, 0.383119595376276},
      {326.133465966226, 0.347447698936057}, {337.827112446415, 0.311508776662964},
      {348.972412047316, 0.27558446625031},  {359.633261333538, 0.24016316090152},
      {369.861861334796, 0.204772033036198}, {379.701584037251, 0.169641481637973},
      {389.18896868097, 0.135018331344184},  {398.355159940232, 0.100621046725119},
      {407.226972173342, 0.0667065503472208}, {415.827694416735, 0.0331451324789037},
      {424.177710580167, 7.61307890438353e-17},
  };
}

std::vector<analysis::Anchor> mismatch_anchors() {
  return {
      {0.9, 407.491702125468, std::nullopt},
      {0.7, 370.204252215207, std::nullopt},
      {0.5, 326.830556963332, std::nullopt},
      {0.3, 274.299239329325, std::nullopt},
      // b = 0.001 cells of the c = 1.05 curves: the inverter is effectively decoupled.
      {std::nullopt, 424.264213261478, std::nullopt},
  };
}

std::vector<MismatchCurve> mismatch_by_rho() {
  return {
      {0.9, 1.05, kSusceptance,
       {424.264232792861, 424.060818809786, 422.242716065556, 414.696563926664, 408.635403188877, 407.612584100144,
        407.503858110404}},
      {0.7, 1.05, kSusceptance,
       {424.264213261478, 424.058891172688, 422.072789148691, 408.739745000999, 380.727516285262, 371.45013184512,
        370.331322668487}},
      {0.5, 1.05, kSusceptance,
       {424.264209351358, 424.058501855388, 422.035494250636, 406.524772456741, 357.487944905099, 331.098666106028,
        327.271118829693}},
      {0.3, 1.05, kSusceptance,
       {424.2642076752, 424.058334614443, 422.019138632622, 405.371370239239, 338.104786185099, 284.577732294178,
        275.360561421446}},
  };
}

std::vector<MismatchCurve> mismatch_by_c() {
  return {
      {0.7, 1.0, kSusceptance, std::vector<double>(kSusceptance.size(), 370.204252215207)},
      {0.7, 1.01, kSusceptance,
       {424.177150961324, 423.203539025587, 415.532000209311, 388.55385949399, 372.734234605693, 370.467833852335,
        370.230718709008}},
      {0.7, 1.05, kSusceptance,
       {424.264213261478, 424.058891172688, 422.072789148691, 408.739745000999, 380.727516285262, 371.45013184512,
        370.331322668487}},
      {0.7, 2.0, kSusceptance,
       {424.284923769715, 424.265302970019, 424.06972331703, 422.17490585624, 409.286798596004, 381.164883145282,
        371.510993210161}},
      {0.7, 5.0, kSusceptance,
       {424.285741551711, 424.273476910881, 424.151076259716, 422.951187096172, 413.864514185686, 386.013498186105,
        372.266393687757}},
  };
}

std::vector<std::string> figure_names() { return {"pareto", "pareto-curve", "mismatch", "mismatch-rho", "mismatch-c"}; }

namespace {

std::string anchors_csv(const std::vector<analysis::Anchor>& anchors) {
  std::ostringstream out;
  out << "rho,nadir_mHz,peak_pu\n";
  for (const auto& a : anchors)
    out << (a.rho ? format_double(*a.rho) : "no_ibr") << ',' << format_double(a.nadir_mhz) << ','
        << (a.peak_pu ? format_double(*a.peak_pu) : "") << '\n';
  return out.str();
}

std::string curves_csv(const std::vector<MismatchCurve>& curves) {
  std::ostringstream out;
  out << "rho,c,b,nadir_mHz\n";
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.b.size(); ++k)
      out << format_double(c.rho) << ',' << format_double(c.c) << ',' << format_double(c.b[k]) << ','
          << format_double(c.nadir_mhz[k]) << '\n';
  return out.str();
}

}  // namespace

std::string figure_table(std::string_view name) {
  if (name == "pareto") return anchors_csv(pareto_anchors());
  if (name == "mismatch") return anchors_csv(mismatch_anchors());
  if (name == "mismatch-rho") return curves_csv(mismatch_by_rho());
  if (name == "mismatch-c") return curves_csv(mismatch_by_c());
  if (name == "pareto-curve") {
    std::ostringstream out;
    out << "nadir_mHz,peak_pu\n";
    for (const auto& p : pareto_curve()) out << format_double(p.nadir_mhz) << ',' << format_double(p.peak_pu) << '\n';
    return out.str();
  }
  throw InvalidParameter("unknown figure table '" + std::string(name) + "'");
}

std::vector<analysis::Anchor> figure_anchors(std::string_view name) {
  if (name == "pareto") return pareto_anchors();
  if (name == "mismatch") return mismatch_anchors();
  throw InvalidParameter("no anchor set for figure '" + std::string(name) + "'");
}

}  // namespace freqshape::figures
