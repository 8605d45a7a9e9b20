#include "freqshape/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace freqshape {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), result.ptr};
}

}  // namespace freqshape
