#pragma once

#include <string>

namespace freqshape {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace freqshape
