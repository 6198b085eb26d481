#pragma once

#include <string>

namespace ugsim {

// Locale-independent number formatting (period decimal separator always).

// Fixed-point with the given number of decimals, e.g. format_fixed(-21.0, 2)
// -> "-21.00". Negative zero is normalized to zero.
std::string format_fixed(double v, int decimals);

// Shortest form with up to `sig` significant digits, e.g. 10.1 -> "10.1".
std::string format_general(double v, int sig = 6);

} // namespace ugsim
