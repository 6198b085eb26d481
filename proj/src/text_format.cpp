#include "ugsim/text_format.hpp"

#include <charconv>
#include <cmath>

namespace ugsim {

namespace {
std::string to_chars_str(double v, std::chars_format fmt, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, fmt, precision);
    return std::string(buf, res.ptr);
}
}

std::string format_fixed(double v, int decimals) {
    if (v == 0.0) v = 0.0; // collapse -0.0
    std::string s = to_chars_str(v, std::chars_format::fixed, decimals);
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-')
        s.erase(0, 1); // tiny negatives rounded to -0.00
    return s;
}

std::string format_general(double v, int sig) {
    if (v == 0.0) return "0";
    return to_chars_str(v, std::chars_format::general, sig);
}

} // namespace ugsim
