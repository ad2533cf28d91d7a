#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace tessera {

// 9 significant digits, printf %.9g. All human-facing numeric output goes
// through this so repeated runs produce byte-identical files.
inline std::string fmt_g9(double v) {
    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf, buf + n);
}

// Shortest representation that round-trips the exact double. Used where a
// serialized value must reload bit-for-bit (weights, coordinates).
inline std::string fmt_exact(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace tessera
