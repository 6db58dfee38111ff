#pragma once

#include <cstdio>
#include <string>

namespace normlab {

/// Floating values in machine-readable outputs use 17 significant digits,
/// enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace normlab
