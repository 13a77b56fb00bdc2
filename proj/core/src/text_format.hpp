#pragma once

#include <cstdio>
#include <string>

namespace vbp::detail {

// Shortest round-trippable decimal form; used everywhere a file must be
// byte-identical across runs.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace vbp::detail
