#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace hk {

/// Shortest round-trip decimal form of a double ("0.75", "1e-13"). Locale
/// independent with '.' as the decimal separator, so file outputs are stable
/// byte-for-byte across environments.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace hk
