#pragma once

#include <string_view>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>

namespace hk {

/// Arithmetic backends the simulator runs on. Float64 is the fast default;
/// ExactRational certifies exact fixed points and the structural properties.
enum class ArithmeticMode { Float64, ExactRational };

/// Arbitrary-precision rational scalar for the exact mode. Conversion from
/// double is exact (doubles are dyadic rationals), so a float-mode profile
/// has a bit-faithful rational twin.
using rational = boost::multiprecision::mpq_rational;

template <typename S>
inline constexpr bool is_exact_v = !std::is_floating_point_v<S>;

inline constexpr std::string_view mode_name(ArithmeticMode m) {
    return m == ArithmeticMode::Float64 ? "float64" : "exact-rational";
}

inline double to_double(double v) { return v; }
inline double to_double(const rational& v) { return v.template convert_to<double>(); }

template <typename S>
S abs_value(const S& v) {
    return v < S(0) ? S(-v) : v;
}

} // namespace hk
