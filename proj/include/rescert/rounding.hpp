#pragma once

// Outward rounding helpers. The library never changes the FPU rounding mode:
// each operation runs in round-to-nearest and the result is pushed one ulp
// outward, which dominates the half-ulp rounding error. Library transcendental
// functions are assumed accurate to 2 ulp and are widened by 4 ulp.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rescert::rnd {

inline constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;  // 2^-53
inline constexpr double kTiny = std::numeric_limits<double>::denorm_min();
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr int kLibmUlps = 4;

// Successor and predecessor by stepping the bit pattern; same results as
// std::nextafter toward +-inf but without the libm call.
inline double up(double x) {
    if (!(x < kInf)) return x;  // +inf and NaN
    if (x == 0) return kTiny;
    const auto bits = std::bit_cast<std::uint64_t>(x);
    return std::bit_cast<double>(x > 0 ? bits + 1 : bits - 1);
}
inline double down(double x) { return -up(-x); }

inline double up_n(double x, int n) {
    for (int i = 0; i < n; ++i) x = up(x);
    return x;
}
inline double down_n(double x, int n) {
    for (int i = 0; i < n; ++i) x = down(x);
    return x;
}

// Basic operations are rounded to nearest, then the exact residual (TwoSum or
// FMA) tells which side the true value lies on, so exact results stay exact.
// Below the FMA underflow threshold the residual is not trusted; exact zeros
// are passed through.
inline constexpr double kResidualFloor = 0x1p-960;

inline double add_up(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return e > 0 ? up(s) : s;
}
inline double add_down(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return e < 0 ? down(s) : s;
}
inline double sub_up(double a, double b) { return add_up(a, -b); }
inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double mul_up(double a, double b) {
    const double p = a * b;
    if (a == 0 || b == 0) return p;
    if (std::fabs(p) < kResidualFloor) return up(p);
    const double e = std::fma(a, b, -p);
    return e > 0 ? up(p) : p;
}
inline double mul_down(double a, double b) {
    const double p = a * b;
    if (a == 0 || b == 0) return p;
    if (std::fabs(p) < kResidualFloor) return down(p);
    const double e = std::fma(a, b, -p);
    return e < 0 ? down(p) : p;
}
inline double div_up(double a, double b) {
    const double q = a / b;
    if (a == 0 && b != 0) return q;
    if (std::fabs(q) < kResidualFloor || std::fabs(a) < kResidualFloor || !std::isfinite(q)) return up(q);
    const double e = std::fma(-q, b, a);  // a - q b, exact
    return (b > 0 ? e > 0 : e < 0) ? up(q) : q;
}
inline double div_down(double a, double b) {
    const double q = a / b;
    if (a == 0 && b != 0) return q;
    if (std::fabs(q) < kResidualFloor || std::fabs(a) < kResidualFloor || !std::isfinite(q)) return down(q);
    const double e = std::fma(-q, b, a);
    return (b > 0 ? e < 0 : e > 0) ? down(q) : q;
}
inline double sqrt_up(double a) {
    const double r = std::sqrt(a);
    if (a == 0) return r;
    if (a < kResidualFloor) return up(r);
    return std::fma(-r, r, a) > 0 ? up(r) : r;
}
inline double sqrt_down(double a) {
    if (a <= 0) return 0.0;
    const double r = std::sqrt(a);
    if (a < kResidualFloor) return down(r);
    return std::fma(-r, r, a) < 0 ? down(r) : r;
}

// Clamp helper for quantities known to be nonnegative.
inline double nonneg(double x) { return x < 0 ? 0.0 : x; }

inline double exp_up(double x) { return up_n(std::exp(x), kLibmUlps); }
inline double exp_down(double x) { return nonneg(down_n(std::exp(x), kLibmUlps)); }
inline double expm1_up(double x) { return up_n(std::expm1(x), kLibmUlps); }
inline double expm1_down(double x) { return down_n(std::expm1(x), kLibmUlps); }
inline double log_up(double x) { return up_n(std::log(x), kLibmUlps); }
inline double log_down(double x) { return down_n(std::log(x), kLibmUlps); }
// A zero component makes the result exact.
inline double hypot_up(double a, double b) {
    if (a == 0 || b == 0) return std::fabs(a) + std::fabs(b);
    return up_n(std::hypot(a, b), kLibmUlps);
}
inline double hypot_down(double a, double b) {
    if (a == 0 || b == 0) return std::fabs(a) + std::fabs(b);
    return nonneg(down_n(std::hypot(a, b), kLibmUlps));
}

// Upper bound on gamma_k = k u / (1 - k u).
inline double gamma_up(double k) {
    const double ku = up(k * kUnit);
    return div_up(ku, down(1.0 - ku));
}

}  // namespace rescert::rnd
