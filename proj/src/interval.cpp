#include "rescert/interval.hpp"

#include <cmath>
#include <numbers>

namespace rescert {

using namespace rnd;

Interval Interval::pi() {
    // std::numbers::pi is the double nearest to pi; the exact value lies within one ulp.
    return {down(std::numbers::pi), up(std::numbers::pi)};
}

Interval operator*(const Interval& a, const Interval& b) {
    const double lo = std::min({mul_down(a.lo_, b.lo_), mul_down(a.lo_, b.hi_), mul_down(a.hi_, b.lo_),
                                mul_down(a.hi_, b.hi_)});
    const double hi = std::max({mul_up(a.lo_, b.lo_), mul_up(a.lo_, b.hi_), mul_up(a.hi_, b.lo_),
                                mul_up(a.hi_, b.hi_)});
    return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
    require(b.lo_ > 0 || b.hi_ < 0, ErrorKind::Domain, "interval division by an interval containing zero");
    const double lo = std::min({div_down(a.lo_, b.lo_), div_down(a.lo_, b.hi_), div_down(a.hi_, b.lo_),
                                div_down(a.hi_, b.hi_)});
    const double hi = std::max({div_up(a.lo_, b.lo_), div_up(a.lo_, b.hi_), div_up(a.hi_, b.lo_),
                                div_up(a.hi_, b.hi_)});
    return {lo, hi};
}

Interval exp(const Interval& x) {
    if (x.lo() == 0 && x.hi() == 0) return Interval(1.0);
    return {exp_down(x.lo()), exp_up(x.hi())};
}

Interval expm1(const Interval& x) { return {expm1_down(x.lo()), expm1_up(x.hi())}; }

Interval log(const Interval& x) {
    require(x.lo() > 0, ErrorKind::Domain, "log of nonpositive interval");
    if (x.lo() == 1 && x.hi() == 1) return Interval(0.0);
    return {log_down(x.lo()), log_up(x.hi())};
}

Interval sqrt(const Interval& x) {
    require(x.lo() >= 0, ErrorKind::Domain, "sqrt of negative interval");
    return {sqrt_down(x.lo()), sqrt_up(x.hi())};
}

Interval sqr(const Interval& x) {
    const double a = std::fabs(x.lo());
    const double b = std::fabs(x.hi());
    const double hi = mul_up(std::max(a, b), std::max(a, b));
    const double lo = x.contains(0.0) ? 0.0 : nonneg(mul_down(std::min(a, b), std::min(a, b)));
    return {lo, hi};
}

Interval pow(const Interval& x, const Interval& y) {
    if (x.lo() == 0 && x.hi() == 0) {
        require(y.lo() > 0, ErrorKind::Domain, "0^y with y <= 0");
        return Interval(0.0);
    }
    if (x.lo() == 0) {
        // Only the upper end matters for bounds on nonnegative quantities.
        require(y.lo() > 0, ErrorKind::Domain, "pow with base touching 0 and y <= 0");
        const Interval up_part = exp(y * log(Interval(x.hi())));
        return {0.0, up_part.hi()};
    }
    return exp(y * log(x));
}

Interval pow(const Interval& x, long n) {
    if (n == 0) return Interval(1.0);
    if (n < 0) return Interval(1.0) / pow(x, -n);
    Interval result(1.0);
    Interval base = x;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base = sqr(base);
    }
    return result;
}

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval abs(const Interval& x) {
    if (x.lo() >= 0) return x;
    if (x.hi() <= 0) return -x;
    return {0.0, std::max(-x.lo(), x.hi())};
}

}  // namespace rescert
