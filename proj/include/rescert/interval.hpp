#pragma once

#include <algorithm>
#include <string>

#include "rescert/error.hpp"
#include "rescert/rounding.hpp"

namespace rescert {

// Closed real interval [lo, hi] with outward rounding. Used for every scalar
// constant that gates a certificate.
class Interval {
public:
    constexpr Interval() = default;
    constexpr Interval(double x) : lo_(x), hi_(x) {}  // NOLINT: exact embedding
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        require(std::isfinite(lo) && std::isfinite(hi), ErrorKind::NonFinite, "interval endpoint");
        require(lo <= hi, ErrorKind::Domain, "interval lo > hi");
    }

    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] double mid() const { return lo_ + 0.5 * (hi_ - lo_); }
    [[nodiscard]] double rad() const { return rnd::nonneg(rnd::up(std::max(hi_ - mid(), mid() - lo_))); }
    [[nodiscard]] bool contains(double x) const { return lo_ <= x && x <= hi_; }
    [[nodiscard]] bool positive() const { return lo_ > 0; }

    static Interval pi();

    friend Interval operator-(const Interval& a) { return {-a.hi_, -a.lo_}; }
    friend Interval operator+(const Interval& a, const Interval& b) {
        return {rnd::add_down(a.lo_, b.lo_), rnd::add_up(a.hi_, b.hi_)};
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return {rnd::sub_down(a.lo_, b.hi_), rnd::sub_up(a.hi_, b.lo_)};
    }
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);

    Interval& operator+=(const Interval& b) { return *this = *this + b; }
    Interval& operator-=(const Interval& b) { return *this = *this - b; }
    Interval& operator*=(const Interval& b) { return *this = *this * b; }
    Interval& operator/=(const Interval& b) { return *this = *this / b; }

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

Interval exp(const Interval& x);
Interval expm1(const Interval& x);
Interval log(const Interval& x);
Interval sqrt(const Interval& x);
Interval sqr(const Interval& x);
// x^y for x > 0 via exp(y log x).
Interval pow(const Interval& x, const Interval& y);
Interval pow(const Interval& x, long n);
Interval hull(const Interval& a, const Interval& b);
Interval abs(const Interval& x);

}  // namespace rescert
