#include "rescert/ball.hpp"

#include <cmath>
#include <cstdio>

namespace rescert {

using namespace rnd;

namespace {

struct TwoSum {
    double s;
    double e;
};

TwoSum two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// |e| bound for a product residual; below the FMA floor the residual may be
// inexact, so a subnormal quantum is added.
double product_residual(double a, double b, double p) {
    const double e = std::fabs(std::fma(a, b, -p));
    return std::fabs(p) < kResidualFloor ? add_up(e, 2 * kTiny) : e;
}

// Sum of nonnegative error terms, rounded upward.
double sum_up(std::initializer_list<double> terms) {
    double acc = 0.0;
    for (double t : terms) acc = add_up(acc, t);
    return acc;
}

// Ball covering a rectangle of intervals.
Ball rect_ball(const Interval& re, const Interval& im) {
    const complex c(re.mid(), im.mid());
    const double dr = std::max(sub_up(re.hi(), c.real()), sub_up(c.real(), re.lo()));
    const double di = std::max(sub_up(im.hi(), c.imag()), sub_up(c.imag(), im.lo()));
    if (dr == 0 || di == 0) return {c, std::max(dr, di)};
    return {c, hypot_up(dr, di)};
}

Interval cos_interval(double x) {
    const double v = std::cos(x);
    return {std::max(-1.0, down_n(v, kLibmUlps)), std::min(1.0, up_n(v, kLibmUlps))};
}

Interval sin_interval(double x) {
    const double v = std::sin(x);
    return {std::max(-1.0, down_n(v, kLibmUlps)), std::min(1.0, up_n(v, kLibmUlps))};
}

}  // namespace

Ball::Ball(complex center, double radius) : c_(center), r_(radius) {
    require(std::isfinite(center.real()) && std::isfinite(center.imag()) && std::isfinite(radius),
            ErrorKind::NonFinite, "ball with non-finite center or radius");
    require(radius >= 0, ErrorKind::Domain, "negative ball radius");
}

Ball Ball::from_interval(const Interval& re, const Interval& im) { return rect_ball(re, im); }

double abs_up(complex z) { return hypot_up(z.real(), z.imag()); }
double abs_down(complex z) { return hypot_down(z.real(), z.imag()); }

double Ball::abs_upper() const { return add_up(abs_up(c_), r_); }
double Ball::abs_lower() const { return nonneg(sub_down(abs_down(c_), r_)); }

bool Ball::contains(complex z) const {
    // True unless z is provably outside; the difference carries at most one
    // relative rounding per component.
    const double d = abs_down(z - c_);
    return mul_down(d, 1 - 2 * kUnit) <= r_;
}

Interval Ball::real() const { return {sub_down(c_.real(), r_), add_up(c_.real(), r_)}; }
Interval Ball::imag() const { return {sub_down(c_.imag(), r_), add_up(c_.imag(), r_)}; }

Ball Ball::widened(double extra) const { return {c_, add_up(r_, extra)}; }

Ball operator+(const Ball& a, const Ball& b) {
    const TwoSum re = two_sum(a.c_.real(), b.c_.real());
    const TwoSum im = two_sum(a.c_.imag(), b.c_.imag());
    double err = 0.0;
    if (re.e != 0 || im.e != 0) err = hypot_up(re.e, im.e);
    return {complex(re.s, im.s), sum_up({a.r_, b.r_, err})};
}

Ball operator-(const Ball& a, const Ball& b) { return a + (-b); }

Ball operator*(const Ball& a, const Ball& b) {
    const double ar = a.c_.real(), ai = a.c_.imag(), br = b.c_.real(), bi = b.c_.imag();
    const double p1 = ar * br, p2 = ai * bi, p3 = ar * bi, p4 = ai * br;
    const TwoSum re = two_sum(p1, -p2);
    const TwoSum im = two_sum(p3, p4);
    const double err_re = sum_up({product_residual(ar, br, p1), product_residual(ai, bi, p2), std::fabs(re.e)});
    const double err_im = sum_up({product_residual(ar, bi, p3), product_residual(ai, br, p4), std::fabs(im.e)});
    const double err = (err_re == 0 && err_im == 0) ? 0.0 : hypot_up(err_re, err_im);
    double rad = err;
    if (a.r_ != 0 || b.r_ != 0) {
        const double ma = abs_up(a.c_), mb = abs_up(b.c_);
        rad = sum_up({mul_up(ma, b.r_), mul_up(a.r_, mb), mul_up(a.r_, b.r_), err});
    }
    return {complex(re.s, im.s), rad};
}

Ball inv(const Ball& a) {
    const double lower = a.abs_lower();
    if (!(lower > 0)) fail(ErrorKind::Domain, "inverse of a ball containing zero: " + to_string(a));
    const Interval re(a.center().real()), im(a.center().imag());
    const Interval d = sqr(re) + sqr(im);
    const Ball centre = rect_ball(re / d, -im / d);
    if (a.radius() == 0) return centre;
    const double m = abs_down(a.center());
    const double spread = div_up(a.radius(), mul_down(lower, m));
    return centre.widened(spread);
}

Ball operator/(const Ball& a, const Ball& b) { return a * inv(b); }

Ball conj(const Ball& a) { return {std::conj(a.center()), a.radius()}; }

Ball sqr(const Ball& a) { return a * a; }

Ball pow(const Ball& a, long n) {
    if (n < 0) return pow(inv(a), -n);
    Ball result(1.0);
    Ball base = a;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base = sqr(base);
    }
    return result;
}

Ball exp(const Ball& a) {
    const double x = a.center().real();
    const double y = a.center().imag();
    const Interval mag = exp(Interval(x));
    const Ball centre = rect_ball(mag * cos_interval(y), mag * sin_interval(y));
    if (a.radius() == 0) return centre;
    return centre.widened(mul_up(mag.hi(), expm1_up(a.radius())));
}

Ball unit_root(long num, long den) {
    require(den > 0, ErrorKind::Domain, "unit_root denominator");
    num %= den;
    if (num < 0) num += den;
    // Exact values on the axes keep trivial cases exact.
    if (num == 0) return Ball(1.0);
    if (4 * num == den) return Ball(complex(0, 1));
    if (2 * num == den) return Ball(-1.0);
    if (4 * num == 3 * den) return Ball(complex(0, -1));
    const Interval angle = Interval(2.0) * Interval::pi() * Interval(static_cast<double>(num)) /
                           Interval(static_cast<double>(den));
    const double t = angle.mid();
    const double spread = std::max(sub_up(angle.hi(), t), sub_up(t, angle.lo()));
    return rect_ball(cos_interval(t), sin_interval(t)).widened(spread);
}

Ball polar(const Interval& modulus, const Interval& angle) {
    require(modulus.lo() >= 0, ErrorKind::Domain, "negative modulus");
    const double t = angle.mid();
    const double spread = std::max(sub_up(angle.hi(), t), sub_up(t, angle.lo()));
    const Ball dir = rect_ball(cos_interval(t), sin_interval(t)).widened(spread);
    return Ball::from_interval(modulus) * dir;
}

std::string to_string(const Ball& b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi) +/- %.3g", b.center().real(), b.center().imag(), b.radius());
    return buf;
}

}  // namespace rescert
