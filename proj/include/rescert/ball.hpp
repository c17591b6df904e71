#pragma once

#include <complex>
#include <string>

#include "rescert/interval.hpp"

namespace rescert {

using complex = std::complex<double>;

// Closed complex disk {x : |x - center| <= radius}.
class Ball {
public:
    Ball() = default;
    Ball(complex center, double radius = 0.0);  // NOLINT: exact embedding when radius = 0
    Ball(double center) : Ball(complex(center, 0.0)) {}  // NOLINT
    static Ball from_interval(const Interval& re, const Interval& im = Interval(0.0));

    [[nodiscard]] complex center() const { return c_; }
    [[nodiscard]] double radius() const { return r_; }

    [[nodiscard]] double abs_upper() const;
    [[nodiscard]] double abs_lower() const;
    [[nodiscard]] Interval abs() const { return {abs_lower(), abs_upper()}; }
    // False only when z is provably outside the disk.
    [[nodiscard]] bool contains(complex z) const;
    [[nodiscard]] bool contains_zero() const { return abs_lower() <= 0.0; }
    [[nodiscard]] Interval real() const;
    [[nodiscard]] Interval imag() const;
    // Same center, radius grown by extra (rounded up).
    [[nodiscard]] Ball widened(double extra) const;

    friend Ball operator+(const Ball& a, const Ball& b);
    friend Ball operator-(const Ball& a, const Ball& b);
    friend Ball operator-(const Ball& a) { return {-a.c_, a.r_}; }
    friend Ball operator*(const Ball& a, const Ball& b);
    friend Ball operator/(const Ball& a, const Ball& b);

    Ball& operator+=(const Ball& b) { return *this = *this + b; }
    Ball& operator-=(const Ball& b) { return *this = *this - b; }
    Ball& operator*=(const Ball& b) { return *this = *this * b; }
    Ball& operator/=(const Ball& b) { return *this = *this / b; }

private:
    complex c_{0.0, 0.0};
    double r_ = 0.0;
};

Ball conj(const Ball& a);
Ball inv(const Ball& a);
Ball exp(const Ball& a);
Ball sqr(const Ball& a);
Ball pow(const Ball& a, long n);
// e^{i theta} for theta = 2 pi * num / den, with a tight radius.
Ball unit_root(long num, long den);
Ball polar(const Interval& modulus, const Interval& angle);

// Modulus bounds of a floating complex value.
double abs_up(complex z);
double abs_down(complex z);

std::string to_string(const Ball& b);

}  // namespace rescert
