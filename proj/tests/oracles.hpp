#pragma once

// Independent reference computations for the tests. Nothing here touches the
// library's rounding helpers: extended precision (long double, or 200-digit
// binary floats for closed forms) stands in for the exact value.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "rescert/ball_matrix.hpp"

namespace oracle {

using ld = long double;
using cld = std::complex<long double>;
using LMatrix = Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>;
using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;

inline constexpr ld kPi = std::numbers::pi_v<long double>;

inline LMatrix widen(const rescert::CMatrix& m) { return m.cast<cld>(); }

inline std::vector<ld> singular_values(const LMatrix& m) {
    Eigen::JacobiSVD<LMatrix> svd(m);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

inline ld spectral_norm(const LMatrix& m) { return m.size() == 0 ? 0 : singular_values(m).front(); }

inline ld sigma_min(const LMatrix& m) { return singular_values(m).back(); }

// ||(z - A)^{-1}||_2.
inline ld resolvent_norm(const LMatrix& a, cld z) {
    LMatrix s = -a;
    s.diagonal().array() += z;
    return 1 / sigma_min(s);
}

// Unnormalized forward DFT, Y_q = sum_m x_m e^{-2 pi i q m / N}, with the
// twiddle index reduced before the trigonometric call.
inline std::vector<cld> dft(const std::vector<cld>& x) {
    const std::size_t n = x.size();
    std::vector<cld> y(n);
    for (std::size_t q = 0; q < n; ++q) {
        cld acc = 0;
        for (std::size_t m = 0; m < n; ++m) {
            const ld angle = -2 * kPi * static_cast<ld>((q * m) % n) / static_cast<ld>(n);
            acc += x[m] * cld(std::cos(angle), std::sin(angle));
        }
        y[q] = acc;
    }
    return y;
}

// (2 pi)^{-1} int e^{i j theta} T(e^{i theta})^{-k} d theta by the trapezoid
// rule, which converges geometrically for analytic periodic integrands.
template <class Map>
cld fourier_coefficient(Map&& T, int k, int j, int points = 8192) {
    cld acc = 0;
    for (int m = 0; m < points; ++m) {
        const ld theta = 2 * kPi * m / points;
        const cld z(std::cos(theta), std::sin(theta));
        acc += std::pow(z, j) * std::pow(T(z), -k);
    }
    return acc / static_cast<ld>(points);
}

// Distance test in extended precision.
inline bool inside(const rescert::Ball& b, cld x) {
    const cld c(b.center().real(), b.center().imag());
    return std::abs(x - c) <= static_cast<ld>(b.radius());
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    rescert::complex gaussian_complex() {
        std::normal_distribution<double> g;
        return {g(rng_), g(rng_)};
    }

    // A point of the closed disk, checked in extended precision; when the
    // rounded sum leaves the disk the draw is repeated.
    rescert::complex in_disk(rescert::complex c, double r) {
        if (r == 0) return c;
        for (int attempt = 0; attempt < 64; ++attempt) {
            const double rho = r * std::sqrt(uniform(0, 1));
            const double phi = uniform(0, 2 * std::numbers::pi);
            const rescert::complex z = c + std::polar(rho, phi);
            if (inside(rescert::Ball(c, r), cld(z.real(), z.imag()))) return z;
        }
        return c;
    }

    rescert::BallMatrix random_ball(Eigen::Index n, Eigen::Index m, double scale, double max_radius) {
        rescert::CMatrix c(n, m);
        rescert::RMatrix r(n, m);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                c(i, j) = scale * gaussian_complex();
                r(i, j) = max_radius * uniform(0, 1);
            }
        }
        return {c, r};
    }

    rescert::CMatrix member(const rescert::BallMatrix& b) {
        rescert::CMatrix out(b.rows(), b.cols());
        for (Eigen::Index i = 0; i < b.rows(); ++i)
            for (Eigen::Index j = 0; j < b.cols(); ++j) out(i, j) = in_disk(b.centers()(i, j), b.radii()(i, j));
        return out;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// True when every entry of the extended-precision matrix lies in the ball.
inline bool contains(const rescert::BallMatrix& b, const LMatrix& x) {
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            if (!inside(b.entry(i, j), x(i, j))) return false;
    return true;
}

}  // namespace oracle
