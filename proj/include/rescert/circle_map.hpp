#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rescert/ball.hpp"

namespace rescert {

using Rational = boost::rational<std::int64_t>;

// Value and first derivative, both as balls.
struct Jet {
    Ball value;
    Ball deriv;

    static Jet variable(const Ball& z) { return {z, Ball(1.0)}; }
    static Jet constant(const Ball& c) { return {c, Ball(0.0)}; }
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet exp(const Jet& a);

// T(z) = factor * prod_i (z - zeros_i) / (1 - conj(zeros_i) z).
struct Blaschke {
    std::vector<Ball> zeros;
    Ball factor{1.0};
};

// T(z) = i z^2 exp((1/2 - b pi)(z - 1/z)).
struct PerturbedDoubling {
    Rational b{0};
};

// User-supplied evaluator; it must enclose T and T' over any input ball and
// throw when the ball meets a singularity.
struct GeneralAnalytic {
    std::string name;
    std::function<Jet(const Jet&)> evaluate;
    std::uint64_t identity = 0;
    // Set when the formula is known to be analytic and zero-free on C \ {0};
    // otherwise analyticity is checked by covering annuli with balls.
    bool zero_free_punctured = false;
};

class CircleMap {
public:
    using Variant = std::variant<Blaschke, PerturbedDoubling, GeneralAnalytic>;

    explicit CircleMap(Variant v);

    [[nodiscard]] const Variant& variant() const { return variant_; }
    [[nodiscard]] const Blaschke* blaschke() const { return std::get_if<Blaschke>(&variant_); }
    [[nodiscard]] std::string kind() const;
    [[nodiscard]] std::string describe() const;
    [[nodiscard]] std::uint64_t hash() const;

    [[nodiscard]] Ball eval(const Ball& z) const;
    [[nodiscard]] Jet eval_jet(const Ball& z) const;
    // Tighter enclosure for wide balls: the smaller of direct evaluation and
    // the mean value form T(c) + T'(z) (z - c).
    [[nodiscard]] Ball enclose(const Ball& z) const;
    // Floating evaluation for heuristics only.
    [[nodiscard]] complex eval_float(complex z) const;

private:
    Variant variant_;
    Ball doubling_coefficient_{0.0};
};

CircleMap doubling_map();                      // z^2
CircleMap monomial_map(int degree);            // z^d as a Blaschke product
CircleMap reference_blaschke_map();                // -z (z - m)/(1 - conj(m) z), m = (3 sqrt2 / 8) e^{i pi/8}
CircleMap perturbed_doubling_map(Rational b);  // see PerturbedDoubling
// T(z) = scale * z^degree * exp(sum_k coeffs_k z^k), k in [-m, m]; entire on C \ {0} and zero-free.
CircleMap laurent_exp_map(int degree, Ball scale, std::vector<std::pair<int, Ball>> coeffs);

bool blaschke_expansion_check(const Blaschke& spec);

struct AnnulusCertificate {
    double eta = 0;
    double alpha = 0;  // 0 until supplied by with_alpha
    double rho = 0;
    bool certified = false;
    std::size_t arcs = 0;            // arcs per boundary circle in the final grid
    double outer_image_lower = 0;    // lower bound of |T| on |z| = e^{2 pi eta}
    double inner_image_upper = 0;    // upper bound of |T| on |z| = e^{-2 pi eta}
    std::string domain_method;       // how analyticity on the annulus was established
    std::uint64_t map_hash = 0;
};

struct AnnulusOptions {
    std::size_t subdivisions = 1024;
    std::size_t max_arcs = std::size_t{1} << 20;
};

AnnulusCertificate certify_annulus(const CircleMap& map, double eta, double rho, AnnulusOptions opts = {});
AnnulusCertificate with_alpha(AnnulusCertificate ann, double alpha);

// Thin annulus e^{-tau} <= |z| <= e^{tau} on which T is analytic and zero-free,
// with modulus bounds on both boundary circles. Used for aliasing tails.
struct ThinAnnulus {
    double tau = 0;
    double outer_lo = 0, outer_hi = 0;  // |T| on |z| = e^{tau}
    double inner_lo = 0, inner_hi = 0;  // |T| on |z| = e^{-tau}
    std::string method;
};

std::optional<ThinAnnulus> certify_thin_annulus(const CircleMap& map, double tau, std::size_t arcs);

struct BlaschkeSpectrum {
    Ball fixed_point;
    Ball multiplier;             // T'(z0)
    std::vector<Ball> eigenvalues;  // 1, then mu^n and conj(mu)^n
    std::string method;
};

BlaschkeSpectrum blaschke_exact_spectrum(const Blaschke& spec, int n_max);

// Nonrigorous parameter search; certificates never depend on it.
struct ParameterSuggestion {
    double eta = 0, alpha = 0, rho = 0;
    double predicted_delta_inv = 0;
};

ParameterSuggestion suggest_parameters(const CircleMap& map, int K, double exclusion_radius, int eta_grid = 200);

}  // namespace rescert
