#include "rescert/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <cstdio>
#include <sstream>

#include "rescert/parallel.hpp"

namespace rescert {

using namespace rnd;

// ---------------------------------------------------------------- jets

Jet operator+(const Jet& a, const Jet& b) { return {a.value + b.value, a.deriv + b.deriv}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.value - b.value, a.deriv - b.deriv}; }
Jet operator*(const Jet& a, const Jet& b) { return {a.value * b.value, a.deriv * b.value + a.value * b.deriv}; }
Jet operator/(const Jet& a, const Jet& b) {
    const Ball ib = inv(b.value);
    const Ball q = a.value * ib;
    return {q, (a.deriv - q * b.deriv) * ib};
}
Jet exp(const Jet& a) {
    const Ball e = exp(a.value);
    return {e, e * a.deriv};
}

namespace {

Ball lift(const Ball& c, const Ball*) { return c; }
Jet lift(const Ball& c, const Jet*) { return Jet::constant(c); }

template <class S>
S eval_blaschke(const Blaschke& bl, const S& z) {
    const S* tag = nullptr;
    S result = lift(bl.factor, tag);
    const S one = lift(Ball(1.0), tag);
    for (const Ball& a : bl.zeros) result = result * ((z - lift(a, tag)) / (one - lift(conj(a), tag) * z));
    return result;
}

template <class S>
S eval_doubling(const Ball& coefficient, const S& z) {
    const S* tag = nullptr;
    const S one = lift(Ball(1.0), tag);
    return lift(Ball(complex(0, 1)), tag) * z * z * exp(lift(coefficient, tag) * (z - one / z));
}

Interval rational_interval(const Rational& q) {
    return Interval(static_cast<double>(q.numerator())) / Interval(static_cast<double>(q.denominator()));
}

struct Fnv {
    std::uint64_t h = 1469598103934665603ULL;
    void bytes(const void* p, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= c[i];
            h *= 1099511628211ULL;
        }
    }
    void ball(const Ball& b) {
        const double v[3] = {b.center().real(), b.center().imag(), b.radius()};
        bytes(v, sizeof v);
    }
    void text(const std::string& s) { bytes(s.data(), s.size()); }
};

}  // namespace

// ---------------------------------------------------------------- maps

CircleMap::CircleMap(Variant v) : variant_(std::move(v)) {
    if (const auto* bl = std::get_if<Blaschke>(&variant_)) {
        require(!bl->zeros.empty(), ErrorKind::Domain, "Blaschke product needs at least one zero");
        for (const Ball& a : bl->zeros)
            require(a.abs_upper() < 1.0, ErrorKind::Domain, "Blaschke zero not inside the unit disk");
        const Interval m = bl->factor.abs();
        require(m.lo() <= 1.0 && 1.0 <= m.hi(), ErrorKind::Domain, "Blaschke factor is not unimodular");
    } else if (const auto* pd = std::get_if<PerturbedDoubling>(&variant_)) {
        const auto den = pd->b.denominator();
        require(den > 0 && (den & (den - 1)) == 0, ErrorKind::Domain, "perturbation parameter must be dyadic");
        const Interval c = Interval(0.5) - rational_interval(pd->b) * Interval::pi();
        doubling_coefficient_ = Ball::from_interval(c);
    } else {
        require(static_cast<bool>(std::get<GeneralAnalytic>(variant_).evaluate), ErrorKind::Domain,
                "general map needs an evaluator");
    }
}

std::string CircleMap::kind() const {
    switch (variant_.index()) {
        case 0: return "blaschke";
        case 1: return "perturbed_doubling";
        default: return "general";
    }
}

std::string CircleMap::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (const auto* bl = blaschke()) {
        os << "blaschke factor=" << to_string(bl->factor) << " zeros=[";
        for (std::size_t i = 0; i < bl->zeros.size(); ++i) os << (i ? ", " : "") << to_string(bl->zeros[i]);
        os << "]";
    } else if (const auto* pd = std::get_if<PerturbedDoubling>(&variant_)) {
        os << "perturbed_doubling b=" << pd->b.numerator() << "/" << pd->b.denominator();
    } else {
        os << "general " << std::get<GeneralAnalytic>(variant_).name;
    }
    return os.str();
}

std::uint64_t CircleMap::hash() const {
    Fnv f;
    f.text(kind());
    if (const auto* bl = blaschke()) {
        f.ball(bl->factor);
        for (const Ball& a : bl->zeros) f.ball(a);
    } else if (const auto* pd = std::get_if<PerturbedDoubling>(&variant_)) {
        const std::int64_t v[2] = {pd->b.numerator(), pd->b.denominator()};
        f.bytes(v, sizeof v);
    } else {
        const auto& g = std::get<GeneralAnalytic>(variant_);
        f.text(g.name);
        f.bytes(&g.identity, sizeof g.identity);
    }
    return f.h;
}

Jet CircleMap::eval_jet(const Ball& z) const {
    const Jet x = Jet::variable(z);
    switch (variant_.index()) {
        case 0: return eval_blaschke(std::get<Blaschke>(variant_), x);
        case 1: return eval_doubling(doubling_coefficient_, x);
        default: return std::get<GeneralAnalytic>(variant_).evaluate(x);
    }
}

Ball CircleMap::eval(const Ball& z) const {
    switch (variant_.index()) {
        case 0: return eval_blaschke(std::get<Blaschke>(variant_), z);
        case 1: return eval_doubling(doubling_coefficient_, z);
        default: return std::get<GeneralAnalytic>(variant_).evaluate(Jet::variable(z)).value;
    }
}

Ball CircleMap::enclose(const Ball& z) const {
    const Jet wide = eval_jet(z);
    if (z.radius() == 0) return wide.value;
    const Ball centered = eval(Ball(z.center())) + wide.deriv * Ball(complex(0, 0), z.radius());
    return centered.radius() < wide.value.radius() ? centered : wide.value;
}

complex CircleMap::eval_float(complex z) const {
    if (const auto* bl = blaschke()) {
        complex r = bl->factor.center();
        for (const Ball& a : bl->zeros) r *= (z - a.center()) / (1.0 - std::conj(a.center()) * z);
        return r;
    }
    if (variant_.index() == 1) {
        const complex c = doubling_coefficient_.center();
        return complex(0, 1) * z * z * std::exp(c * (z - 1.0 / z));
    }
    return eval(Ball(z)).center();
}

CircleMap monomial_map(int degree) {
    require(degree >= 1, ErrorKind::Domain, "monomial degree");
    Blaschke bl;
    bl.zeros.assign(static_cast<std::size_t>(degree), Ball(0.0));
    return CircleMap(bl);
}

CircleMap doubling_map() { return monomial_map(2); }

CircleMap reference_blaschke_map() {
    Blaschke bl;
    const Interval modulus = Interval(3.0) * sqrt(Interval(2.0)) / Interval(8.0);
    const Interval angle = Interval::pi() / Interval(8.0);
    bl.zeros = {Ball(0.0), polar(modulus, angle)};
    bl.factor = Ball(-1.0);
    return CircleMap(bl);
}

CircleMap perturbed_doubling_map(Rational b) { return CircleMap(PerturbedDoubling{b}); }

CircleMap laurent_exp_map(int degree, Ball scale, std::vector<std::pair<int, Ball>> coeffs) {
    std::sort(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Fnv f;
    f.bytes(&degree, sizeof degree);
    f.ball(scale);
    for (const auto& [k, c] : coeffs) {
        f.bytes(&k, sizeof k);
        f.ball(c);
    }
    GeneralAnalytic g;
    std::ostringstream name;
    name << "laurent_exp degree=" << degree << " terms=" << coeffs.size();
    g.name = name.str();
    g.identity = f.h;
    g.zero_free_punctured = true;
    g.evaluate = [degree, scale, coeffs](const Jet& z) {
        Jet power = Jet::constant(Ball(1.0));
        for (int i = 0; i < degree; ++i) power = power * z;
        Jet sum = Jet::constant(Ball(0.0));
        const Jet one = Jet::constant(Ball(1.0));
        for (const auto& [k, c] : coeffs) {
            Jet term = Jet::constant(c);
            const Jet base = k >= 0 ? z : one / z;
            for (int i = 0; i < std::abs(k); ++i) term = term * base;
            sum = sum + term;
        }
        return Jet::constant(scale) * power * exp(sum);
    };
    return CircleMap(std::move(g));
}

bool blaschke_expansion_check(const Blaschke& spec) {
    Interval sum(0.0);
    for (const Ball& a : spec.zeros) {
        const Interval m = a.abs();
        sum += (Interval(1.0) - m) / (Interval(1.0) + m);
    }
    return sum.lo() > 1.0;
}

// ---------------------------------------------------------------- annuli

namespace {

// Ball covering the arc of |z| = radius centered at angle 2 pi (2j+1)/(2m)
// with half-width pi/m; the chord from the midpoint is at most radius * pi/m.
Ball arc_ball(const Interval& radius, std::size_t j, std::size_t m) {
    const Ball dir = unit_root(static_cast<long>(2 * j + 1), static_cast<long>(2 * m));
    const double half = div_up(Interval::pi().hi(), static_cast<double>(m));
    return (Ball::from_interval(radius) * dir).widened(mul_up(radius.hi(), half));
}

// Polar box [s0, s1] x arc j of m, enclosed in one ball.
Ball box_ball(const Interval& s0, const Interval& s1, std::size_t j, std::size_t m) {
    const Interval mid = (s0 + s1) / Interval(2.0);
    const Ball dir = unit_root(static_cast<long>(2 * j + 1), static_cast<long>(2 * m));
    const double half = div_up(Interval::pi().hi(), static_cast<double>(m));
    const double radial = div_up(sub_up(s1.hi(), s0.lo()), 2.0);
    return (Ball::from_interval(mid) * dir).widened(add_up(radial, mul_up(s1.hi(), half)));
}

struct CircleScan {
    bool ok = true;
    std::size_t failed_arc = 0;
    std::string failure;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0;
};

// Evaluates T over all arcs of a circle; pred decides whether an image ball is acceptable.
template <class Pred>
CircleScan scan_circle(const CircleMap& map, const Interval& radius, std::size_t m, Pred pred) {
    std::vector<Ball> images(m);
    std::vector<char> ok(m, 0);
    parallel_for(m, [&](std::size_t j) {
        try {
            images[j] = map.enclose(arc_ball(radius, j, m));
            ok[j] = pred(images[j]) ? 1 : 0;
        } catch (const Error&) {
            ok[j] = 0;
        }
    });
    CircleScan s;
    for (std::size_t j = 0; j < m; ++j) {
        if (!ok[j]) {
            s.ok = false;
            s.failed_arc = j;
            s.failure = "arc " + std::to_string(j) + "/" + std::to_string(m) + " image " + to_string(images[j]);
            return s;
        }
        s.lo = std::min(s.lo, images[j].abs_lower());
        s.hi = std::max(s.hi, images[j].abs_upper());
    }
    return s;
}

// Covers lo_radius <= |z| <= hi_radius with polar boxes and checks that T is
// finite and nonzero on each; doubles the grid on failure.
bool cover_annulus(const CircleMap& map, double log_lo, double log_hi, std::size_t max_arcs) {
    for (std::size_t m = 256; m <= max_arcs; m *= 2) {
        const double step = 2 * std::numbers::pi / static_cast<double>(m);
        const auto layers = static_cast<std::size_t>(std::ceil((log_hi - log_lo) / step)) + 1;
        if (layers * m > (std::size_t{1} << 26)) return false;
        std::vector<char> ok(layers * m, 0);
        parallel_for(layers, [&](std::size_t l) {
            const double t0 = log_lo + (log_hi - log_lo) * static_cast<double>(l) / static_cast<double>(layers);
            const double t1 = log_lo + (log_hi - log_lo) * static_cast<double>(l + 1) / static_cast<double>(layers);
            const Interval s0 = exp(Interval(std::min(t0, t1)));
            const Interval s1 = exp(Interval(std::max(t0, t1)));
            for (std::size_t j = 0; j < m; ++j) {
                try {
                    ok[l * m + j] = map.enclose(box_ball(s0, s1, j, m)).contains_zero() ? 0 : 1;
                } catch (const Error&) {
                    ok[l * m + j] = 0;
                }
            }
        });
        if (std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; })) return true;
    }
    return false;
}

std::string domain_method(const CircleMap& map, double log_r, std::size_t max_arcs) {
    if (map.blaschke()) {
        return "structural: zeros strictly inside and poles strictly outside the unit circle, so T is analytic "
               "on the inner half-annulus and zero-free on the outer half-annulus";
    }
    if (map.kind() == "perturbed_doubling") return "structural: analytic and zero-free on C\\{0}";
    const auto& g = std::get<GeneralAnalytic>(map.variant());
    if (g.zero_free_punctured) return "structural: analytic and zero-free on C\\{0}";
    if (cover_annulus(map, -log_r, log_r, max_arcs)) return "ball cover: T finite and nonzero on the closed annulus";
    return {};
}

}  // namespace

AnnulusCertificate certify_annulus(const CircleMap& map, double eta, double rho, AnnulusOptions opts) {
    require(0 < eta && eta < rho, ErrorKind::Domain, "certify_annulus needs 0 < eta < rho");
    require(opts.subdivisions >= 8, ErrorKind::Domain, "certify_annulus needs at least 8 subdivisions");
    const Interval two_pi = Interval(2.0) * Interval::pi();
    const Interval log_r = two_pi * Interval(eta);
    const Interval outer = exp(log_r);
    const Interval inner = exp(-log_r);
    const double outer_threshold = exp(two_pi * Interval(rho)).hi();
    const double inner_threshold = exp(-(two_pi * Interval(rho))).lo();

    AnnulusCertificate cert;
    cert.eta = eta;
    cert.rho = rho;
    cert.map_hash = map.hash();
    cert.domain_method = domain_method(map, log_r.hi(), opts.max_arcs);
    require(!cert.domain_method.empty(), ErrorKind::CertificationFailed,
            "could not establish analyticity on the annulus");

    std::string last_failure;
    for (std::size_t m = opts.subdivisions; m <= opts.max_arcs; m *= 2) {
        const CircleScan out =
            scan_circle(map, outer, m, [&](const Ball& w) { return w.abs_lower() > outer_threshold; });
        if (!out.ok) {
            last_failure = "outer circle " + out.failure;
            continue;
        }
        const CircleScan in =
            scan_circle(map, inner, m, [&](const Ball& w) { return w.abs_upper() < inner_threshold; });
        if (!in.ok) {
            last_failure = "inner circle " + in.failure;
            continue;
        }
        cert.certified = true;
        cert.arcs = m;
        cert.outer_image_lower = out.lo;
        cert.inner_image_upper = in.hi;
        return cert;
    }
    fail(ErrorKind::CertificationFailed, last_failure);
}

AnnulusCertificate with_alpha(AnnulusCertificate ann, double alpha) {
    require(ann.certified, ErrorKind::Domain, "annulus not certified");
    require(ann.eta < alpha && alpha < ann.rho, ErrorKind::Domain, "alpha must lie strictly between eta and rho");
    ann.alpha = alpha;
    return ann;
}

std::optional<ThinAnnulus> certify_thin_annulus(const CircleMap& map, double tau, std::size_t arcs) {
    require(tau > 0, ErrorKind::Domain, "thin annulus width");
    ThinAnnulus t;
    t.tau = tau;
    const Interval outer = exp(Interval(tau));
    const Interval inner = exp(Interval(-tau));
    if (const auto* bl = map.blaschke()) {
        double worst = 0;
        for (const Ball& a : bl->zeros) worst = std::max(worst, a.abs_upper());
        // Zeros at |a| and poles at 1/|a| must stay outside the closed annulus.
        if (!(worst < inner.lo() && mul_up(worst, outer.hi()) < 1.0)) return std::nullopt;
        t.method = "structural";
    } else if (map.kind() == "perturbed_doubling" ||
               std::get<GeneralAnalytic>(map.variant()).zero_free_punctured) {
        t.method = "structural";
    } else {
        if (!cover_annulus(map, -tau, tau, std::size_t{1} << 16)) return std::nullopt;
        t.method = "ball cover";
    }
    auto nonzero = [](const Ball& w) { return !w.contains_zero(); };
    const CircleScan o = scan_circle(map, outer, arcs, nonzero);
    const CircleScan i = scan_circle(map, inner, arcs, nonzero);
    if (!o.ok || !i.ok) return std::nullopt;
    t.outer_lo = o.lo;
    t.outer_hi = o.hi;
    t.inner_lo = i.lo;
    t.inner_hi = i.hi;
    return t;
}

// ---------------------------------------------------------------- fixed point

BlaschkeSpectrum blaschke_exact_spectrum(const Blaschke& spec, int n_max) {
    require(n_max >= 0, ErrorKind::Domain, "n_max");
    require(blaschke_expansion_check(spec), ErrorKind::FixedPointFailed, "Blaschke product is not certified expanding");
    const CircleMap map{Blaschke(spec)};

    // Floating Newton iteration for T(z) = z from the origin.
    complex x(0, 0);
    double step = 0;
    for (int it = 0; it < 100; ++it) {
        const Jet j = map.eval_jet(Ball(x));
        const complex f = j.value.center() - x;
        const complex df = j.deriv.center() - 1.0;
        const complex dx = f / df;
        x -= dx;
        step = std::abs(dx);
        if (step <= 1e-17 * (1 + std::abs(x))) break;
    }

    // Krawczyk test on X = B(x, r): K(X) = x - Y f(x) + (1 - Y f'(X))(X - x).
    const Jet at_x = map.eval_jet(Ball(x));
    const Ball fx = at_x.value - Ball(x);
    const complex y = 1.0 / (at_x.deriv.center() - 1.0);
    // Start just above the Newton correction so the multiplier stays tight.
    const double correction = mul_up(abs_up(y), fx.abs_upper());
    for (double r = std::max({mul_up(4.0, correction), 8 * step, 1e-300}); r < 0.5; r *= 16) {
        const Ball box(x, r);
        Jet on_box;
        try {
            on_box = map.eval_jet(box);
        } catch (const Error&) {
            continue;
        }
        const Ball slope = Ball(1.0) - Ball(y) * (on_box.deriv - Ball(1.0));
        const Ball k = Ball(x) - Ball(y) * fx + slope * Ball(complex(0, 0), r);
        const double reach = add_up(abs_up(k.center() - x), k.radius());
        if (!(mul_up(reach, 1 + 4 * kUnit) < r) || !(box.abs_upper() < 1.0)) continue;

        BlaschkeSpectrum out;
        // An exact floating fixed point gives the multiplier without the box width.
        const bool exact = fx.radius() == 0 && fx.center() == complex(0, 0);
        out.fixed_point = exact ? Ball(x) : Ball(x, r);
        out.multiplier = exact ? at_x.deriv : on_box.deriv;
        char radius_text[32];
        std::snprintf(radius_text, sizeof radius_text, "%.3g", r);
        out.method = std::string("Krawczyk test on a disk of radius ") + radius_text +
                     (exact ? " around an exact floating fixed point" : "");
        out.eigenvalues.push_back(Ball(1.0));
        Ball p(1.0);
        for (int n = 1; n <= n_max; ++n) {
            p = p * out.multiplier;
            out.eigenvalues.push_back(p);
            out.eigenvalues.push_back(conj(p));
        }
        return out;
    }
    fail(ErrorKind::FixedPointFailed, "Krawczyk containment failed");
}

// ---------------------------------------------------------------- heuristics

namespace {

double predicted_log_delta_inv(double eta, double alpha, double rho, int K, double excl) {
    const double two_pi = 2 * std::numbers::pi;
    const double b = 1 + 2 / std::expm1(two_pi * (rho - alpha));
    const double log_r = alpha / (alpha - eta) * std::log(b / excl);
    const double a1 = -two_pi * K * alpha;
    const double a2 = -two_pi * K * (alpha - eta);
    const double hi = std::max(a1, a2);
    const double log_disc = std::log(b) + hi + std::log1p(std::exp(std::min(a1, a2) - hi));
    return -(log_r + log_disc);
}

double estimate_rho(const CircleMap& map, double eta) {
    constexpr int samples = 2048;
    const double r = std::exp(2 * std::numbers::pi * eta);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const complex u = std::polar(1.0, 2 * std::numbers::pi * (i + 0.5) / samples);
        const double out = std::log(std::abs(map.eval_float(r * u)));
        const double in = -std::log(std::abs(map.eval_float(u / r)));
        if (!std::isfinite(out) || !std::isfinite(in)) {
            if (std::isnan(out) || std::isnan(in)) return -1;
        }
        worst = std::min({worst, out, in});
    }
    return worst / (2 * std::numbers::pi);
}

}  // namespace

ParameterSuggestion suggest_parameters(const CircleMap& map, int K, double exclusion_radius, int eta_grid) {
    ParameterSuggestion best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int e = 1; e <= eta_grid; ++e) {
        const double eta = static_cast<double>(e) / eta_grid;
        const double rho_est = estimate_rho(map, eta);
        if (!(rho_est > eta)) continue;
        const double rho = rho_est - 1e-4 * (rho_est - eta);
        // Golden-section search in alpha on the concave-looking objective.
        double lo = eta, hi = rho;
        constexpr double g = 0.6180339887498949;
        for (int it = 0; it < 120; ++it) {
            const double a = hi - g * (hi - lo);
            const double b = lo + g * (hi - lo);
            if (predicted_log_delta_inv(eta, a, rho, K, exclusion_radius) <
                predicted_log_delta_inv(eta, b, rho, K, exclusion_radius))
                lo = a;
            else
                hi = b;
        }
        const double alpha = 0.5 * (lo + hi);
        const double value = predicted_log_delta_inv(eta, alpha, rho, K, exclusion_radius);
        if (value > best_value) {
            best_value = value;
            best = {eta, alpha, rho, std::exp(value)};
        }
    }
    require(best.eta > 0, ErrorKind::CertificationFailed, "no admissible annulus parameters found");
    return best;
}

}  // namespace rescert
