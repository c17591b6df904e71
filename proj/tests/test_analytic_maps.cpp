#include <doctest.h>

#include "oracles.hpp"
#include "rescert/circle_map.hpp"

using namespace rescert;
using oracle::cld;
using oracle::ld;

namespace {

const cld kMu = std::polar(3 * std::sqrt(2.0L) / 8, oracle::kPi / 8);

cld reference_blaschke_ld(cld z) { return -z * (z - kMu) / (1.0L - std::conj(kMu) * z); }

cld perturbed_doubling_ld(cld z) {
    const ld b = 5.0L / 64 + 1.0L / 128 + 1.0L / 256;
    return cld(0, 1) * z * z * std::exp((0.5L - b * oracle::kPi) * (z - 1.0L / z));
}

Blaschke blaschke_of(std::vector<complex> zeros) {
    Blaschke b;
    for (auto z : zeros) b.zeros.emplace_back(z);
    return b;
}

}  // namespace

TEST_SUITE("analytic_maps") {

TEST_CASE("expansion check on the sum of (1 - |a|) / (1 + |a|)") {
    CHECK(blaschke_expansion_check(blaschke_of({0, 0})));
    CHECK(blaschke_expansion_check(*reference_blaschke_map().blaschke()));
    CHECK_FALSE(blaschke_expansion_check(blaschke_of({0.9, 0.9})));
    const ld m = std::abs(kMu);
    CHECK(1 + (1 - m) / (1 + m) == doctest::Approx(1.3069).epsilon(1e-4));
}

TEST_CASE("doubling annulus certification and its failure just past the boundary") {
    const auto ann = certify_annulus(doubling_map(), 0.1, 0.19, {.subdivisions = 64});
    CHECK(ann.certified);
    CHECK(ann.outer_image_lower > std::exp(2 * std::numbers::pi * 0.19));
    CHECK(ann.outer_image_lower <= std::exp(2 * std::numbers::pi * 0.2));
    try {
        (void)certify_annulus(doubling_map(), 0.1, 0.21, {.subdivisions = 64, .max_arcs = 1024});
        FAIL("the image circle |w| = e^{0.4 pi} cannot avoid the rho = 0.21 annulus");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CertificationFailed);
    }
    CHECK_THROWS_AS(certify_annulus(doubling_map(), 0.2, 0.1), Error);
    CHECK_THROWS_AS(with_alpha(ann, 0.05), Error);
    CHECK_THROWS_AS(with_alpha(ann, 0.19), Error);
    CHECK(with_alpha(ann, 0.15).alpha == 0.15);
}

TEST_CASE("reference Blaschke annulus parameters certify") {
    const auto ann = certify_annulus(reference_blaschke_map(), 0.49149149, 0.583052, {.subdivisions = 16384});
    CHECK(ann.certified);
    CHECK(ann.outer_image_lower > std::exp(2 * std::numbers::pi * 0.583052));
    CHECK(ann.inner_image_upper < std::exp(-2 * std::numbers::pi * 0.583052));
    CHECK_FALSE(ann.domain_method.empty());
}

TEST_CASE("reference perturbed doubling annulus parameters certify") {
    const Rational b = Rational(5, 64) + Rational(1, 128) + Rational(1, 256);
    CHECK(b == Rational(23, 256));
    const auto ann = certify_annulus(perturbed_doubling_map(b), 0.22211055, 0.312891, {.subdivisions = 1 << 18});
    CHECK(ann.certified);
}

TEST_CASE("certification is monotone in rho") {
    const CircleMap map = reference_blaschke_map();
    const AnnulusOptions grid{.subdivisions = 16384, .max_arcs = 16384};
    CHECK(certify_annulus(map, 0.49149149, 0.583052, grid).certified);
    for (double rho : {0.58, 0.55, 0.52, 0.5}) CHECK(certify_annulus(map, 0.49149149, rho, grid).certified);
}

TEST_CASE("ball evaluation encloses sampled points for every variant") {
    oracle::Sampler s(21);
    const CircleMap doubling = doubling_map();
    const CircleMap blaschke = reference_blaschke_map();
    const CircleMap perturbed = perturbed_doubling_map(Rational(23, 256));
    const CircleMap general = laurent_exp_map(2, Ball(complex(0, 1)), {{1, Ball(0.25)}, {-1, Ball(-0.25)}});
    auto general_ld = [](cld z) { return cld(0, 1) * z * z * std::exp(0.25L * (z - 1.0L / z)); };
    int violations = 0;
    for (int t = 0; t < 400; ++t) {
        const complex c = std::polar(s.uniform(0.7, 1.4), s.uniform(0, 2 * std::numbers::pi));
        const Ball z(c, s.uniform(0, 1e-2));
        for (int m = 0; m < 5; ++m) {
            const complex p = s.in_disk(c, z.radius());
            const cld P(p.real(), p.imag());
            violations += oracle::inside(doubling.eval(z), P * P) ? 0 : 1;
            violations += oracle::inside(blaschke.eval(z), reference_blaschke_ld(P)) ? 0 : 1;
            violations += oracle::inside(blaschke.enclose(z), reference_blaschke_ld(P)) ? 0 : 1;
            violations += oracle::inside(perturbed.eval(z), perturbed_doubling_ld(P)) ? 0 : 1;
            violations += oracle::inside(perturbed.enclose(z), perturbed_doubling_ld(P)) ? 0 : 1;
            violations += oracle::inside(general.eval(z), general_ld(P)) ? 0 : 1;
            const Jet j = blaschke.eval_jet(z);
            const cld h = 1e-8L;
            const cld deriv = (reference_blaschke_ld(P + h) - reference_blaschke_ld(P - h)) / (2.0L * h);
            violations += oracle::inside(j.deriv.widened(1e-9), deriv) ? 0 : 1;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("doubling spectrum is {1, 0}") {
    const auto spec = blaschke_exact_spectrum(*doubling_map().blaschke(), 3);
    CHECK(spec.fixed_point.contains(0));
    CHECK(spec.multiplier.contains(0));
    REQUIRE(!spec.eigenvalues.empty());
    CHECK(spec.eigenvalues.front().contains(1));
    for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i) CHECK(spec.eigenvalues[i].abs_upper() < 1e-250);
}

TEST_CASE("reference Blaschke product: fixed point 0 and multiplier mu") {
    const auto spec = blaschke_exact_spectrum(*reference_blaschke_map().blaschke(), 6);
    CHECK(spec.fixed_point.contains(0));
    CHECK(oracle::inside(spec.multiplier, kMu));
    CHECK(spec.multiplier.center().real() == doctest::Approx(0.489961).epsilon(1e-6));
    CHECK(spec.multiplier.center().imag() == doctest::Approx(0.202949).epsilon(1e-5));
    CHECK(spec.multiplier.radius() < 1e-14);
    // |mu^2| = 9/32 sits inside the exclusion disk of radius 0.51.
    const Ball mu2 = sqr(spec.multiplier);
    CHECK(mu2.abs_upper() < 0.51);
    CHECK(mu2.abs().contains(9.0 / 32));
    CHECK_FALSE(spec.method.empty());
}

TEST_CASE("spectrum is closed under conjugation with geometric moduli") {
    const int n_max = 8;
    const auto spec = blaschke_exact_spectrum(*reference_blaschke_map().blaschke(), n_max);
    REQUIRE(spec.eigenvalues.size() == static_cast<std::size_t>(1 + 2 * n_max));
    CHECK(spec.eigenvalues[0].contains(1));
    for (int n = 1; n <= n_max; ++n) {
        const cld mun = std::pow(kMu, n);
        bool found = false, found_conj = false;
        for (const Ball& e : spec.eigenvalues) {
            found = found || oracle::inside(e, mun);
            found_conj = found_conj || oracle::inside(e, std::conj(mun));
        }
        CHECK(found);
        CHECK(found_conj);
        const ld modulus = std::pow(std::abs(kMu), n);
        bool modulus_seen = false;
        for (const Ball& e : spec.eigenvalues) modulus_seen = modulus_seen || e.abs().contains(static_cast<double>(modulus));
        CHECK(modulus_seen);
    }
    for (const Ball& e : spec.eigenvalues) {
        bool has_conj = false;
        for (const Ball& f : spec.eigenvalues) has_conj = has_conj || f.contains(std::conj(e.center()));
        CHECK(has_conj);
    }
}

TEST_CASE("a general Blaschke product uses a certified nonzero fixed point") {
    // No zero at the origin, so the fixed point is found by Newton plus Krawczyk.
    Blaschke b = blaschke_of({0.3, complex(0.2, 0.1)});
    const auto spec = blaschke_exact_spectrum(b, 2);
    const Ball z0 = spec.fixed_point;
    CHECK(z0.abs_upper() < 1);
    auto T = [&](cld z) {
        const cld a1(0.3, 0), a2(0.2, 0.1);
        return (z - a1) / (1.0L - std::conj(a1) * z) * (z - a2) / (1.0L - std::conj(a2) * z);
    };
    const cld c(z0.center().real(), z0.center().imag());
    CHECK(std::abs(T(c) - c) < 1e-12L);
}

TEST_CASE("parameter search is available and nonrigorous") {
    const auto s = suggest_parameters(reference_blaschke_map(), 64, 0.51, 40);
    CHECK(s.eta > 0);
    CHECK(s.eta < s.alpha);
    CHECK(s.alpha < s.rho);
}

}  // TEST_SUITE
