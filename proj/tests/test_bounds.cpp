#include <doctest.h>

#include "oracles.hpp"
#include "rescert/bounds.hpp"

using namespace rescert;
using oracle::Big;

namespace {

const AnnulusWidths kBlaschke{0.49149149, 0.5758488557738615, 0.583052};
const AnnulusWidths kDoubling{0.22211055, 0.308389, 0.312891};

// Closed forms evaluated with 200-digit binary floats from the same double inputs.
Big big_pi() { return boost::math::constants::pi<Big>(); }

Big big_op_norm(double alpha, double rho) {
    return 1 + 2 / (exp(2 * big_pi() * (Big(rho) - Big(alpha))) - 1);
}

Big big_disc(const AnnulusWidths& w, int K) {
    const Big a(w.alpha), e(w.eta);
    return big_op_norm(w.alpha, w.rho) * (exp(-2 * big_pi() * K * a) + exp(-2 * big_pi() * K * (a - e)));
}

Big big_ratio(const AnnulusWidths& w, double excl) {
    const Big a(w.alpha), e(w.eta);
    return pow(big_op_norm(w.alpha, w.rho) / Big(excl), a / (a - e));
}

bool dominates(double bound, const Big& exact) { return Big(bound) >= exact; }

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("operator norm bound") {
    const double rho = 1.0, alpha = 1.0 - std::log(2.0) / (2 * std::numbers::pi);
    CHECK(op_norm_bound(alpha, rho) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(dominates(op_norm_bound(alpha, rho), big_op_norm(alpha, rho)));
    const double b = op_norm_bound(kBlaschke.alpha, kBlaschke.rho);
    CHECK(b == doctest::Approx(44.20).epsilon(1e-3));
    CHECK(dominates(b, big_op_norm(kBlaschke.alpha, kBlaschke.rho)));
    const double d = op_norm_bound(kDoubling.alpha, kDoubling.rho);
    CHECK(d == doctest::Approx(70.71).epsilon(1e-3));
    CHECK(dominates(d, big_op_norm(kDoubling.alpha, kDoubling.rho)));
    CHECK_THROWS_AS(op_norm_bound(0.5, 0.5), Error);
    CHECK_THROWS_AS(op_norm_bound(0.6, 0.5), Error);
}

TEST_CASE("operator norm bound decreases as the gap grows") {
    double prev = op_norm_bound(0.5, 0.5001);
    for (double gap : {0.001, 0.01, 0.05, 0.1, 0.3}) {
        const double v = op_norm_bound(0.5, 0.5 + gap);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("interpolation bound") {
    CHECK(interpolation_bound(2.5, 7.0, 0.0, 0.3) == 2.5);
    CHECK(interpolation_bound(4.0, 4.0, 0.1, 0.3) == 4.0);
    const double v = interpolation_bound(1.0, std::exp(1.0), 0.2, 0.4);
    CHECK(v == doctest::Approx(std::sqrt(std::exp(1.0))).epsilon(1e-14));
    CHECK(dominates(v, sqrt(exp(Big(1))) * (1 - Big(1e-16))));
    CHECK_THROWS_AS(interpolation_bound(1.0, 1.0, 0.4, 0.3), Error);
    CHECK_THROWS_AS(interpolation_bound(-1.0, 1.0, 0.1, 0.3), Error);
}

TEST_CASE("projection defect") {
    CHECK(projection_defect(0, 0.5, 0.1) == 1.0);
    const double b = projection_defect(128, kBlaschke.alpha, kBlaschke.eta);
    CHECK(b == doctest::Approx(3.4e-30).epsilon(0.02));
    CHECK(dominates(b, exp(-2 * big_pi() * 128 * (Big(kBlaschke.alpha) - Big(kBlaschke.eta)))));
    const double d = projection_defect(128, kDoubling.alpha, kDoubling.eta);
    CHECK(d == doctest::Approx(7.3e-31).epsilon(0.02));
    for (int K = 1; K < 64; ++K) CHECK(projection_defect(K + 1, 0.3, 0.1) < projection_defect(K, 0.3, 0.1));
}

TEST_CASE("discretization error") {
    CHECK(discretization_error(kBlaschke, 256) < discretization_error(kBlaschke, 128));
    const double b = discretization_error(kBlaschke, 128);
    CHECK(b == doctest::Approx(1.5e-28).epsilon(0.02));
    CHECK(dominates(b, big_disc(kBlaschke, 128)));
    const double d = discretization_error(kDoubling, 128);
    CHECK(d == doctest::Approx(5.2e-29).epsilon(0.02));
    CHECK(dominates(d, big_disc(kDoubling, 128)));
    CHECK(b <= Big(big_disc(kBlaschke, 128) * (1 + Big(1e-12))));
}

TEST_CASE("eigenfunction ratio coefficient") {
    const double B = op_norm_bound(kBlaschke.alpha, kBlaschke.rho);
    CHECK(eigenratio_r(kBlaschke, B) == doctest::Approx(1.0).epsilon(1e-12));
    const double rb = eigenratio_r(kBlaschke, 0.51);
    CHECK(rb == doctest::Approx(1.7e13).epsilon(0.02));
    CHECK(rb <= 2.21e14);
    CHECK(dominates(rb, big_ratio(kBlaschke, 0.51)));
    const double rd = eigenratio_r(kDoubling, 0.21);
    CHECK(rd == doctest::Approx(1.1e9).epsilon(0.03));
    CHECK(rd <= 1.783e9);
    CHECK(dominates(rd, big_ratio(kDoubling, 0.21)));
    double prev = eigenratio_r(kBlaschke, 0.1);
    for (double excl : {0.2, 0.3, 0.51, 0.8}) {
        const double v = eigenratio_r(kBlaschke, excl);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(eigenratio_r(kBlaschke, 0.0), Error);
}

TEST_CASE("delta budget") {
    const auto one = delta_budget(1.0, 1.0);
    CHECK(one.delta == 1.0);
    CHECK(one.delta_inv == 1.0);
    const auto b = delta_budget(2.21e14, discretization_error(kBlaschke, 128));
    CHECK(b.delta == doctest::Approx(3.3e-14).epsilon(0.02));
    CHECK(b.delta_inv >= 0.97 * 2.99e13);
    const auto d = delta_budget(1.783e9, discretization_error(kDoubling, 128));
    CHECK(d.delta_inv >= 0.97 * 1.04e19);
    for (const auto& h : {one, b, d}) CHECK(Big(h.delta) * Big(h.delta_inv) <= 1);
    CHECK_THROWS_AS(delta_budget(0.0, 1.0), Error);
    // An underflowing product still rounds up to a positive subnormal, so the
    // budget stays sound; an overflowing one is unusable.
    const auto tiny = delta_budget(1e-200, 1e-200);
    CHECK(tiny.delta > 0);
    CHECK(Big(tiny.delta) * Big(tiny.delta_inv) <= 1);
    try {
        (void)delta_budget(1e200, 1e200);
        FAIL("overflow must be reported");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetUnusable);
    }
}

TEST_CASE("DFLY gamma") {
    CHECK(dfly_gamma({.C1 = 0, .C2 = 1, .beta = 0, .M = 1}, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
    const DFLYConstants c{.C1 = 1, .C2 = 1, .beta = 0.5, .M = 1};
    const double g = dfly_gamma(c, 0.9);
    // Exhaustive scan in 200-digit arithmetic.
    Big best = -1;
    for (int n = 1; n <= 10000; ++n) {
        const Big den = pow(Big(0.9), n) - pow(Big(0.5), n);
        if (den <= 0) continue;
        const Big term = 1 / den;
        if (best < 0 || term < best) best = term;
    }
    CHECK(dominates(g, best));
    CHECK(Big(g) <= best * (1 + Big(1e-12)));
    CHECK_THROWS_AS(dfly_gamma(c, 0.5), Error);
    CHECK_THROWS_AS(dfly_gamma(c, 0.4), Error);
    double prev = dfly_gamma(c, 0.6);
    for (double mu : {0.7, 0.8, 0.9, 0.99}) {
        const double v = dfly_gamma(c, mu);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("weak resolvent feasibility") {
    const DFLYConstants c{.C1 = 1, .C2 = 1, .beta = 0.5, .M = 1};
    const Big q = abs(log(Big(0.7))) / abs(log(Big(0.5)));
    const Big cq = pow(Big(100), q);
    const double zero_delta = weak_resolvent_feasibility(c, 0.7, 10, 0, 100);
    const Big exact0 = cq * (1 / (1 - Big(0.7)) + 2 * Big(10));
    CHECK(dominates(zero_delta, exact0));
    CHECK(Big(zero_delta) <= exact0 * (1 + Big(1e-12)));
    const double v = weak_resolvent_feasibility(c, 0.7, 10, 1e-6, 100);
    const Big exact = cq / (1 - 2 * Big(10) * Big(1e-6) * cq) * (1 / (1 - Big(0.7)) + 2 * Big(10));
    CHECK(dominates(v, exact));
    CHECK(Big(v) <= exact * (1 + Big(1e-12)));
    try {
        (void)weak_resolvent_feasibility(c, 0.7, 10, 1e-2, 100);
        FAIL("denominator must be nonpositive here");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DenominatorNonpositive);
    }
    CHECK_THROWS_AS(weak_resolvent_feasibility({.C1 = 1, .C2 = 1, .beta = 0.5, .M = 2}, 0.7, 1, 0, 1), Error);
}

}  // TEST_SUITE
