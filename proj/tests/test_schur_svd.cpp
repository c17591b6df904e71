#include <doctest.h>

#include "oracles.hpp"
#include "rescert/schur_cert.hpp"
#include "rescert/svd_cert.hpp"

using namespace rescert;
using oracle::cld;
using oracle::ld;
using oracle::LMatrix;

namespace {

// Random normal matrix: unitary Q times a diagonal times Q^*.
CMatrix random_normal(oracle::Sampler& s, Eigen::Index n) {
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = s.gaussian_complex();
    const Eigen::HouseholderQR<CMatrix> qr(g);
    const CMatrix q = qr.householderQ();
    CMatrix d = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) d(i, i) = s.gaussian_complex();
    return q * d * q.adjoint();
}

// Best matching of certified intervals against oracle values; greedy works
// because both are sorted and the intervals are disjoint or tiny.
bool multiset_covered(std::vector<Interval> intervals, std::vector<ld> values) {
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
    std::sort(values.begin(), values.end());
    if (intervals.size() != values.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(static_cast<ld>(intervals[i].lo()) <= values[i] && values[i] <= static_cast<ld>(intervals[i].hi())))
            return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("schur_cert") {

TEST_CASE("triangular input certifies with identity vectors") {
    CMatrix t = CMatrix::Zero(3, 3);
    t << 1, 2, 3, 0, 4, 5, 0, 0, 6;
    const CertifiedSchur cs = certify_schur(BallMatrix(t));
    CHECK(cs.T.isApprox(t, 1e-14));
    CHECK((cs.Z.cwiseAbs() - CMatrix::Identity(3, 3).cwiseAbs()).norm() < 1e-14);
    CHECK(cs.epsilon < 1e-13);
    const auto diag = eigenvalue_disks(cs);
    REQUIRE(diag.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(diag[i].center() - t(i, i)) < 1e-13);
    for (Eigen::Index i = 1; i < 3; ++i)
        for (Eigen::Index j = 0; j < i; ++j) CHECK(cs.T(i, j) == complex(0, 0));
}

TEST_CASE("random normal matrices: epsilon and member residuals") {
    oracle::Sampler s(41);
    for (int t = 0; t < 5; ++t) {
        const CMatrix c = random_normal(s, 8);
        const BallMatrix M(c, RMatrix::Constant(8, 8, 1e-14));
        const CertifiedSchur cs = certify_schur(M);
        CHECK(cs.epsilon <= 1e-10);
        CHECK(cs.epsilon >= cs.residual_bound);
        const LMatrix recon = oracle::widen(cs.Z) * oracle::widen(cs.T) * oracle::widen(cs.Z).adjoint();
        for (int m = 0; m < 20; ++m) {
            const LMatrix member = oracle::widen(s.member(M));
            CHECK(oracle::spectral_norm(member - recon) <= static_cast<ld>(cs.epsilon));
        }
        const LMatrix Z = oracle::widen(cs.Z);
        CHECK(oracle::spectral_norm(LMatrix::Identity(8, 8) - Z * Z.adjoint()) <= static_cast<ld>(cs.epsilon));
        CHECK(oracle::spectral_norm(Z) <= 1 + static_cast<ld>(cs.epsilon));
        CHECK(oracle::spectral_norm(Z.inverse()) <= 1 + static_cast<ld>(cs.epsilon));
        CHECK(oracle::spectral_norm(oracle::widen(cs.T)) <= static_cast<ld>(cs.C0));
    }
}

TEST_CASE("recertifying the reconstruction does not double epsilon") {
    oracle::Sampler s(42);
    const BallMatrix M(random_normal(s, 10));
    const CertifiedSchur cs = certify_schur(M);
    const CertifiedSchur again = certify_schur(BallMatrix(CMatrix(cs.Z * cs.T * cs.Z.adjoint())));
    CHECK(again.epsilon <= 2 * cs.epsilon);
}

TEST_CASE("C0 clamp is recorded for contractions") {
    CMatrix t = CMatrix::Zero(2, 2);
    t << 0.25, 0.1, 0, 0.5;
    const CertifiedSchur cs = certify_schur(BallMatrix(t));
    CHECK(cs.C0 == 1.0);
    CHECK(cs.C0_clamped);
    CHECK(cs.T_norm_bound < 1.0);
}

TEST_CASE("resolvent transfer formula") {
    CertifiedSchur cs;
    cs.epsilon = 0;
    CHECK(resolvent_transfer(cs, 0.3, 123.0) == 246.0);
    cs.epsilon = 1e-10;
    const double v = resolvent_transfer(cs, 1.1, 1e3);
    const oracle::Big e(1e-10), g = (1 + e) * (1 + e);
    const oracle::Big exact = 2 * g * 1000 / (1 - 2 * e * g * 1000);
    CHECK(oracle::Big(v) >= exact);
    CHECK(oracle::Big(v) <= exact * (1 + oracle::Big(1e-14)));
    try {
        (void)resolvent_transfer(cs, 1.1, 3e9);
        FAIL("transfer must refuse when 2 eps r >= 1/2");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GateFailed);
    }
}

TEST_CASE("pseudospectrum gate") {
    CertifiedSchur cs;
    cs.epsilon = 0;
    cs.C0 = 5;
    CHECK(pseudospectrum_gate(cs, 1e-3) == doctest::Approx(2.5e-4).epsilon(1e-15));
    cs.epsilon = 1e-10;
    cs.C0 = 50;
    // Threshold 4 eps (eps + C0 (1+eps)^2)(1+eps)^2 is about 2e-8 here.
    CHECK(gate_threshold(cs) == doctest::Approx(4 * 1e-10 * 50).epsilon(1e-6));
    const double d = pseudospectrum_gate(cs, 1e-7);
    CHECK(d == doctest::Approx(2.5e-8).epsilon(1e-9));
    CHECK(d <= 1e-7 / 4);
    try {
        (void)pseudospectrum_gate(cs, 1e-8);
        FAIL("delta0 below threshold");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Delta0TooSmall);
    }
    oracle::Sampler s(43);
    for (int t = 0; t < 50; ++t) {
        cs.epsilon = s.uniform(0, 1e-6);
        cs.C0 = s.uniform(1, 100);
        const double delta0 = gate_threshold(cs) * s.uniform(1, 1e6);
        CHECK(pseudospectrum_gate(cs, delta0) <= delta0 / 4);
    }
}

TEST_CASE("companion matrix eigenvalues") {
    CMatrix c(2, 2);
    c << 3, -2, 1, 0;  // characteristic polynomial (z - 1)(z - 2)
    const CertifiedSchur cs = certify_schur(BallMatrix(c));
    std::vector<double> eig;
    for (const Ball& b : eigenvalue_disks(cs)) eig.push_back(b.center().real());
    std::sort(eig.begin(), eig.end());
    CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eig[1] == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("transferred bounds dominate member resolvent norms") {
    oracle::Sampler s(44);
    int checked = 0;
    for (int t = 0; t < 10; ++t) {
        const auto n = static_cast<Eigen::Index>(4 + t);
        const BallMatrix M(random_normal(s, n) + 0.3 * s.random_ball(n, n, 1.0, 0).centers(),
                           RMatrix::Constant(n, n, 1e-12));
        const CertifiedSchur cs = certify_schur(M);
        const LMatrix T = oracle::widen(cs.T);
        for (int m = 0; m < 50; ++m) {
            const complex z = std::polar(s.uniform(3.5, 5.0), s.uniform(0, 2 * std::numbers::pi));
            const ld rT = oracle::resolvent_norm(T, cld(z.real(), z.imag()));
            const double bound = resolvent_transfer(cs, z, static_cast<double>(rT * (1 + 1e-12L)));
            const ld truth = oracle::resolvent_norm(oracle::widen(s.member(M)), cld(z.real(), z.imag()));
            CHECK(truth <= static_cast<ld>(bound));
            ++checked;
        }
    }
    CHECK(checked == 500);
}

}  // TEST_SUITE

TEST_SUITE("svd_cert") {

TEST_CASE("exact diagonal") {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 1;
    const SVDCertificate c = certify_svd(BallMatrix(d));
    REQUIRE(c.intervals.size() == 2);
    CHECK(c.theta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.theta <= 1.0);
    CHECK(multiset_covered(c.intervals, {3, 1}));
}

TEST_CASE("closed-form 2x2 singular values") {
    oracle::Sampler s(51);
    for (int t = 0; t < 50; ++t) {
        const BallMatrix B = s.random_ball(2, 2, 1.0, 1e-14);
        const CMatrix m = s.member(B);
        // sigma^2 are the eigenvalues of m^* m: (tr +- sqrt(tr^2 - 4 det)) / 2.
        const LMatrix g = oracle::widen(m).adjoint() * oracle::widen(m);
        const ld tr = g.trace().real();
        const ld det = std::abs(oracle::widen(m).determinant()) * std::abs(oracle::widen(m).determinant());
        const ld disc = std::sqrt(std::max<ld>(0, tr * tr - 4 * det));
        const std::vector<ld> sv{std::sqrt((tr + disc) / 2), std::sqrt(std::max<ld>(0, (tr - disc) / 2))};
        CHECK(multiset_covered(certify_svd(B).intervals, sv));
    }
}

TEST_CASE("20x20 random matrices against the extended-precision SVD") {
    oracle::Sampler s(52);
    for (int t = 0; t < 5; ++t) {
        const BallMatrix B = s.random_ball(20, 20, 1.0, 1e-12);
        const SVDCertificate c = certify_svd(B);
        CHECK(multiset_covered(c.intervals, oracle::singular_values(oracle::widen(s.member(B)))));
        CHECK(c.alpha_u < 1e-12);
        CHECK(c.beta_v < 1e-12);
    }
}

TEST_CASE("smallest singular value lower bounds") {
    const double id = smallest_sv_lower(BallMatrix::identity(6));
    CHECK(id <= 1.0);
    CHECK(id >= 1.0 - 1e-12);
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 1e-6;
    CHECK(smallest_sv_lower(BallMatrix(d)) == doctest::Approx(1e-6).epsilon(1e-9));
    try {
        (void)smallest_sv_lower(BallMatrix(CMatrix::Zero(3, 3)));
        FAIL("singular matrix");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ThetaNonpositive);
    }
}

TEST_CASE("soundness and monotonicity of theta") {
    oracle::Sampler s(53);
    for (int t = 0; t < 40; ++t) {
        const auto n = static_cast<Eigen::Index>(2 + t % 15);
        const BallMatrix B = s.random_ball(n, n, 1.0, 1e-11);
        const SVDCertificate c = certify_svd(B);
        CHECK(static_cast<ld>(c.theta) <= oracle::sigma_min(oracle::widen(B.centers())) + c.e_sigma);
        const BallMatrix wider(B.centers(), B.radii() * 10.0);
        CHECK(certify_svd(wider).theta <= c.theta);
    }
}

}  // TEST_SUITE
