#include "rescert/schur_cert.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "rescert/interval.hpp"

namespace rescert {

using namespace rnd;

namespace {

double norm_bound(const BallMatrix& a) { return spectral_norm_upper(a, perron_weights(a)); }

Interval one_plus_eps_sq(double eps) { return sqr(Interval(1.0) + Interval(eps)); }

}  // namespace

CertifiedSchur certify_schur(const BallMatrix& M) {
    require(M.rows() == M.cols(), ErrorKind::ShapeMismatch, "certify_schur needs a square matrix");
    const Eigen::Index n = M.rows();
    CertifiedSchur out;
    out.source_hash = M.hash();

    Eigen::ComplexSchur<CMatrix> schur(n);
    schur.compute(M.centers());
    if (schur.info() != Eigen::Success) fail(ErrorKind::SchurNonconvergence, "floating Schur step did not converge");
    out.Z = schur.matrixU();
    out.T = schur.matrixT().triangularView<Eigen::Upper>();

    const BallMatrix Z(out.Z);
    const BallMatrix Zh = Z.adjoint();
    const BallMatrix T(out.T);
    const BallMatrix residual = ball_sub(M, ball_matmul(ball_matmul(Z, T), Zh));
    const BallMatrix defect = ball_sub(BallMatrix::identity(n), ball_matmul(Z, Zh));

    out.residual_bound = norm_bound(residual);
    out.unitarity_bound = norm_bound(defect);
    const double ez = out.unitarity_bound;
    if (!(ez < 1)) fail(ErrorKind::EpsilonTooLarge, "Schur vectors are too far from unitary");

    // ||Z||^2 = ||Z Z^*|| <= 1 + ez and Z^{-1} = Z^* (I - E_Z)^{-1}.
    const Interval z_norm = sqrt(Interval(1.0) + Interval(ez));
    const Interval z_inv_norm = z_norm / (Interval(1.0) - Interval(ez));
    out.z_norm_excess = nonneg((z_norm - Interval(1.0)).hi());
    out.z_inv_norm_excess = nonneg((z_inv_norm - Interval(1.0)).hi());

    out.epsilon = std::max({out.residual_bound, out.unitarity_bound, out.z_norm_excess, out.z_inv_norm_excess});
    if (!(out.epsilon < 1)) fail(ErrorKind::EpsilonTooLarge, "Schur certificate epsilon >= 1");

    out.T_norm_bound = norm_bound(T);
    out.C0 = std::max(1.0, out.T_norm_bound);
    out.C0_clamped = out.T_norm_bound < 1.0;
    return out;
}

double resolvent_transfer(const CertifiedSchur& cs, complex z, double r_T_bound) {
    require(r_T_bound >= 0 && std::isfinite(r_T_bound), ErrorKind::Domain, "resolvent bound must be finite and >= 0");
    const Interval g = one_plus_eps_sq(cs.epsilon);
    const Interval c = Interval(2.0) * Interval(cs.epsilon) * g * Interval(r_T_bound);
    const double scale = std::max(1.0, abs_up(z));
    if (!((c * Interval(scale)).hi() < 0.5))
        fail(ErrorKind::GateFailed, "resolvent transfer precondition fails; shrink epsilon or move the contour");
    return (Interval(2.0) * g * Interval(r_T_bound) / (Interval(1.0) - c)).hi();
}

double gate_threshold(const CertifiedSchur& cs) {
    const Interval e(cs.epsilon);
    const Interval g = one_plus_eps_sq(cs.epsilon);
    return (Interval(4.0) * e * (e + Interval(cs.C0) * g) * g).hi();
}

double pseudospectrum_gate(const CertifiedSchur& cs, double delta0) {
    require(delta0 > 0 && std::isfinite(delta0), ErrorKind::Domain, "delta0 must be positive and finite");
    if (delta0 < gate_threshold(cs)) fail(ErrorKind::Delta0TooSmall, "delta0 below the Schur gate threshold");
    return (Interval(delta0) / (Interval(4.0) * one_plus_eps_sq(cs.epsilon))).lo();
}

std::vector<Ball> eigenvalue_disks(const CertifiedSchur& cs) {
    std::vector<Ball> out;
    out.reserve(static_cast<std::size_t>(cs.T.rows()));
    for (Eigen::Index i = 0; i < cs.T.rows(); ++i) out.emplace_back(cs.T(i, i), 0.0);
    return out;
}

}  // namespace rescert
