#include "rescert/svd_cert.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace rescert {

using namespace rnd;
using Eigen::Index;

namespace {

double orthogonality_defect(const CMatrix& q) {
    const BallMatrix Q(q);
    const BallMatrix gram = ball_matmul(Q.adjoint(), Q);
    const BallMatrix defect = ball_sub(BallMatrix::identity(q.cols()), gram);
    return spectral_norm_upper(defect, perron_weights(defect));
}

}  // namespace

SVDCertificate certify_svd(const BallMatrix& B) {
    const Index m = B.rows();
    const Index n = B.cols();
    require(m > 0 && n > 0, ErrorKind::Domain, "certify_svd needs a nonempty matrix");
    const Index p = std::min(m, n);

    Eigen::BDCSVD<CMatrix> svd(B.centers(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix& U = svd.matrixU();
    const CMatrix& V = svd.matrixV();

    SVDCertificate out;
    out.alpha_u = orthogonality_defect(U);
    out.beta_v = orthogonality_defect(V);
    if (!(out.alpha_u < 1 && out.beta_v < 1))
        fail(ErrorKind::OrthogonalityTooWeak, "approximate singular vectors are not close enough to unitary");

    const BallMatrix S = ball_matmul(ball_matmul(BallMatrix(U).adjoint(), B), BallMatrix(V));

    // Split S into real diagonal D and the rest; the imaginary parts and radii
    // of the diagonal join the off-diagonal norm.
    CMatrix off_c = S.centers();
    RMatrix off_r = S.radii();
    std::vector<double> d(static_cast<std::size_t>(p));
    double diag_excess = 0.0;
    for (Index i = 0; i < p; ++i) {
        d[static_cast<std::size_t>(i)] = std::abs(S.centers()(i, i).real());
        diag_excess = std::max(diag_excess, add_up(std::abs(S.centers()(i, i).imag()), S.radii()(i, i)));
        off_c(i, i) = 0.0;
        off_r(i, i) = 0.0;
    }
    const BallMatrix off(std::move(off_c), std::move(off_r));
    out.e_sigma = add_up(spectral_norm_upper(off, perron_weights(off)), diag_excess);

    const Interval a(out.alpha_u), b(out.beta_v), one(1.0);
    const double lo_scale = (one / sqrt((one + a) * (one + b))).lo();
    const double hi_scale = (one / sqrt((one - a) * (one - b))).hi();
    out.intervals.reserve(static_cast<std::size_t>(p));
    out.theta = kInf;
    for (double di : d) {
        const double lo = nonneg(mul_down(sub_down(di, out.e_sigma), lo_scale));
        const double hi = mul_up(add_up(di, out.e_sigma), hi_scale);
        out.intervals.emplace_back(lo, hi);
        out.theta = std::min(out.theta, lo);
    }
    // A rectangular member has n - p further zero singular values on the
    // longer side; they do not enter theta for the square use case.
    return out;
}

double smallest_sv_lower(const BallMatrix& B) {
    require(B.rows() == B.cols(), ErrorKind::ShapeMismatch, "smallest_sv_lower needs a square matrix");
    const SVDCertificate cert = certify_svd(B);
    if (!(cert.theta > 0)) fail(ErrorKind::ThetaNonpositive, "smallest singular value lower bound is not positive");
    return cert.theta;
}

}  // namespace rescert
