#include "rescert/ball_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace rescert {

using namespace rnd;
using Eigen::Index;

namespace {

void check_finite(const CMatrix& c, const RMatrix& r, const char* what) {
    const bool ok = c.real().allFinite() && c.imag().allFinite() && r.allFinite();
    require(ok, ErrorKind::NonFinite, what);
}

// Relative and absolute slack covering the rounding of a nonnegative
// matrix product with inner dimension k, plus a few extra operations.
double product_inflation(Index k) { return add_up(1.0, mul_up(2.0, gamma_up(static_cast<double>(k + 4)))); }

RMatrix inflate(const RMatrix& m, double factor, double absolute) {
    return m.unaryExpr([&](double x) { return add_up(mul_up(x, factor), absolute); });
}

}  // namespace

BallMatrix::BallMatrix(CMatrix centers) : centers_(std::move(centers)) {
    radii_ = RMatrix::Zero(centers_.rows(), centers_.cols());
    validate();
}

BallMatrix::BallMatrix(CMatrix centers, RMatrix radii) : centers_(std::move(centers)), radii_(std::move(radii)) {
    require(centers_.rows() == radii_.rows() && centers_.cols() == radii_.cols(), ErrorKind::ShapeMismatch,
            "centers and radii shapes differ");
    validate();
}

void BallMatrix::validate() const {
    check_finite(centers_, radii_, "ball matrix with non-finite entries");
    require((radii_.array() >= 0).all(), ErrorKind::Domain, "negative radius in ball matrix");
}

BallMatrix BallMatrix::identity(Index n) { return BallMatrix(CMatrix::Identity(n, n)); }

BallMatrix BallMatrix::adjoint() const { return {centers_.adjoint(), radii_.transpose()}; }

std::uint64_t BallMatrix::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    const std::int64_t dims[2] = {rows(), cols()};
    mix(dims, sizeof dims);
    for (Index i = 0; i < rows(); ++i) {
        for (Index j = 0; j < cols(); ++j) {
            const double v[3] = {centers_(i, j).real(), centers_(i, j).imag(), radii_(i, j)};
            mix(v, sizeof v);
        }
    }
    return h;
}

bool operator==(const BallMatrix& a, const BallMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return std::memcmp(a.centers_.data(), b.centers_.data(), sizeof(complex) * a.centers_.size()) == 0 &&
           std::memcmp(a.radii_.data(), b.radii_.data(), sizeof(double) * a.radii_.size()) == 0;
}

RMatrix abs_upper(const CMatrix& m) {
    RMatrix out(m.rows(), m.cols());
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i) out(i, j) = abs_up(m(i, j));
    return out;
}

BallMatrix ball_add(const BallMatrix& a, const BallMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::ShapeMismatch, "ball_add shapes differ");
    CMatrix c(a.rows(), a.cols());
    RMatrix r(a.rows(), a.cols());
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            const Ball s = a.entry(i, j) + b.entry(i, j);
            c(i, j) = s.center();
            r(i, j) = s.radius();
        }
    }
    return {std::move(c), std::move(r)};
}

BallMatrix ball_sub(const BallMatrix& a, const BallMatrix& b) {
    return ball_add(a, BallMatrix(-b.centers(), b.radii()));
}

BallMatrix ball_matmul(const BallMatrix& a, const BallMatrix& b) {
    require(a.cols() == b.rows(), ErrorKind::ShapeMismatch, "ball_matmul inner dimensions differ");
    const Index k = a.cols();
    CMatrix c = a.centers() * b.centers();
    const RMatrix abs_a = abs_upper(a.centers());
    const RMatrix abs_b = abs_upper(b.centers());

    // Each output component is a sum of 2k real products in any order, so its
    // error is at most gamma_{2k} times the sum of moduli; sqrt(2) < 1.5
    // converts componentwise to modulus bounds.
    const double g = mul_up(1.5, gamma_up(2.0 * static_cast<double>(k)));
    RMatrix inner = g * abs_b;
    if (!b.exact()) inner += b.radii();
    RMatrix r = abs_a * inner;
    if (!a.exact()) r.noalias() += a.radii() * (abs_b + b.radii());

    const double tiny = mul_up(static_cast<double>(8 * k + 16), kTiny);
    r = inflate(r, product_inflation(k), tiny);
    check_finite(c, r, "ball_matmul overflow");
    return {std::move(c), std::move(r)};
}

BallMatrix shift_minus(const Ball& z, const BallMatrix& m) {
    require(m.rows() == m.cols(), ErrorKind::ShapeMismatch, "shift_minus needs a square matrix");
    CMatrix c = -m.centers();
    RMatrix r = m.radii();
    for (Index i = 0; i < m.rows(); ++i) {
        const Ball d = z - m.entry(i, i);
        c(i, i) = d.center();
        r(i, i) = d.radius();
    }
    return {std::move(c), std::move(r)};
}

namespace {

RMatrix weight_matrix(const BallMatrix& a) {
    RMatrix w = abs_upper(a.centers());
    if (!a.exact()) {
        for (Index j = 0; j < w.cols(); ++j)
            for (Index i = 0; i < w.rows(); ++i) w(i, j) = add_up(w(i, j), a.radii()(i, j));
    }
    return w;
}

}  // namespace

double spectral_norm_upper(const BallMatrix& a, const RVector& v) {
    require(v.size() == a.cols(), ErrorKind::ShapeMismatch, "weight vector length");
    require((v.array() > 0).all() && v.allFinite(), ErrorKind::Domain, "weights must be strictly positive");
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const RMatrix w = weight_matrix(a);
    // Upward-rounded matrix-vector products in a fixed order: exact inputs
    // such as small integers give exact (tight) bounds.
    RVector y = RVector::Zero(a.rows());
    for (Index j = 0; j < w.cols(); ++j)
        for (Index i = 0; i < w.rows(); ++i) y(i) = add_up(y(i), mul_up(w(i, j), v(j)));
    double worst = 0.0;
    for (Index j = 0; j < w.cols(); ++j) {
        double x = 0.0;
        for (Index i = 0; i < w.rows(); ++i) x = add_up(x, mul_up(w(i, j), y(i)));
        worst = std::max(worst, div_up(x, v(j)));
    }
    const double bound = sqrt_up(worst);
    require(std::isfinite(bound), ErrorKind::NonFinite, "spectral norm bound overflow");
    return bound;
}

double spectral_norm_upper(const BallMatrix& a) { return spectral_norm_upper(a, RVector::Ones(a.cols())); }

RVector perron_weights(const BallMatrix& a, int iterations) {
    const RMatrix w = abs_upper(a.centers()) + a.radii();
    RVector v = RVector::Ones(a.cols());
    for (int it = 0; it < iterations; ++it) {
        RVector next = w.transpose() * (w * v);
        const double scale = next.maxCoeff();
        if (!(scale > 0) || !std::isfinite(scale)) break;
        v = next / scale;
    }
    // Keep strictly positive and not too small so rounding stays benign.
    for (Index i = 0; i < v.size(); ++i) v(i) = std::max(v(i), 1e-8);
    return v;
}

double l1_norm_from_l2(double l2_bound, Index n) {
    require(l2_bound >= 0 && n >= 1, ErrorKind::Domain, "l1_norm_from_l2 domain");
    return mul_up(sqrt_up(static_cast<double>(n)), l2_bound);
}

double l1_operator_norm_upper(const BallMatrix& a) {
    const RMatrix w = weight_matrix(a);
    double best = 0.0;
    for (Index j = 0; j < w.cols(); ++j) {
        double s = 0.0;
        for (Index i = 0; i < w.rows(); ++i) s = add_up(s, w(i, j));
        best = std::max(best, s);
    }
    return best;
}

void write_ball_matrix(std::ostream& os, const BallMatrix& m) {
    os << "rescert-ballmatrix 1\n" << m.rows() << ' ' << m.cols() << '\n';
    char buf[128];
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%a %a %a\n", m.centers()(i, j).real(), m.centers()(i, j).imag(),
                          m.radii()(i, j));
            os << buf;
        }
    }
    require(static_cast<bool>(os), ErrorKind::Io, "failed writing ball matrix");
}

BallMatrix read_ball_matrix(std::istream& is) {
    std::string tag;
    int version = 0;
    is >> tag >> version;
    require(tag == "rescert-ballmatrix" && version == 1, ErrorKind::Io, "not a ball matrix dump");
    Index rows = 0, cols = 0;
    is >> rows >> cols;
    require(static_cast<bool>(is) && rows >= 0 && cols >= 0, ErrorKind::Io, "bad ball matrix dimensions");
    CMatrix c(rows, cols);
    RMatrix r(rows, cols);
    std::string re, im, rad;
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            is >> re >> im >> rad;
            require(static_cast<bool>(is), ErrorKind::Io, "truncated ball matrix dump");
            c(i, j) = complex(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
            r(i, j) = std::strtod(rad.c_str(), nullptr);
        }
    }
    return {std::move(c), std::move(r)};
}

}  // namespace rescert
