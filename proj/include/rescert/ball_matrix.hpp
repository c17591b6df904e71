#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>

#include "rescert/ball.hpp"

namespace rescert {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Entrywise complex disks: {A : |A_ij - centers_ij| <= radii_ij}.
class BallMatrix {
public:
    BallMatrix() = default;
    explicit BallMatrix(CMatrix centers);
    BallMatrix(CMatrix centers, RMatrix radii);

    static BallMatrix identity(Eigen::Index n);

    [[nodiscard]] Eigen::Index rows() const { return centers_.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return centers_.cols(); }
    [[nodiscard]] const CMatrix& centers() const { return centers_; }
    [[nodiscard]] const RMatrix& radii() const { return radii_; }
    [[nodiscard]] Ball entry(Eigen::Index i, Eigen::Index j) const { return {centers_(i, j), radii_(i, j)}; }
    [[nodiscard]] bool exact() const { return radii_.isZero(0.0); }

    // Conjugate transpose; exact.
    [[nodiscard]] BallMatrix adjoint() const;
    // 64-bit FNV-1a over shape and raw entry bits; stable across runs.
    [[nodiscard]] std::uint64_t hash() const;

    friend bool operator==(const BallMatrix& a, const BallMatrix& b);

private:
    void validate() const;

    CMatrix centers_;
    RMatrix radii_;
};

BallMatrix ball_add(const BallMatrix& a, const BallMatrix& b);
BallMatrix ball_sub(const BallMatrix& a, const BallMatrix& b);
BallMatrix ball_matmul(const BallMatrix& a, const BallMatrix& b);
// z I - m, with the diagonal rounding accounted for.
BallMatrix shift_minus(const Ball& z, const BallMatrix& m);

// Upper bound on ||A'||_2 over all members: sqrt(max_i (W^T W v)_i / v_i) with
// W = |centers| + radii, all steps rounded upward.
double spectral_norm_upper(const BallMatrix& a);
double spectral_norm_upper(const BallMatrix& a, const RVector& weights);
// Floating power iteration on W^T W; a heuristic positive weight vector.
RVector perron_weights(const BallMatrix& a, int iterations = 8);

// Vectors are measured by the sum of absolute Fourier coefficients, so the
// matching operator norm is the maximum column absolute sum.
double l1_norm_from_l2(double l2_bound, Eigen::Index n);
double l1_operator_norm_upper(const BallMatrix& a);

// Entrywise moduli rounded upward.
RMatrix abs_upper(const CMatrix& m);

// Text dump: header line, "rows cols", then one "re im radius" line per entry in
// row-major order, all as hexadecimal floats for bit-exact reloads.
void write_ball_matrix(std::ostream& os, const BallMatrix& m);
BallMatrix read_ball_matrix(std::istream& is);

}  // namespace rescert
