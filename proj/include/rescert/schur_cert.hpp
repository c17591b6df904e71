#pragma once

#include <cstdint>
#include <vector>

#include "rescert/ball_matrix.hpp"

namespace rescert {

// Floating Z, T with certified bounds: for every member M' of the source ball,
// ||M' - Z T Z^*|| <= epsilon, ||I - Z Z^*|| <= epsilon, ||Z||, ||Z^{-1}|| <= 1 + epsilon.
struct CertifiedSchur {
    CMatrix Z;
    CMatrix T;  // upper triangular with exact zeros below the diagonal
    double epsilon = 0;
    double C0 = 1;  // upper bound on ||T||, clamped to at least 1
    bool C0_clamped = false;
    std::uint64_t source_hash = 0;

    // Audit values; epsilon is their maximum.
    double residual_bound = 0;     // ||M' - Z T Z^*||
    double unitarity_bound = 0;    // ||I - Z Z^*||
    double z_norm_excess = 0;      // ||Z|| - 1
    double z_inv_norm_excess = 0;  // ||Z^{-1}|| - 1
    double T_norm_bound = 0;       // before clamping

    [[nodiscard]] Eigen::Index size() const { return T.rows(); }
    [[nodiscard]] BallMatrix triangular() const { return BallMatrix(T); }
};

CertifiedSchur certify_schur(const BallMatrix& M);

// Upper bound on ||(z - M')^{-1}|| from a bound on ||(z - T)^{-1}||.
double resolvent_transfer(const CertifiedSchur& cs, complex z, double r_T_bound);

// Usable pseudospectral radius delta0 / (4 (1 + eps)^2), rounded down, after
// checking delta0 >= 4 eps (eps + C0 (1 + eps)^2) (1 + eps)^2.
double pseudospectrum_gate(const CertifiedSchur& cs, double delta0);

// Smallest delta0 accepted by the gate (rounded up).
double gate_threshold(const CertifiedSchur& cs);

// Diagonal of T as zero-radius balls.
std::vector<Ball> eigenvalue_disks(const CertifiedSchur& cs);

}  // namespace rescert
