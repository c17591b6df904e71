#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rescert/ball_matrix.hpp"
#include "rescert/circle_map.hpp"

namespace rescert {

// Enclosure of the unnormalized forward DFT Y_q = sum_m x_m e^{-2 pi i q m / N}
// for every member sequence. Radix-2 Cooley-Tukey in floating point; the
// radius combines the input radii with the classical norm-wise error bound
// log2(N) eta / (1 - log2(N) eta), eta = mu + gamma_4 (sqrt2 + mu), where mu
// bounds the twiddle factor errors.
std::vector<Ball> validated_fft(std::span<const Ball> samples);

// The relative bound above for a given size.
double fft_relative_error(std::size_t n);

struct GalerkinOptions {
    // Largest admissible per-entry aliasing radius.
    double alias_tolerance = 1e-12;
    // Arcs used to bound |T| on the aliasing circles.
    std::size_t alias_arcs = 4096;
    // Relative slack on the decay envelope check.
    double decay_slack = 1e-9;
};

struct GalerkinOperator {
    int K = 0;
    Eigen::Index n = 0;
    std::size_t fft_size = 0;
    BallMatrix matrix;
    std::vector<double> aliasing_bound;  // per row, indexed by k + K
    double aliasing_norm_bound = 0;      // l2 norm of the aliasing part of the radii
    AnnulusCertificate annulus;
    ThinAnnulus alias_annulus;
    std::uint64_t map_hash = 0;
    std::size_t envelope_tightened = 0;  // entries replaced by the decay envelope ball
};

// Row k (mode -K..K) holds the Fourier coefficients of T(e^{i theta})^{-k}:
// entry (k, j) = (2 pi)^{-1} int e^{i j theta} T(e^{i theta})^{-k} d theta.
GalerkinOperator fourier_matrix(const CircleMap& map, const AnnulusCertificate& ann, int K, std::size_t fft_size,
                                const GalerkinOptions& opts = {});

// Upper bound on |entry (k, j)| implied by analyticity on the certified annulus.
double decay_envelope(const AnnulusCertificate& ann, int k, int j);

struct GalerkinHeader {
    std::uint64_t map_hash = 0;
    int K = 0;
    std::size_t fft_size = 0;
    double eta = 0, alpha = 0, rho = 0;
    double aliasing_max = 0;
    std::size_t envelope_tightened = 0;
};

void write_galerkin(std::ostream& os, const GalerkinOperator& op);
std::pair<GalerkinHeader, BallMatrix> read_galerkin(std::istream& is);

}  // namespace rescert
