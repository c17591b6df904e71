#pragma once

#include <vector>

#include "rescert/ball_matrix.hpp"
#include "rescert/interval.hpp"

namespace rescert {

struct SVDCertificate {
    // Enclosures of the singular values of every member, up to an unknown
    // permutation of indices.
    std::vector<Interval> intervals;
    double theta = 0;    // min of the lower ends
    double alpha_u = 0;  // ||I - U^* U||
    double beta_v = 0;   // ||I - V^* V||
    double e_sigma = 0;  // off-diagonal and non-real diagonal part of U^* B V
};

SVDCertificate certify_svd(const BallMatrix& B);

// theta > 0 with ||B'^{-1}|| <= 1 / theta for every member B'.
double smallest_sv_lower(const BallMatrix& B);

}  // namespace rescert
