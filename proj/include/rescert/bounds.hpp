#pragma once

#include <optional>

#include "rescert/circle_map.hpp"

namespace rescert {

// Widths of the analytic function spaces: 0 < eta < alpha < rho.
struct AnnulusWidths {
    double eta = 0;
    double alpha = 0;
    double rho = 0;

    static AnnulusWidths from(const AnnulusCertificate& ann);
};

// Two-norm inequality constants ||A^n f||_s <= C1 beta^n ||f||_s + C2 M^n ||f||_w.
struct DFLYConstants {
    double C1 = 0;
    double C2 = 0;
    double beta = 0;
    double M = 1;
    std::optional<double> weak_norm_cap;
};

struct HouseholderBudget {
    double exclusion_radius = 0;
    double ratio_r = 0;
    double disc_error = 0;
    double delta = 0;      // rounded up
    double delta_inv = 0;  // rounded down
};

// Every function returns an upper bound of the exact closed form.

// 1 + 2 / (e^{2 pi (rho - alpha)} - 1).
double op_norm_bound(double alpha, double rho);
double op_norm_bound(const AnnulusCertificate& ann);

// norm0^{(alpha-eta)/alpha} * norm_alpha^{eta/alpha}.
double interpolation_bound(double norm0, double norm_alpha, double eta, double alpha);

// e^{-2 pi K (alpha - eta)}.
double projection_defect(int K, double alpha, double eta);

// op_norm_bound * (e^{-2 pi K alpha} + e^{-2 pi K (alpha - eta)}).
double discretization_error(const AnnulusWidths& w, int K);
double discretization_error(const AnnulusCertificate& ann, int K);

// (B / r)^{alpha / (alpha - eta)} with B = op_norm_bound.
double eigenratio_r(const AnnulusWidths& w, double exclusion_radius);
double eigenratio_r(const AnnulusCertificate& ann, double exclusion_radius);

HouseholderBudget delta_budget(double ratio_r, double disc_error, double exclusion_radius = 0);

// min over 1 <= n <= n_max of C2 M^n / (mu^n - C1 beta^n), skipping
// nonpositive denominators.
double dfly_gamma(const DFLYConstants& c, double mu, long n_max = 1'000'000);

// Weak-norm resolvent bound; requires M = 1 and mu in (beta, 1).
double weak_resolvent_feasibility(const DFLYConstants& c, double mu, double strong_resolvent, double delta_n,
                                  double cone_ratio);

}  // namespace rescert
