#include "rescert/bounds.hpp"

#include <cmath>

#include "rescert/error.hpp"
#include "rescert/interval.hpp"
#include "rescert/rounding.hpp"

namespace rescert {

namespace {

Interval two_pi() { return Interval(2.0) * Interval::pi(); }

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, std::string(what) + " is not finite");
}

// Enclosure of 1 + 2 / (e^{2 pi (rho - alpha)} - 1).
Interval op_norm_interval(double alpha, double rho) {
    check_finite(alpha, "alpha");
    check_finite(rho, "rho");
    require(alpha < rho, ErrorKind::Domain, "op_norm_bound needs alpha < rho");
    Interval gap = Interval(rho) - Interval(alpha);
    Interval denom = expm1(two_pi() * gap);
    require(denom.lo() > 0, ErrorKind::Domain, "op_norm_bound: width gap too small");
    return Interval(1.0) + Interval(2.0) / denom;
}

Interval decay(double k, const Interval& width) { return exp(-(two_pi() * Interval(k) * width)); }

}  // namespace

AnnulusWidths AnnulusWidths::from(const AnnulusCertificate& ann) {
    require(ann.certified, ErrorKind::Domain, "annulus certificate is not certified");
    return {ann.eta, ann.alpha, ann.rho};
}

double op_norm_bound(double alpha, double rho) { return op_norm_interval(alpha, rho).hi(); }

double op_norm_bound(const AnnulusCertificate& ann) {
    auto w = AnnulusWidths::from(ann);
    return op_norm_bound(w.alpha, w.rho);
}

double interpolation_bound(double norm0, double norm_alpha, double eta, double alpha) {
    require(norm0 >= 0 && norm_alpha >= 0, ErrorKind::Domain, "interpolation_bound needs nonnegative norms");
    require(eta >= 0 && eta < alpha, ErrorKind::Domain, "interpolation_bound needs 0 <= eta < alpha");
    check_finite(norm0, "norm0");
    check_finite(norm_alpha, "norm_alpha");
    if (eta == 0) return norm0;
    if (norm0 == norm_alpha) return norm0;
    if (norm0 == 0 || norm_alpha == 0) return 0.0;
    Interval t = Interval(eta) / Interval(alpha);
    Interval a = pow(Interval(norm0), Interval(1.0) - t);
    Interval b = pow(Interval(norm_alpha), t);
    return (a * b).hi();
}

double projection_defect(int K, double alpha, double eta) {
    require(K >= 0, ErrorKind::Domain, "projection_defect needs K >= 0");
    require(eta >= 0 && alpha > eta, ErrorKind::Domain, "projection_defect needs alpha > eta >= 0");
    if (K == 0) return 1.0;
    return decay(K, Interval(alpha) - Interval(eta)).hi();
}

double discretization_error(const AnnulusWidths& w, int K) {
    require(K >= 0, ErrorKind::Domain, "discretization_error needs K >= 0");
    require(w.eta >= 0 && w.eta < w.alpha, ErrorKind::Domain, "discretization_error needs 0 <= eta < alpha");
    Interval B = op_norm_interval(w.alpha, w.rho);
    Interval tail = decay(K, Interval(w.alpha)) + decay(K, Interval(w.alpha) - Interval(w.eta));
    return (B * tail).hi();
}

double discretization_error(const AnnulusCertificate& ann, int K) {
    return discretization_error(AnnulusWidths::from(ann), K);
}

double eigenratio_r(const AnnulusWidths& w, double exclusion_radius) {
    require(exclusion_radius > 0, ErrorKind::Domain, "eigenratio_r needs a positive exclusion radius");
    require(w.eta >= 0 && w.eta < w.alpha, ErrorKind::Domain, "eigenratio_r needs 0 <= eta < alpha");
    Interval B = op_norm_interval(w.alpha, w.rho);
    Interval base = B / Interval(exclusion_radius);
    Interval expo = Interval(w.alpha) / (Interval(w.alpha) - Interval(w.eta));
    if (base.lo() == 1 && base.hi() == 1) return 1.0;
    return pow(base, expo).hi();
}

double eigenratio_r(const AnnulusCertificate& ann, double exclusion_radius) {
    return eigenratio_r(AnnulusWidths::from(ann), exclusion_radius);
}

HouseholderBudget delta_budget(double ratio_r, double disc_error, double exclusion_radius) {
    require(ratio_r > 0 && disc_error > 0, ErrorKind::Domain, "delta_budget needs positive inputs");
    check_finite(ratio_r, "ratio_r");
    check_finite(disc_error, "disc_error");
    HouseholderBudget out;
    out.exclusion_radius = exclusion_radius;
    out.ratio_r = ratio_r;
    out.disc_error = disc_error;
    out.delta = rnd::mul_up(ratio_r, disc_error);
    if (!(out.delta > 0) || !std::isfinite(out.delta))
        fail(ErrorKind::BudgetUnusable, "delta underflows or overflows");
    out.delta_inv = rnd::div_down(1.0, out.delta);
    if (!(out.delta_inv > 0) || !std::isfinite(out.delta_inv))
        fail(ErrorKind::BudgetUnusable, "1/delta underflows or overflows");
    return out;
}

double dfly_gamma(const DFLYConstants& c, double mu, long n_max) {
    require(c.C1 >= 0 && c.C2 >= 0 && (c.C1 > 0 || c.C2 > 0), ErrorKind::Domain, "DFLY constants invalid");
    require(c.beta >= 0 && c.beta < c.M, ErrorKind::Domain, "DFLY needs 0 <= beta < M");
    require(mu > c.beta, ErrorKind::Domain, "dfly_gamma needs mu > beta");
    require(n_max >= 1, ErrorKind::Domain, "dfly_gamma needs n_max >= 1");
    const Interval C1(c.C1), C2(c.C2), M(c.M), m(mu);
    if (c.C1 == 0) return (C2 * M / m).hi();

    // Term n in log space: log C2 + n log M - log(mu^n - C1 beta^n). The
    // denominator is positive once n log(mu / beta) > log C1, after which the
    // sequence is unimodal, so the scan stops at the first increase.
    const Interval logM = log(M);
    const Interval logmu = log(m);
    const bool beta_zero = c.beta == 0;
    const Interval logbeta = beta_zero ? Interval(0.0) : log(Interval(c.beta));
    const Interval logC1 = log(C1);
    const Interval logC2 = c.C2 > 0 ? log(C2) : Interval(0.0);
    if (c.C2 == 0) return 0.0;

    double best = rnd::kInf;
    double prev = rnd::kInf;
    for (long n = 1; n <= n_max; ++n) {
        Interval N(static_cast<double>(n));
        // mu^n - C1 beta^n = mu^n (1 - exp(log C1 + n (log beta - log mu))).
        Interval one_minus(1.0);
        if (!beta_zero) {
            Interval ratio_log = logC1 + N * (logbeta - logmu);
            if (ratio_log.lo() >= 0) continue;
            one_minus = -expm1(ratio_log);
            if (!(one_minus.lo() > 0)) continue;
        }
        Interval term_log = logC2 + N * logM - N * logmu - log(one_minus);
        double term = exp(term_log).hi();
        if (term < best) best = term;
        if (term > prev && std::isfinite(prev)) break;
        prev = term;
    }
    if (!std::isfinite(best)) fail(ErrorKind::NoAdmissibleTerm, "dfly_gamma: no admissible n");
    return best;
}

double weak_resolvent_feasibility(const DFLYConstants& c, double mu, double strong_resolvent, double delta_n,
                                  double cone_ratio) {
    require(c.M == 1, ErrorKind::Domain, "weak_resolvent_feasibility needs M = 1");
    require(mu > c.beta && mu < 1, ErrorKind::Domain, "weak_resolvent_feasibility needs beta < mu < 1");
    require(cone_ratio >= 1, ErrorKind::Domain, "cone ratio must be >= 1");
    require(strong_resolvent >= 0 && delta_n >= 0, ErrorKind::Domain, "resolvent and Delta must be nonnegative");
    const Interval m(mu);
    // q = |log mu| / |log beta|; q = 0 when beta = 0.
    Interval q = c.beta == 0 ? Interval(0.0) : abs(log(m)) / abs(log(Interval(c.beta)));
    Interval cq = pow(Interval(cone_ratio), q);
    Interval chat = Interval(c.C1) + Interval(c.C2);
    Interval rs(strong_resolvent);
    Interval denom = Interval(1.0) - chat * rs * Interval(delta_n) * cq;
    if (!(denom.lo() > 0)) fail(ErrorKind::DenominatorNonpositive, "weak resolvent denominator is not positive");
    Interval value = cq / denom * (Interval(1.0) / (Interval(1.0) - m) + chat * rs);
    return value.hi();
}

}  // namespace rescert
