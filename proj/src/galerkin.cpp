#include "rescert/galerkin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "rescert/parallel.hpp"

namespace rescert {

using namespace rnd;

namespace {

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n), log2n_(std::countr_zero(n)), twiddles_(n / 2) {
        require(power_of_two(n), ErrorKind::Domain, "FFT size must be a power of two");
        double mu = 0;
        for (std::size_t k = 0; k < n / 2; ++k) {
            const Ball w = unit_root(-static_cast<long>(k), static_cast<long>(n));
            twiddles_[k] = w.center();
            mu = std::max(mu, w.radius());
        }
        relative_ = relative_bound(log2n_, mu);
    }

    static double relative_bound(int log2n, double mu) {
        if (log2n == 0) return 0.0;
        const double sqrt2 = sqrt_up(2.0);
        const double eta = add_up(mu, mul_up(gamma_up(4.0), add_up(sqrt2, mu)));
        const double le = mul_up(static_cast<double>(log2n), eta);
        require(le < 0.5, ErrorKind::Domain, "FFT too long for the error bound");
        return div_up(le, sub_down(1.0, le));
    }

    [[nodiscard]] double relative() const { return relative_; }

    // In-place transform of the centers; returns the radius valid for every bin.
    double run(std::vector<complex>& a, double input_radius_sum) const {
        const std::size_t n = n_;
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        double norm2 = 0.0;
        // The norm of the input is needed before the transform overwrites it,
        // and bit reversal does not change it.
        for (const complex& v : a) norm2 = add_up(norm2, add_up(mul_up(v.real(), v.real()), mul_up(v.imag(), v.imag())));
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t step = n / len;
            for (std::size_t i = 0; i < n; i += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const complex w = twiddles_[j * step];
                    const complex b = a[i + j + half];
                    const complex t(w.real() * b.real() - w.imag() * b.imag(), w.real() * b.imag() + w.imag() * b.real());
                    const complex u = a[i + j];
                    a[i + j] = complex(u.real() + t.real(), u.imag() + t.imag());
                    a[i + j + half] = complex(u.real() - t.real(), u.imag() - t.imag());
                }
            }
        }
        // ||Y||_2 = sqrt(N) ||x||_2 for the exact transform of the centers.
        const double y_norm = mul_up(sqrt_up(static_cast<double>(n)), sqrt_up(norm2));
        return add_up(mul_up(relative_, y_norm), input_radius_sum);
    }

private:
    std::size_t n_;
    int log2n_;
    std::vector<complex> twiddles_;
    double relative_ = 0;
};

// Per-row aliasing bound for row k given the thin annulus, in log space.
double row_alias(const ThinAnnulus& thin, int k, int K, std::size_t n) {
    const Interval tau(thin.tau);
    const Interval big_n(static_cast<double>(n));
    const Interval one_minus = Interval(1.0) - exp(-(tau * big_n));
    if (!(one_minus.lo() > 0)) return kInf;
    const Interval log_tail = -(tau * (big_n - Interval(static_cast<double>(K)))) - log(one_minus);
    auto log_sup = [k](double lo, double hi) -> Interval {
        if (k == 0) return Interval(0.0);
        if (k > 0) return Interval(static_cast<double>(-k)) * log(Interval(lo));
        return Interval(static_cast<double>(-k)) * log(Interval(hi));
    };
    const double a = exp(log_sup(thin.outer_lo, thin.outer_hi) + log_tail).hi();
    const double b = exp(log_sup(thin.inner_lo, thin.inner_hi) + log_tail).hi();
    return add_up(a, b);
}

std::optional<std::pair<ThinAnnulus, std::vector<double>>> choose_alias_annulus(const CircleMap& map, int K,
                                                                                std::size_t n,
                                                                                const GalerkinOptions& opts) {
    std::optional<std::pair<ThinAnnulus, std::vector<double>>> best;
    double best_worst = kInf;
    for (double tau = 4.0; tau >= 0x1p-12; tau *= 0.5) {
        const auto thin = certify_thin_annulus(map, tau, opts.alias_arcs);
        if (!thin) continue;
        std::vector<double> rows(static_cast<std::size_t>(2 * K + 1));
        double worst = 0;
        for (int k = -K; k <= K; ++k) {
            rows[static_cast<std::size_t>(k + K)] = row_alias(*thin, k, K, n);
            worst = std::max(worst, rows[static_cast<std::size_t>(k + K)]);
        }
        if (worst < best_worst) {
            best_worst = worst;
            best = std::make_pair(*thin, std::move(rows));
        }
        // Narrower annuli only help when the map is singular nearby, which
        // cannot matter once the tail is negligible.
        if (best_worst <= opts.alias_tolerance * 0x1p-30) break;
    }
    return best;
}

}  // namespace

double fft_relative_error(std::size_t n) {
    require(power_of_two(n), ErrorKind::Domain, "FFT size must be a power of two");
    return FftPlan(n).relative();
}

std::vector<Ball> validated_fft(std::span<const Ball> samples) {
    const std::size_t n = samples.size();
    require(power_of_two(n), ErrorKind::Domain, "validated_fft length must be a power of two");
    const FftPlan plan(n);
    std::vector<complex> a(n);
    double radius_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = samples[i].center();
        radius_sum = add_up(radius_sum, samples[i].radius());
    }
    const double r = plan.run(a, radius_sum);
    std::vector<Ball> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = Ball(a[i], r);
    return out;
}

double decay_envelope(const AnnulusCertificate& ann, int k, int j) {
    const Interval two_pi = Interval(2.0) * Interval::pi();
    const double jj = k > 0 ? j : (k < 0 ? -j : -std::abs(j));
    const Interval expo = two_pi * (Interval(ann.eta) * Interval(jj) - Interval(ann.rho) * Interval(std::abs(k)));
    return exp(expo).hi();
}

GalerkinOperator fourier_matrix(const CircleMap& map, const AnnulusCertificate& ann, int K, std::size_t fft_size,
                                const GalerkinOptions& opts) {
    require(ann.certified, ErrorKind::Domain, "fourier_matrix needs a certified annulus");
    require(ann.map_hash == map.hash(), ErrorKind::Domain, "annulus certificate belongs to another map");
    require(K >= 0, ErrorKind::Domain, "K must be nonnegative");
    const Eigen::Index n = 2 * K + 1;
    require(power_of_two(fft_size), ErrorKind::Domain, "fft_size must be a power of two");
    require(fft_size >= static_cast<std::size_t>(4 * n), ErrorKind::Domain, "fft_size must be at least 4(2K+1)");

    GalerkinOperator op;
    op.K = K;
    op.n = n;
    op.fft_size = fft_size;
    op.annulus = ann;
    op.map_hash = map.hash();

    auto alias = choose_alias_annulus(map, K, fft_size, opts);
    require(alias.has_value(), ErrorKind::AliasingTooLarge, "no thin annulus could be certified for aliasing bounds");
    op.alias_annulus = alias->first;
    op.aliasing_bound = std::move(alias->second);
    const double worst_alias = *std::max_element(op.aliasing_bound.begin(), op.aliasing_bound.end());
    if (!(worst_alias <= opts.alias_tolerance)) {
        std::ostringstream msg;
        msg << "aliasing bound " << worst_alias << " exceeds tolerance " << opts.alias_tolerance
            << "; increase fft_size";
        fail(ErrorKind::AliasingTooLarge, msg.str());
    }
    double alias_sq = 0;
    for (double a : op.aliasing_bound) alias_sq = add_up(alias_sq, mul_up(a, a));
    op.aliasing_norm_bound = mul_up(sqrt_up(static_cast<double>(n)), sqrt_up(alias_sq));

    const std::size_t N = fft_size;
    std::vector<Ball> forward(N), backward(N);
    constexpr std::size_t chunk = 4096;
    const std::size_t chunks = (N + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t c) {
        for (std::size_t m = c * chunk; m < std::min(N, (c + 1) * chunk); ++m) {
            const Ball z = unit_root(static_cast<long>(m), static_cast<long>(N));
            backward[m] = map.eval(z);  // T, used for rows k < 0
            forward[m] = inv(backward[m]);  // 1/T, used for rows k > 0
        }
    });

    const FftPlan plan(N);
    CMatrix centers = CMatrix::Zero(n, n);
    RMatrix radii = RMatrix::Zero(n, n);
    std::vector<complex> work(N);

    auto emit_row = [&](int k, const std::vector<Ball>& g) {
        double radius_sum = 0.0;
        for (std::size_t m = 0; m < N; ++m) {
            work[m] = g[m].center();
            radius_sum = add_up(radius_sum, g[m].radius());
        }
        const double bin_radius = plan.run(work, radius_sum);
        const auto row = static_cast<Eigen::Index>(k + K);
        const double scale = static_cast<double>(N);
        const double base = add_up(div_up(bin_radius, scale), op.aliasing_bound[static_cast<std::size_t>(row)]);
        for (int j = -K; j <= K; ++j) {
            const std::size_t q = static_cast<std::size_t>((static_cast<long long>(N) - j) % static_cast<long long>(N));
            complex c = work[q] / scale;
            double r = base;
            const double env = decay_envelope(ann, k, j);
            if (sub_down(abs_down(c), r) > env) {
                std::ostringstream msg;
                msg << "entry (" << k << ", " << j << ") enclosure " << to_string(Ball(c, r))
                    << " is disjoint from the decay envelope " << env;
                fail(ErrorKind::DecayViolation, msg.str());
            }
            if (add_up(abs_up(c), r) > mul_down(env, 1 + opts.decay_slack)) {
                c = complex(0, 0);
                r = env;
                ++op.envelope_tightened;
            }
            centers(row, j + K) = c;
            radii(row, j + K) = r;
        }
    };

    std::vector<Ball> g(N, Ball(1.0));
    emit_row(0, g);
    for (int sign : {1, -1}) {
        std::fill(g.begin(), g.end(), Ball(1.0));
        const std::vector<Ball>& factor = sign > 0 ? forward : backward;
        for (int k = 1; k <= K; ++k) {
            parallel_for(chunks, [&](std::size_t c) {
                for (std::size_t m = c * chunk; m < std::min(N, (c + 1) * chunk); ++m) g[m] = g[m] * factor[m];
            });
            emit_row(sign * k, g);
        }
    }
    op.matrix = BallMatrix(std::move(centers), std::move(radii));
    return op;
}

void write_galerkin(std::ostream& os, const GalerkinOperator& op) {
    char buf[256];
    os << "# rescert-galerkin 1\n";
    std::snprintf(buf, sizeof buf, "# map_hash = %016llx\n", static_cast<unsigned long long>(op.map_hash));
    os << buf;
    os << "# K = " << op.K << "\n# fft_size = " << op.fft_size << "\n";
    std::snprintf(buf, sizeof buf, "# eta = %a\n# alpha = %a\n# rho = %a\n", op.annulus.eta, op.annulus.alpha,
                  op.annulus.rho);
    os << buf;
    double worst = 0;
    for (double a : op.aliasing_bound) worst = std::max(worst, a);
    std::snprintf(buf, sizeof buf, "# aliasing_max = %a\n", worst);
    os << buf << "# envelope_tightened = " << op.envelope_tightened << "\n";
    write_ball_matrix(os, op.matrix);
}

std::pair<GalerkinHeader, BallMatrix> read_galerkin(std::istream& is) {
    GalerkinHeader h;
    std::string line;
    require(static_cast<bool>(std::getline(is, line)) && line == "# rescert-galerkin 1", ErrorKind::Io,
            "not a Galerkin dump");
    while (is.peek() == '#') {
        std::getline(is, line);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(2, eq - 3);
        const std::string value = line.substr(eq + 2);
        if (key == "map_hash") h.map_hash = std::stoull(value, nullptr, 16);
        else if (key == "K") h.K = std::stoi(value);
        else if (key == "fft_size") h.fft_size = std::stoull(value);
        else if (key == "eta") h.eta = std::strtod(value.c_str(), nullptr);
        else if (key == "alpha") h.alpha = std::strtod(value.c_str(), nullptr);
        else if (key == "rho") h.rho = std::strtod(value.c_str(), nullptr);
        else if (key == "aliasing_max") h.aliasing_max = std::strtod(value.c_str(), nullptr);
        else if (key == "envelope_tightened") h.envelope_tightened = std::stoull(value);
    }
    BallMatrix m = read_ball_matrix(is);
    require(m.rows() == 2 * h.K + 1 && m.cols() == m.rows(), ErrorKind::Io, "Galerkin dump has wrong dimensions");
    return {h, std::move(m)};
}

}  // namespace rescert
