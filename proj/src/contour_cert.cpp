#include "rescert/contour_cert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rescert/parallel.hpp"
#include "rescert/svd_cert.hpp"

namespace rescert {

using namespace rnd;

double ArcCertificate::turn_begin() const { return std::ldexp(static_cast<double>(index), -level); }
double ArcCertificate::turn_end() const { return std::ldexp(static_cast<double>(index + 1), -level); }

ContourCache::Key ContourCache::key(std::uint64_t matrix, complex anchor) {
    return {matrix, std::bit_cast<std::uint64_t>(anchor.real()), std::bit_cast<std::uint64_t>(anchor.imag())};
}

std::optional<double> ContourCache::find(std::uint64_t matrix, complex anchor) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key(matrix, anchor));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ContourCache::store(std::uint64_t matrix, complex anchor, double theta) {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_[key(matrix, anchor)] = theta;
}

std::size_t ContourCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

namespace {

struct ArcId {
    int level;
    std::int64_t index;
};

struct Anchor {
    complex point;
    double reach;  // every point of the arc is within reach of the anchor
};

// The anchor is the floating center of an enclosure of the exact midpoint;
// the midpoint is within R * pi * 2^-level of every arc point.
Anchor anchor_of(const Disk& d, ArcId a) {
    const Ball mid = Ball(d.center) + Ball(d.radius) * unit_root(2 * a.index + 1, std::int64_t{2} << a.level);
    const double half = (Interval(d.radius) * Interval::pi() * Interval(std::ldexp(1.0, -a.level))).hi();
    return {mid.center(), add_up(half, mid.radius())};
}

struct Evaluation {
    Anchor anchor;
    double theta = 0;  // <= 0 when no positive bound is available
    bool cached = false;
};

}  // namespace

ContourCertificate certify_circle(const BallMatrix& T, const Disk& disk, double target, const ContourOptions& opts) {
    require(T.rows() == T.cols(), ErrorKind::ShapeMismatch, "certify_circle needs a square matrix");
    require(target > 0, ErrorKind::Domain, "certify_circle needs a positive target");
    require(disk.radius > 0 && std::isfinite(disk.radius), ErrorKind::Domain, "disk radius must be positive");
    require(opts.initial_level >= 0 && opts.initial_level <= opts.max_level && opts.max_level <= 60,
            ErrorKind::Config, "contour levels out of range");

    const std::uint64_t matrix_hash = T.hash();
    ContourCertificate out;
    out.disk = disk;
    out.target = target;

    std::vector<ArcId> pending;
    for (std::int64_t j = 0; j < (std::int64_t{1} << opts.initial_level); ++j) pending.push_back({opts.initial_level, j});

    while (!pending.empty()) {
        if (out.svd_calls + pending.size() > opts.max_arcs)
            fail(ErrorKind::BudgetExceeded, "contour arc budget exhausted");
        std::vector<Evaluation> eval(pending.size());
        parallel_for(pending.size(), [&](std::size_t i) {
            Evaluation& e = eval[i];
            e.anchor = anchor_of(disk, pending[i]);
            if (opts.cache) {
                if (auto hit = opts.cache->find(matrix_hash, e.anchor.point)) {
                    e.theta = *hit;
                    e.cached = true;
                    return;
                }
            }
            try {
                e.theta = certify_svd(shift_minus(Ball(e.anchor.point), T)).theta;
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::OrthogonalityTooWeak) throw;
                e.theta = 0;
            }
            if (opts.cache) opts.cache->store(matrix_hash, e.anchor.point, e.theta);
        });

        std::vector<ArcId> next;
        const ArcCertificate* worst = nullptr;
        const std::size_t first_new = out.arcs.size();
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const ArcId a = pending[i];
            const Evaluation& e = eval[i];
            if (e.cached) ++out.cache_hits; else ++out.svd_calls;
            const bool accepted = e.theta > 0 && e.anchor.reach <= 0.5 * e.theta;
            if (opts.log) {
                char line[192];
                std::snprintf(line, sizeof line, "arc level=%d index=%lld anchor=(%.17g,%.17g) sigma_lower=%.6e %s\n",
                              a.level, static_cast<long long>(a.index), e.anchor.point.real(), e.anchor.point.imag(),
                              e.theta, accepted ? "accept" : "split");
                *opts.log << line;
            }
            if (accepted) {
                out.arcs.push_back({a.level, a.index, e.anchor.point, e.theta, div_up(2.0, e.theta)});
                continue;
            }
            // Jump straight to the level whose reach fits the anchor's bound.
            int bits = 1;
            if (e.theta > 0) {
                const double need = e.anchor.reach / (0.5 * e.theta);
                bits = std::clamp(static_cast<int>(std::ceil(std::log2(need))), 1, opts.max_split_bits);
            }
            if (a.level + bits > opts.max_level) {
                if (a.level >= opts.max_level)
                    fail(ErrorKind::UncertifiableArc, "no positive singular value bound on a minimal arc; move the disk");
                bits = opts.max_level - a.level;
            }
            const std::int64_t children = std::int64_t{1} << bits;
            for (std::int64_t c = 0; c < children; ++c) next.push_back({a.level + bits, a.index * children + c});
        }
        for (std::size_t i = first_new; i < out.arcs.size(); ++i) {
            if (!worst || out.arcs[i].local_bound > worst->local_bound) worst = &out.arcs[i];
        }
        if (worst && worst->local_bound > target) {
            char msg[160];
            std::snprintf(msg, sizeof msg, "resolvent bound %.6e at anchor (%.12g,%.12g) exceeds target %.6e",
                          worst->local_bound, worst->anchor.real(), worst->anchor.imag(), target);
            fail(ErrorKind::TargetExceeded, msg);
        }
        pending = std::move(next);
    }

    std::sort(out.arcs.begin(), out.arcs.end(),
              [](const ArcCertificate& x, const ArcCertificate& y) { return x.turn_begin() < y.turn_begin(); });
    for (const auto& arc : out.arcs) out.sup_bound = std::max(out.sup_bound, arc.local_bound);
    return out;
}

ContourCertificate certify_circle(const CertifiedSchur& cs, const Disk& disk, double target,
                                  const ContourOptions& opts) {
    return certify_circle(cs.triangular(), disk, target, opts);
}

void check_disjoint(const std::vector<Disk>& disks) {
    for (std::size_t i = 0; i < disks.size(); ++i) {
        for (std::size_t j = i + 1; j < disks.size(); ++j) {
            const double gap = (Ball(disks[i].center) - Ball(disks[j].center)).abs_lower();
            if (!(gap > add_up(disks[i].radius, disks[j].radius)))
                fail(ErrorKind::DisksOverlap,
                     "disks " + std::to_string(i) + " and " + std::to_string(j) + " are not disjoint");
        }
    }
}

namespace {

// +1 strictly inside, -1 strictly outside, 0 undecided.
int side(complex z, const Disk& d) {
    const Interval dist = (Ball(z) - Ball(d.center)).abs();
    if (dist.hi() < d.radius) return 1;
    if (dist.lo() > d.radius) return -1;
    return 0;
}

}  // namespace

ExclosureCertificate exclosure(const CertifiedSchur& cs, const std::vector<Disk>& disks, double delta,
                               const std::vector<ContourCertificate>& contours, double norm_factor) {
    require(disks.size() == contours.size(), ErrorKind::ShapeMismatch, "one contour per disk required");
    require(delta > 0 && norm_factor >= 1, ErrorKind::Domain, "exclosure needs delta > 0 and norm_factor >= 1");
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const Disk& a = disks[i];
        const Disk& b = contours[i].disk;
        require(a.center == b.center && a.radius == b.radius, ErrorKind::ShapeMismatch,
                "contour " + std::to_string(i) + " belongs to a different disk");
    }
    check_disjoint(disks);

    ExclosureCertificate out;
    out.delta = delta;
    out.norm_factor = norm_factor;
    for (Eigen::Index k = 0; k < cs.T.rows(); ++k) {
        int owner = -1;
        for (std::size_t i = 0; i < disks.size() && owner < 0; ++i)
            if (side(cs.T(k, k), disks[i]) == 1) owner = static_cast<int>(i);
        if (owner < 0)
            fail(ErrorKind::DiagonalOutsideAllDisks, "diagonal entry " + std::to_string(k) + " is outside all disks");
        out.owner.push_back(owner);
    }

    double sup = 0;
    for (const auto& c : contours) sup = std::max(sup, c.sup_bound);
    require(sup > 0, ErrorKind::Domain, "contour bounds must be positive");
    out.delta0 = div_down(1.0, sup);
    out.gate_delta = pseudospectrum_gate(cs, out.delta0);

    const double limit = div_down(1.0, delta);
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const double far = add_up(abs_up(disks[i].center), disks[i].radius);
        const double t = mul_up(resolvent_transfer(cs, complex(far, 0.0), contours[i].sup_bound), norm_factor);
        out.transferred.push_back(t);
        if (!(t <= limit))
            fail(ErrorKind::BoundExceedsBudget, "boundary bound of disk " + std::to_string(i) + " exceeds 1/delta");
    }
    return out;
}

int multiplicity_count(const CertifiedSchur& cs, const Disk& disk) {
    int count = 0;
    for (Eigen::Index k = 0; k < cs.T.rows(); ++k) {
        const int s = side(cs.T(k, k), disk);
        if (s == 0)
            fail(ErrorKind::AmbiguousMultiplicity,
                 "diagonal entry " + std::to_string(k) + " is within rounding distance of the boundary");
        if (s == 1) ++count;
    }
    return count;
}

}  // namespace rescert
