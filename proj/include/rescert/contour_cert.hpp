#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "rescert/ball_matrix.hpp"
#include "rescert/schur_cert.hpp"

namespace rescert {

// Closed disk in the spectral plane; the boundary circle is exact in the
// floating center and radius.
struct Disk {
    complex center;
    double radius = 0;

    friend bool operator==(const Disk&, const Disk&) = default;
};

// Arc [index, index + 1] * 2^-level of a full turn, certified from one
// singular value bound at the floating anchor near its midpoint.
struct ArcCertificate {
    int level = 0;
    std::int64_t index = 0;
    complex anchor;
    double sigma_min_lower = 0;
    double local_bound = 0;  // 2 / sigma_min_lower, rounded up

    [[nodiscard]] double turn_begin() const;
    [[nodiscard]] double turn_end() const;
};

struct ContourCertificate {
    Disk disk;
    double target = 0;
    double sup_bound = 0;
    std::vector<ArcCertificate> arcs;  // sorted by turn_begin
    std::size_t svd_calls = 0;
    std::size_t cache_hits = 0;
};

// Singular value bounds keyed by (matrix hash, anchor bits). Thread-safe.
class ContourCache {
public:
    std::optional<double> find(std::uint64_t matrix, complex anchor) const;
    void store(std::uint64_t matrix, complex anchor, double theta);
    [[nodiscard]] std::size_t size() const;

private:
    using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
    static Key key(std::uint64_t matrix, complex anchor);
    mutable std::mutex mutex_;
    std::map<Key, double> entries_;
};

struct ContourOptions {
    std::size_t max_arcs = std::size_t{1} << 20;  // budget on singular value certifications
    int initial_level = 3;
    int max_level = 40;      // arcs narrower than 2^-40 turns are not attempted
    int max_split_bits = 6;  // a rejected arc splits into at most 2^6 children
    ContourCache* cache = nullptr;
    std::ostream* log = nullptr;  // one line per evaluated arc
};

// Certified sup of ||(z - T')^{-1}||_2 over the boundary of the disk for every
// member T' of the ball matrix. Fails with TargetExceeded as soon as some
// accepted arc has a local bound above target.
ContourCertificate certify_circle(const BallMatrix& T, const Disk& disk, double target,
                                  const ContourOptions& opts = {});
ContourCertificate certify_circle(const CertifiedSchur& cs, const Disk& disk, double target,
                                  const ContourOptions& opts = {});

struct ExclosureCertificate {
    double delta = 0;
    double norm_factor = 1;
    double delta0 = 0;      // 1 / max sup bound, rounded down
    double gate_delta = 0;  // pseudospectrum_gate(delta0)
    std::vector<double> transferred;  // per disk, resolvent bound for members
    std::vector<int> owner;           // per diagonal entry of T, index of its disk
};

// Checks that the disks are pairwise disjoint, that every diagonal entry of T
// lies inside one of them, that the gate accepts 1 / max sup bound, and that
// norm_factor times each transferred boundary bound is <= 1 / delta. Then
// ||(z - M')^{-1}|| <= 1 / delta (in the norm scaled by norm_factor) outside
// the disks for every member M'.
ExclosureCertificate exclosure(const CertifiedSchur& cs, const std::vector<Disk>& disks, double delta,
                               const std::vector<ContourCertificate>& contours, double norm_factor = 1.0);

// Number of diagonal entries of T strictly inside the disk.
int multiplicity_count(const CertifiedSchur& cs, const Disk& disk);

// Throws DisksOverlap unless |c_i - c_j| > r_i + r_j for all pairs.
void check_disjoint(const std::vector<Disk>& disks);

}  // namespace rescert
