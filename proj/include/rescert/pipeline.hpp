#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rescert/config.hpp"

namespace rescert {

struct DiskResult {
    std::string name;
    Disk disk;
    double sup_bound = 0;    // sup of the triangular factor's resolvent on the circle, up
    double transferred = 0;  // bound for every member in the scaled norm, up
    int multiplicity = -1;   // diagonal entries of T inside; -1 when not reached
    std::size_t arcs = 0;
    std::size_t svd_calls = 0;

    friend bool operator==(const DiskResult&, const DiskResult&) = default;
};

struct StageTiming {
    std::string stage;
    double seconds = 0;

    friend bool operator==(const StageTiming&, const StageTiming&) = default;
};

struct EnclosureCertificate {
    int schema_version = 1;
    std::string verdict = "failed";  // "proven", "failed", or "partial" when stopped early
    std::string failed_stage;
    std::string failure_kind;
    std::string failure_message;

    std::string map_kind;
    std::string map_description;
    std::uint64_t map_hash = 0;
    std::uint64_t config_hash = 0;
    std::string preset;

    // Annulus.
    double eta = 0, alpha = 0, rho = 0;
    std::size_t annulus_arcs = 0;
    double outer_image_lower = 0;
    double inner_image_upper = 0;
    std::string domain_method;

    // Galerkin matrix.
    int K = 0;
    std::size_t fft_size = 0;
    std::uint64_t matrix_hash = 0;
    double aliasing_max = 0;
    double max_radius = 0;
    std::size_t envelope_tightened = 0;

    // Functional-analytic constants.
    double exclusion_radius = 0;
    double op_norm = 0;          // B, up
    double disc_error = 0;       // Delta, up
    double ratio_r = 0;          // r, up
    double delta = 0;            // up
    double delta_inv = 0;        // down
    double norm_factor = 0;      // sqrt(2K+1), up

    // Schur certificate and gate.
    double epsilon = 0;
    double residual_bound = 0;
    double unitarity_bound = 0;
    double C0 = 0;
    bool C0_clamped = false;
    double gate_threshold = 0;   // up
    double contour_target = 0;   // down
    double delta0 = 0;           // down
    double gate_delta = 0;       // down

    std::vector<DiskResult> disks;
    std::size_t svd_calls = 0;
    std::vector<StageTiming> timings;  // excluded from equality
    double wall_seconds = 0;           // excluded from equality

    [[nodiscard]] bool proven() const { return verdict == "proven"; }
    // Equality ignores the timing fields.
    friend bool operator==(const EnclosureCertificate& a, const EnclosureCertificate& b);
};

struct RunOptions {
    bool resume = false;               // reuse an archived Galerkin dump from out_dir
    std::ostream* log = nullptr;       // stage progress
    bool arc_log = true;               // write arcs.log into out_dir
    // Stop after this stage (annulus, galerkin, bounds, schur, ...); empty runs all.
    std::string stop_after;
};

EnclosureCertificate run_certification(const RunConfig& config, const RunOptions& options = {});

enum class ReportFormat { Json, Text };

// Versioned JSON: every numeric value carries its rounding direction.
std::string to_json(const EnclosureCertificate& cert);
EnclosureCertificate from_json(const std::string& text);
void emit_report(const EnclosureCertificate& cert, ReportFormat format, std::ostream& os);
void emit_report(const EnclosureCertificate& cert, ReportFormat format, const std::filesystem::path& path);

struct PlotOptions {
    bool svg = true;
};

// Writes disks.csv (one row per disk) and optionally disks.svg into dir.
void emit_plots(const EnclosureCertificate& cert, const std::filesystem::path& dir, const PlotOptions& options = {});

// NONRIGOROUS: log10 of 1 / sigma_min(z - A) on a grid, via floating SVD.
struct Heatmap {
    double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
    int nx = 0, ny = 0;
    std::vector<double> log10_resolvent;  // row-major, ny rows from im_max down
};

Heatmap resolvent_heatmap(const CMatrix& A, double re_min, double re_max, double im_min, double im_max, int nx,
                          int ny);
void write_heatmap(const Heatmap& h, const std::vector<Disk>& disks, const std::filesystem::path& dir);

}  // namespace rescert
