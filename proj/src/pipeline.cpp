#include "rescert/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <tuple>
#include <ostream>

#include "rescert/bounds.hpp"
#include "rescert/parallel.hpp"
#include "rescert/schur_cert.hpp"

namespace rescert {

using namespace rnd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs one stage, recording its timing; on failure fills the diagnostic fields
// and returns false.
template <class Body>
bool stage(EnclosureCertificate& cert, const RunOptions& opts, const std::string& name, Body&& body) {
    const auto t0 = Clock::now();
    if (opts.log) *opts.log << "[stage] " << name << " ..." << std::endl;
    try {
        body();
    } catch (const Error& e) {
        cert.failed_stage = name;
        cert.failure_kind = to_string(e.kind());
        cert.failure_message = e.what();
    } catch (const std::exception& e) {
        cert.failed_stage = name;
        cert.failure_kind = "Internal";
        cert.failure_message = e.what();
    }
    const double dt = seconds_since(t0);
    cert.timings.push_back({name, dt});
    if (opts.log) {
        *opts.log << "[stage] " << name << (cert.failed_stage.empty() ? " ok" : " FAILED: " + cert.failure_message)
                  << " (" << dt << " s)" << std::endl;
    }
    return cert.failed_stage.empty();
}

double max_radius(const BallMatrix& m) { return m.radii().size() ? m.radii().maxCoeff() : 0.0; }

}  // namespace

bool operator==(const EnclosureCertificate& a, const EnclosureCertificate& b) {
    auto strip = [](EnclosureCertificate c) {
        c.timings.clear();
        c.wall_seconds = 0;
        return c;
    };
    const EnclosureCertificate x = strip(a), y = strip(b);
    auto fields = [](const EnclosureCertificate& c) {
        return std::tie(c.schema_version, c.verdict, c.failed_stage, c.failure_kind, c.failure_message, c.map_kind,
                        c.map_description, c.map_hash, c.config_hash, c.preset, c.eta, c.alpha, c.rho,
                        c.annulus_arcs, c.outer_image_lower, c.inner_image_upper, c.domain_method, c.K, c.fft_size,
                        c.matrix_hash, c.aliasing_max, c.max_radius, c.envelope_tightened, c.exclusion_radius,
                        c.op_norm, c.disc_error, c.ratio_r, c.delta, c.delta_inv, c.norm_factor, c.epsilon,
                        c.residual_bound, c.unitarity_bound, c.C0, c.C0_clamped, c.gate_threshold, c.contour_target,
                        c.delta0, c.gate_delta, c.disks, c.svd_calls);
    };
    return fields(x) == fields(y);
}

EnclosureCertificate run_certification(const RunConfig& config, const RunOptions& opts) {
    require(config.map != nullptr, ErrorKind::Config, "config has no map");
    const auto t_start = Clock::now();
    if (config.workers > 0) set_workers(config.workers);

    EnclosureCertificate cert;
    cert.map_kind = config.map_kind;
    cert.map_description = config.map->describe();
    cert.map_hash = config.map->hash();
    cert.config_hash = config.config_hash;
    cert.preset = config.preset;
    cert.K = config.K;
    cert.fft_size = config.fft_size;
    cert.exclusion_radius = config.exclusion_radius;
    for (const auto& d : config.disks) cert.disks.push_back({d.name, d.disk});

    const std::filesystem::path out_dir = config.out_dir;
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    const std::filesystem::path dump_path = out_dir / "galerkin.txt";

    auto finish = [&](bool proven) {
        cert.verdict = proven ? "proven" : "failed";
        cert.wall_seconds = seconds_since(t_start);
        return cert;
    };
    auto stop_here = [&](const char* name) { return opts.stop_after == name; };
    auto partial = [&] {
        cert.verdict = "partial";
        cert.wall_seconds = seconds_since(t_start);
        return cert;
    };

    AnnulusCertificate ann;
    if (!stage(cert, opts, "annulus", [&] {
            ann = with_alpha(certify_annulus(*config.map, config.eta, config.rho, config.annulus), config.alpha);
            cert.eta = ann.eta;
            cert.alpha = ann.alpha;
            cert.rho = ann.rho;
            cert.annulus_arcs = ann.arcs;
            cert.outer_image_lower = ann.outer_image_lower;
            cert.inner_image_upper = ann.inner_image_upper;
            cert.domain_method = ann.domain_method;
        }))
        return finish(false);
    if (stop_here("annulus")) return partial();

    BallMatrix matrix;
    if (!stage(cert, opts, "galerkin", [&] {
            if (opts.resume && std::filesystem::exists(dump_path)) {
                std::ifstream in(dump_path);
                auto [header, m] = read_galerkin(in);
                require(header.map_hash == cert.map_hash && header.K == config.K &&
                            header.fft_size == config.fft_size && header.eta == ann.eta && header.rho == ann.rho,
                        ErrorKind::Io, "archived Galerkin dump does not match the config");
                matrix = std::move(m);
                cert.aliasing_max = header.aliasing_max;
                cert.envelope_tightened = header.envelope_tightened;
            } else {
                GalerkinOperator op = fourier_matrix(*config.map, ann, config.K, config.fft_size, config.galerkin);
                for (double a : op.aliasing_bound) cert.aliasing_max = std::max(cert.aliasing_max, a);
                cert.envelope_tightened = op.envelope_tightened;
                if (!out_dir.empty()) {
                    std::ofstream out(dump_path);
                    write_galerkin(out, op);
                    require(static_cast<bool>(out), ErrorKind::Io, "failed writing " + dump_path.string());
                }
                matrix = std::move(op.matrix);
            }
            cert.matrix_hash = matrix.hash();
            cert.max_radius = max_radius(matrix);
        }))
        return finish(false);
    if (stop_here("galerkin")) return partial();

    HouseholderBudget budget;
    if (!stage(cert, opts, "bounds", [&] {
            cert.op_norm = op_norm_bound(ann);
            cert.disc_error = discretization_error(ann, config.K);
            cert.ratio_r = eigenratio_r(ann, config.exclusion_radius);
            cert.norm_factor = sqrt_up(static_cast<double>(matrix.rows()));
            budget = delta_budget(cert.ratio_r, cert.disc_error, config.exclusion_radius);
            cert.delta = budget.delta;
            cert.delta_inv = budget.delta_inv;
        }))
        return finish(false);

    const std::vector<Disk> disks = config.disk_list();
    if (!stage(cert, opts, "disks", [&] { check_disjoint(disks); })) return finish(false);

    CertifiedSchur cs;
    if (!stage(cert, opts, "schur", [&] {
            cs = certify_schur(matrix);
            cert.epsilon = cs.epsilon;
            cert.residual_bound = cs.residual_bound;
            cert.unitarity_bound = cs.unitarity_bound;
            cert.C0 = cs.C0;
            cert.C0_clamped = cs.C0_clamped;
            cert.gate_threshold = gate_threshold(cs);
        }))
        return finish(false);

    if (!stage(cert, opts, "gate", [&] {
            // Smallest delta0 whose usable radius still covers the budget.
            const Interval g = sqr(Interval(1.0) + Interval(cs.epsilon));
            const double needed = up_n((Interval(4.0) * g * Interval(budget.delta)).hi(), 4);
            const double delta0 = std::max(cert.gate_threshold, needed);
            const double usable = pseudospectrum_gate(cs, delta0);
            if (!(usable >= budget.delta)) fail(ErrorKind::GateFailed, "gate radius below the budget delta");
            const double by_gate = div_down(1.0, delta0);
            const double by_transfer =
                mul_down(div_down(budget.delta_inv, mul_up(cert.norm_factor, mul_up(2.0, g.hi()))), 1.0 - 0x1p-10);
            cert.contour_target = std::min(by_gate, by_transfer);
            if (!(cert.contour_target > 0)) fail(ErrorKind::BudgetUnusable, "contour target is not positive");
        }))
        return finish(false);

    std::vector<ContourCertificate> contours;
    if (!stage(cert, opts, "contour", [&] {
            std::ofstream arc_log;
            ContourOptions copts;
            copts.max_arcs = config.contour_max_arcs;
            copts.initial_level = config.contour_initial_level;
            if (opts.arc_log && !out_dir.empty()) {
                arc_log.open(out_dir / "arcs.log");
                copts.log = &arc_log;
            }
            const BallMatrix T = cs.triangular();
            for (std::size_t i = 0; i < disks.size(); ++i) {
                if (arc_log.is_open()) arc_log << "# disk " << config.disks[i].name << '\n';
                ContourCertificate c = certify_circle(T, disks[i], cert.contour_target, copts);
                cert.disks[i].sup_bound = c.sup_bound;
                cert.disks[i].arcs = c.arcs.size();
                cert.disks[i].svd_calls = c.svd_calls;
                cert.svd_calls += c.svd_calls;
                if (opts.log)
                    *opts.log << "  disk " << config.disks[i].name << ": sup " << c.sup_bound << " over "
                              << c.arcs.size() << " arcs" << std::endl;
                contours.push_back(std::move(c));
            }
        }))
        return finish(false);

    if (!stage(cert, opts, "exclosure", [&] {
            ExclosureCertificate ex = exclosure(cs, disks, budget.delta, contours, cert.norm_factor);
            cert.delta0 = ex.delta0;
            cert.gate_delta = ex.gate_delta;
            for (std::size_t i = 0; i < disks.size(); ++i) cert.disks[i].transferred = ex.transferred[i];
            if (!(ex.gate_delta >= budget.delta))
                fail(ErrorKind::GateFailed, "usable gate radius is below the budget delta");
        }))
        return finish(false);

    if (!stage(cert, opts, "multiplicity", [&] {
            for (std::size_t i = 0; i < disks.size(); ++i) cert.disks[i].multiplicity = multiplicity_count(cs, disks[i]);
        }))
        return finish(false);

    return finish(true);
}

}  // namespace rescert
