#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "rescert/bounds.hpp"
#include "rescert/parallel.hpp"
#include "rescert/pipeline.hpp"
#include "rescert/schur_cert.hpp"

namespace {

using namespace rescert;

constexpr int kExitProven = 0;
constexpr int kExitFailed = 2;
constexpr int kExitConfig = 3;

struct Common {
    std::string config;
    std::string preset;
    std::string out;
    int workers = 0;
    bool resume = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "run configuration (INI)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--preset", c.preset, "preset section to apply")->check(CLI::IsMember({"desk", "full", "long"}));
    cmd->add_option("--out", c.out, "output directory (overrides run.out)");
    cmd->add_option("--workers", c.workers, "worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--resume", c.resume, "reuse the archived Galerkin matrix in the output directory");
}

RunConfig load(const Common& c) {
    RunConfig cfg = load_config(c.config, c.preset);
    if (!c.out.empty()) cfg.out_dir = c.out;
    if (c.workers > 0) cfg.workers = c.workers;
    if (cfg.workers > 0) set_workers(cfg.workers);
    return cfg;
}

int verdict_code(const EnclosureCertificate& cert) {
    if (cert.verdict == "proven" || cert.verdict == "partial") return cert.failed_stage.empty() ? kExitProven : kExitFailed;
    return kExitFailed;
}

void write_outputs(const EnclosureCertificate& cert, const std::string& dir) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    emit_report(cert, ReportFormat::Json, std::filesystem::path(dir) / "certificate.json");
    emit_report(cert, ReportFormat::Text, std::filesystem::path(dir) / "report.txt");
    emit_plots(cert, dir);
}

int run_stage(const Common& c, const std::string& stop_after) {
    RunConfig cfg = load(c);
    RunOptions opts;
    opts.resume = c.resume;
    opts.log = &std::cerr;
    opts.stop_after = stop_after;
    EnclosureCertificate cert = run_certification(cfg, opts);
    write_outputs(cert, cfg.out_dir);
    emit_report(cert, ReportFormat::Text, std::cout);
    return verdict_code(cert);
}

int search(const Common& c) {
    RunConfig cfg = load(c);
    const ParameterSuggestion s = suggest_parameters(*cfg.map, cfg.K, cfg.exclusion_radius);
    std::printf("suggested (nonrigorous): eta = %.17g  alpha = %.17g  rho = %.17g  predicted 1/delta ~ %.3e\n", s.eta,
                s.alpha, s.rho, s.predicted_delta_inv);
    return kExitProven;
}

int report(const std::string& input, const std::string& format) {
    std::ifstream in(input);
    if (!in) fail(ErrorKind::Io, "cannot open " + input);
    std::stringstream ss;
    ss << in.rdbuf();
    const EnclosureCertificate cert = from_json(ss.str());
    emit_report(cert, format == "json" ? ReportFormat::Json : ReportFormat::Text, std::cout);
    return verdict_code(cert);
}

struct HeatmapArgs {
    std::string matrix;
    double re_min = -0.6, re_max = 1.2, im_min = -0.6, im_max = 1.2;
    int grid = 100;
};

int heatmap(const Common& c, const HeatmapArgs& h) {
    RunConfig cfg = load(c);
    std::filesystem::path matrix_path = h.matrix;
    if (matrix_path.empty()) matrix_path = std::filesystem::path(cfg.out_dir) / "galerkin.txt";
    BallMatrix m;
    if (std::filesystem::exists(matrix_path)) {
        std::ifstream in(matrix_path);
        m = read_galerkin(in).second;
    } else {
        std::cerr << "no archived matrix at " << matrix_path << ", computing it\n";
        const AnnulusCertificate ann =
            with_alpha(certify_annulus(*cfg.map, cfg.eta, cfg.rho, cfg.annulus), cfg.alpha);
        m = fourier_matrix(*cfg.map, ann, cfg.K, cfg.fft_size, cfg.galerkin).matrix;
    }
    const Heatmap map = resolvent_heatmap(m.centers(), h.re_min, h.re_max, h.im_min, h.im_max, h.grid, h.grid);
    const std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
    write_heatmap(map, cfg.disk_list(), dir);
    std::cout << "NONRIGOROUS heatmap written to " << dir << "/heatmap.{csv,svg}\n";
    return kExitProven;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified resonance enclosures for analytic expanding circle maps"};
    app.require_subcommand(1);

    Common map_c, disc_c, spec_c, heat_c;
    bool do_search = false;
    auto* certify_map = app.add_subcommand("certify-map", "certify the analyticity annulus of the map");
    add_common(certify_map, map_c);
    certify_map->add_flag("--search", do_search, "print nonrigorous parameter suggestions instead");

    auto* discretize = app.add_subcommand("discretize", "certify the annulus and compute the Galerkin ball matrix");
    add_common(discretize, disc_c);

    auto* certify_spectrum = app.add_subcommand("certify-spectrum", "run the full certification pipeline");
    add_common(certify_spectrum, spec_c);

    std::string input, format = "text";
    auto* report_cmd = app.add_subcommand("report", "render a stored certificate");
    report_cmd->add_option("--input", input, "certificate.json")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    HeatmapArgs hargs;
    auto* heat = app.add_subcommand("heatmap", "NONRIGOROUS resolvent norm heatmap");
    add_common(heat, heat_c);
    heat->add_option("--matrix", hargs.matrix, "archived Galerkin dump");
    heat->add_option("--re-min", hargs.re_min);
    heat->add_option("--re-max", hargs.re_max);
    heat->add_option("--im-min", hargs.im_min);
    heat->add_option("--im-max", hargs.im_max);
    heat->add_option("--grid", hargs.grid, "points per axis")->check(CLI::Range(2, 2000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (certify_map->parsed()) return do_search ? search(map_c) : run_stage(map_c, "annulus");
        if (discretize->parsed()) return run_stage(disc_c, "galerkin");
        if (certify_spectrum->parsed()) return run_stage(spec_c, "");
        if (report_cmd->parsed()) return report(input, format);
        if (heat->parsed()) return heatmap(heat_c, hargs);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Config ? kExitConfig : kExitFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitConfig;
}
