#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rescert/parallel.hpp"
#include "rescert/pipeline.hpp"

namespace rescert {

namespace {

using json = nlohmann::ordered_json;

json num(double v, const char* dir) { return json{{"value", v}, {"dir", dir}}; }

double get_num(const json& j) {
    if (j.is_object()) return j.at("value").get<double>();
    return j.get<double>();
}

std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t parse_hex64(const json& j) { return std::stoull(j.get<std::string>(), nullptr, 16); }

}  // namespace

std::string to_json(const EnclosureCertificate& c) {
    json j;
    j["schema"] = "rescert-enclosure";
    j["schema_version"] = c.schema_version;
    j["verdict"] = c.verdict;
    j["failure"] = c.failed_stage.empty()
                       ? json(nullptr)
                       : json{{"stage", c.failed_stage}, {"kind", c.failure_kind}, {"message", c.failure_message}};
    j["map"] = {{"kind", c.map_kind}, {"description", c.map_description}, {"hash", hex64(c.map_hash)}};
    j["config"] = {{"hash", hex64(c.config_hash)}, {"preset", c.preset}};
    j["annulus"] = {{"eta", num(c.eta, "exact")},
                    {"alpha", num(c.alpha, "exact")},
                    {"rho", num(c.rho, "exact")},
                    {"arcs", c.annulus_arcs},
                    {"outer_image_lower", num(c.outer_image_lower, "down")},
                    {"inner_image_upper", num(c.inner_image_upper, "up")},
                    {"domain_method", c.domain_method}};
    j["galerkin"] = {{"K", c.K},
                     {"fft_size", c.fft_size},
                     {"matrix_hash", hex64(c.matrix_hash)},
                     {"aliasing_max", num(c.aliasing_max, "up")},
                     {"max_radius", num(c.max_radius, "up")},
                     {"envelope_tightened", c.envelope_tightened}};
    j["bounds"] = {{"exclusion_radius", num(c.exclusion_radius, "exact")},
                   {"op_norm", num(c.op_norm, "up")},
                   {"disc_error", num(c.disc_error, "up")},
                   {"ratio_r", num(c.ratio_r, "up")},
                   {"delta", num(c.delta, "up")},
                   {"delta_inv", num(c.delta_inv, "down")},
                   {"norm_factor", num(c.norm_factor, "up")}};
    j["schur"] = {{"epsilon", num(c.epsilon, "up")},
                  {"residual_bound", num(c.residual_bound, "up")},
                  {"unitarity_bound", num(c.unitarity_bound, "up")},
                  {"C0", num(c.C0, "up")},
                  {"C0_clamped", c.C0_clamped},
                  {"gate_threshold", num(c.gate_threshold, "up")}};
    j["gate"] = {{"contour_target", num(c.contour_target, "down")},
                 {"delta0", num(c.delta0, "down")},
                 {"gate_delta", num(c.gate_delta, "down")}};
    json disks = json::array();
    for (const auto& d : c.disks) {
        disks.push_back({{"name", d.name},
                         {"center_re", num(d.disk.center.real(), "exact")},
                         {"center_im", num(d.disk.center.imag(), "exact")},
                         {"radius", num(d.disk.radius, "exact")},
                         {"sup_bound", num(d.sup_bound, "up")},
                         {"transferred", num(d.transferred, "up")},
                         {"multiplicity", d.multiplicity},
                         {"arcs", d.arcs},
                         {"svd_calls", d.svd_calls}});
    }
    j["disks"] = disks;
    json stages = json::array();
    for (const auto& t : c.timings) stages.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    j["statistics"] = {{"svd_calls", c.svd_calls}, {"wall_seconds", c.wall_seconds}, {"stages", stages}};
    return j.dump(2) + "\n";
}

EnclosureCertificate from_json(const std::string& text) {
    EnclosureCertificate c;
    try {
        const json j = json::parse(text);
        if (j.at("schema") != "rescert-enclosure") fail(ErrorKind::Io, "not an enclosure certificate");
        c.schema_version = j.at("schema_version");
        if (c.schema_version != 1) fail(ErrorKind::Io, "unsupported certificate schema version");
        c.verdict = j.at("verdict");
        if (!j.at("failure").is_null()) {
            c.failed_stage = j["failure"].at("stage");
            c.failure_kind = j["failure"].at("kind");
            c.failure_message = j["failure"].at("message");
        }
        c.map_kind = j["map"].at("kind");
        c.map_description = j["map"].at("description");
        c.map_hash = parse_hex64(j["map"].at("hash"));
        c.config_hash = parse_hex64(j["config"].at("hash"));
        c.preset = j["config"].at("preset");
        const json& a = j.at("annulus");
        c.eta = get_num(a.at("eta"));
        c.alpha = get_num(a.at("alpha"));
        c.rho = get_num(a.at("rho"));
        c.annulus_arcs = a.at("arcs");
        c.outer_image_lower = get_num(a.at("outer_image_lower"));
        c.inner_image_upper = get_num(a.at("inner_image_upper"));
        c.domain_method = a.at("domain_method");
        const json& g = j.at("galerkin");
        c.K = g.at("K");
        c.fft_size = g.at("fft_size");
        c.matrix_hash = parse_hex64(g.at("matrix_hash"));
        c.aliasing_max = get_num(g.at("aliasing_max"));
        c.max_radius = get_num(g.at("max_radius"));
        c.envelope_tightened = g.at("envelope_tightened");
        const json& b = j.at("bounds");
        c.exclusion_radius = get_num(b.at("exclusion_radius"));
        c.op_norm = get_num(b.at("op_norm"));
        c.disc_error = get_num(b.at("disc_error"));
        c.ratio_r = get_num(b.at("ratio_r"));
        c.delta = get_num(b.at("delta"));
        c.delta_inv = get_num(b.at("delta_inv"));
        c.norm_factor = get_num(b.at("norm_factor"));
        const json& s = j.at("schur");
        c.epsilon = get_num(s.at("epsilon"));
        c.residual_bound = get_num(s.at("residual_bound"));
        c.unitarity_bound = get_num(s.at("unitarity_bound"));
        c.C0 = get_num(s.at("C0"));
        c.C0_clamped = s.at("C0_clamped");
        c.gate_threshold = get_num(s.at("gate_threshold"));
        const json& gt = j.at("gate");
        c.contour_target = get_num(gt.at("contour_target"));
        c.delta0 = get_num(gt.at("delta0"));
        c.gate_delta = get_num(gt.at("gate_delta"));
        for (const auto& d : j.at("disks")) {
            DiskResult r;
            r.name = d.at("name");
            r.disk.center = complex(get_num(d.at("center_re")), get_num(d.at("center_im")));
            r.disk.radius = get_num(d.at("radius"));
            r.sup_bound = get_num(d.at("sup_bound"));
            r.transferred = get_num(d.at("transferred"));
            r.multiplicity = d.at("multiplicity");
            r.arcs = d.at("arcs");
            r.svd_calls = d.at("svd_calls");
            c.disks.push_back(r);
        }
        const json& st = j.at("statistics");
        c.svd_calls = st.at("svd_calls");
        c.wall_seconds = st.at("wall_seconds");
        for (const auto& t : st.at("stages")) c.timings.push_back({t.at("stage"), t.at("seconds")});
    } catch (const json::exception& e) {
        fail(ErrorKind::Io, std::string("malformed certificate JSON: ") + e.what());
    }
    return c;
}

void emit_report(const EnclosureCertificate& c, ReportFormat format, std::ostream& os) {
    if (format == ReportFormat::Json) {
        os << to_json(c);
    } else {
        char buf[256];
        os << "verdict: " << c.verdict << '\n';
        if (!c.failed_stage.empty())
            os << "failed stage: " << c.failed_stage << " (" << c.failure_kind << ") " << c.failure_message << '\n';
        os << "map: " << c.map_description << "  [" << hex64(c.map_hash) << "]\n";
        os << "config: " << hex64(c.config_hash) << (c.preset.empty() ? "" : "  preset " + c.preset) << '\n';
        std::snprintf(buf, sizeof buf, "annulus: eta %.17g  alpha %.17g  rho %.17g  (%zu arcs)\n", c.eta, c.alpha,
                      c.rho, c.annulus_arcs);
        os << buf;
        std::snprintf(buf, sizeof buf, "galerkin: K %d  fft %zu  aliasing <= %.3e  max radius %.3e\n", c.K,
                      c.fft_size, c.aliasing_max, c.max_radius);
        os << buf;
        std::snprintf(buf, sizeof buf, "bounds: B %.6g  Delta %.4e  r %.4e  delta %.4e  1/delta >= %.4e\n",
                      c.op_norm, c.disc_error, c.ratio_r, c.delta, c.delta_inv);
        os << buf;
        std::snprintf(buf, sizeof buf, "schur: eps %.3e  C0 %.6g%s  gate threshold %.3e\n", c.epsilon, c.C0,
                      c.C0_clamped ? " (clamped)" : "", c.gate_threshold);
        os << buf;
        std::snprintf(buf, sizeof buf, "gate: target %.4e  delta0 %.4e  usable delta %.4e\n", c.contour_target,
                      c.delta0, c.gate_delta);
        os << buf;
        os << "disks:\n";
        for (const auto& d : c.disks) {
            std::snprintf(buf, sizeof buf,
                          "  %-4s center %.17g%+.17gi  radius %.6g  sup r_T %.6g  member bound %.6g  mult %d  arcs "
                          "%zu\n",
                          d.name.c_str(), d.disk.center.real(), d.disk.center.imag(), d.disk.radius, d.sup_bound,
                          d.transferred, d.multiplicity, d.arcs);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "svd calls %zu  wall %.2f s\n", c.svd_calls, c.wall_seconds);
        os << buf;
    }
    require(static_cast<bool>(os), ErrorKind::Io, "failed writing report");
}

void emit_report(const EnclosureCertificate& c, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot open " + path.string());
    emit_report(c, format, out);
}

void emit_plots(const EnclosureCertificate& cert, const std::filesystem::path& dir, const PlotOptions& options) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "disks.csv");
        if (!csv) fail(ErrorKind::Io, "cannot write disks.csv");
        csv << "name,center_re,center_im,radius,sup_bound,transferred_bound,multiplicity\n";
        char buf[256];
        for (const auto& d : cert.disks) {
            std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", d.name.c_str(),
                          d.disk.center.real(), d.disk.center.imag(), d.disk.radius, d.sup_bound, d.transferred,
                          d.multiplicity);
            csv << buf;
        }
    }
    if (!options.svg) return;
    double lo_x = -1, hi_x = 1, lo_y = -1, hi_y = 1;
    for (const auto& d : cert.disks) {
        lo_x = std::min(lo_x, d.disk.center.real() - d.disk.radius);
        hi_x = std::max(hi_x, d.disk.center.real() + d.disk.radius);
        lo_y = std::min(lo_y, d.disk.center.imag() - d.disk.radius);
        hi_y = std::max(hi_y, d.disk.center.imag() + d.disk.radius);
    }
    const double pad = 0.1, size = 600;
    const double span = std::max(hi_x - lo_x, hi_y - lo_y) + 2 * pad;
    auto px = [&](double x) { return (x - lo_x + pad) / span * size; };
    auto py = [&](double y) { return (hi_y + pad - y) / span * size; };
    std::ofstream svg(dir / "disks.svg");
    if (!svg) fail(ErrorKind::Io, "cannot write disks.svg");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"" << size / span
        << "\" fill=\"none\" stroke=\"#bbb\" stroke-dasharray=\"4 4\"/>\n";
    for (const auto& d : cert.disks) {
        svg << "<circle cx=\"" << px(d.disk.center.real()) << "\" cy=\"" << py(d.disk.center.imag()) << "\" r=\""
            << d.disk.radius / span * size << "\" fill=\"none\" stroke=\"#c03\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << px(d.disk.center.real()) << "\" y=\"" << py(d.disk.center.imag()) - 4
            << "\" font-size=\"12\" text-anchor=\"middle\">" << d.name << "</text>\n";
    }
    svg << "<text x=\"8\" y=\"16\" font-size=\"12\">verdict: " << cert.verdict << "</text>\n</svg>\n";
}

Heatmap resolvent_heatmap(const CMatrix& A, double re_min, double re_max, double im_min, double im_max, int nx,
                          int ny) {
    require(A.rows() == A.cols(), ErrorKind::ShapeMismatch, "heatmap needs a square matrix");
    require(nx >= 2 && ny >= 2 && re_max > re_min && im_max > im_min, ErrorKind::Domain, "bad heatmap grid");
    Heatmap h{re_min, re_max, im_min, im_max, nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny)};
    parallel_for(h.log10_resolvent.size(), [&](std::size_t idx) {
        const int row = static_cast<int>(idx / nx), col = static_cast<int>(idx % nx);
        const complex z(re_min + (re_max - re_min) * col / (nx - 1), im_max - (im_max - im_min) * row / (ny - 1));
        CMatrix shifted = -A;
        shifted.diagonal().array() += z;
        Eigen::BDCSVD<CMatrix> svd(shifted);
        const double smin = svd.singularValues().minCoeff();
        h.log10_resolvent[idx] = smin > 0 ? -std::log10(smin) : std::numeric_limits<double>::infinity();
    });
    return h;
}

void write_heatmap(const Heatmap& h, const std::vector<Disk>& disks, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "heatmap.csv");
    if (!csv) fail(ErrorKind::Io, "cannot write heatmap.csv");
    csv << "# NONRIGOROUS: floating-point estimates of log10 ||(z - A)^{-1}||_2, not certified\n";
    csv << "re,im,log10_resolvent\n";
    char buf[128];
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : h.log10_resolvent) {
        if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    }
    for (int r = 0; r < h.ny; ++r) {
        for (int c = 0; c < h.nx; ++c) {
            const double re = h.re_min + (h.re_max - h.re_min) * c / (h.nx - 1);
            const double im = h.im_max - (h.im_max - h.im_min) * r / (h.ny - 1);
            std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", re, im,
                          h.log10_resolvent[static_cast<std::size_t>(r) * h.nx + c]);
            csv << buf;
        }
    }
    const double cell = 6;
    std::ofstream svg(dir / "heatmap.svg");
    if (!svg) fail(ErrorKind::Io, "cannot write heatmap.svg");
    const double w = cell * h.nx, ht = cell * h.ny;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << ht + 24 << "\">\n";
    for (int r = 0; r < h.ny; ++r) {
        for (int c = 0; c < h.nx; ++c) {
            const double v = h.log10_resolvent[static_cast<std::size_t>(r) * h.nx + c];
            const double t = std::isfinite(v) && hi > lo ? (v - lo) / (hi - lo) : 1.0;
            const int shade = static_cast<int>(std::lround(255 * (1 - t)));
            svg << "<rect x=\"" << c * cell << "\" y=\"" << r * cell << "\" width=\"" << cell << "\" height=\""
                << cell << "\" fill=\"rgb(255," << shade << ',' << shade << ")\"/>\n";
        }
    }
    auto px = [&](double x) { return (x - h.re_min) / (h.re_max - h.re_min) * (w - cell) + cell / 2; };
    auto py = [&](double y) { return (h.im_max - y) / (h.im_max - h.im_min) * (ht - cell) + cell / 2; };
    for (const auto& d : disks) {
        svg << "<ellipse cx=\"" << px(d.center.real()) << "\" cy=\"" << py(d.center.imag()) << "\" rx=\""
            << d.radius / (h.re_max - h.re_min) * (w - cell) << "\" ry=\""
            << d.radius / (h.im_max - h.im_min) * (ht - cell) << "\" fill=\"none\" stroke=\"black\"/>\n";
    }
    svg << "<text x=\"4\" y=\"" << ht + 16
        << "\" font-size=\"12\">NONRIGOROUS resolvent norm estimate (log10), floating point only</text>\n</svg>\n";
}

}  // namespace rescert
