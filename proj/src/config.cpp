#include "rescert/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "rescert/expression.hpp"

namespace rescert {

namespace {

namespace pt = boost::property_tree;

// Ordered list of (section.key, value) pairs.
using Flat = std::vector<std::pair<std::string, std::string>>;

void upsert(Flat& flat, const std::string& key, const std::string& value) {
    for (auto& [k, v] : flat) {
        if (k == key) {
            v = value;
            return;
        }
    }
    flat.emplace_back(key, value);
}

std::string section_of(const std::string& key) { return key.substr(0, key.find('.')); }
std::string name_of(const std::string& key) { return key.substr(key.find('.') + 1); }

double real_value(const std::string& key, const std::string& text) {
    try {
        return evaluate_expression(text).to_double();
    } catch (const Error& e) {
        fail(ErrorKind::Config, key + ": " + e.what());
    }
}

long integer_value(const std::string& key, const std::string& text) {
    const ExprValue v = evaluate_expression(text);
    if (!v.exact || denominator(*v.exact) != 1) fail(ErrorKind::Config, key + " must be an integer");
    const auto& n = numerator(*v.exact);
    if (n > (std::int64_t{1} << 40) || n < -(std::int64_t{1} << 40)) fail(ErrorKind::Config, key + " out of range");
    return static_cast<long>(n);
}

Rational small_rational(const std::string& key, const BigRational& q) {
    const auto limit = boost::multiprecision::cpp_int(std::int64_t{1} << 62);
    const auto& p = numerator(q);
    const auto& d = denominator(q);
    if (p > limit || -p > limit || d > limit) fail(ErrorKind::Config, key + ": rational too large");
    return Rational(static_cast<std::int64_t>(p), static_cast<std::int64_t>(d));
}

DiskSpec parse_disk(const std::string& name, const std::string& text) {
    // "center, radius"; the center may itself contain commas inside calls.
    int depth = 0;
    std::size_t split = std::string::npos;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        else if (text[i] == ')') --depth;
        else if (text[i] == ',' && depth == 0) split = i;
    }
    if (split == std::string::npos) fail(ErrorKind::Config, "disk " + name + " needs 'center, radius'");
    const ExprValue center = evaluate_expression(text.substr(0, split));
    const double radius = real_value("disk " + name, text.substr(split + 1));
    if (!(radius > 0)) fail(ErrorKind::Config, "disk " + name + " needs a positive radius");
    complex c = center.ball.center();
    if (center.exact) c = complex(center.exact->convert_to<double>(), 0.0);
    return {name, Disk{c, radius}, boost::trim_copy(text)};
}

std::uint64_t fnv(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::vector<Disk> RunConfig::disk_list() const {
    std::vector<Disk> out;
    for (const auto& d : disks) out.push_back(d.disk);
    return out;
}

CircleMap build_map(const std::map<std::string, std::string>& sec, std::string* kind_out) {
    auto get = [&](const std::string& k) -> const std::string& {
        auto it = sec.find(k);
        if (it == sec.end()) fail(ErrorKind::Config, "map." + k + " is required");
        return it->second;
    };
    const std::string kind = get("kind");
    if (kind_out) *kind_out = kind;
    if (kind == "doubling") return doubling_map();
    if (kind == "monomial") return monomial_map(static_cast<int>(integer_value("map.degree", get("degree"))));
    if (kind == "reference_blaschke") return reference_blaschke_map();
    if (kind == "perturbed_doubling") {
        const ExprValue b = evaluate_expression(get("b"));
        if (!b.exact) fail(ErrorKind::Config, "map.b must be an exact rational");
        return perturbed_doubling_map(small_rational("map.b", *b.exact));
    }
    if (kind == "blaschke") {
        Blaschke spec;
        if (sec.count("factor")) spec.factor = evaluate_expression(sec.at("factor")).ball;
        std::vector<std::string> parts;
        boost::split(parts, get("zeros"), boost::is_any_of(";"));
        for (auto& p : parts) {
            boost::trim(p);
            if (!p.empty()) spec.zeros.push_back(evaluate_expression(p).ball);
        }
        if (spec.zeros.empty()) fail(ErrorKind::Config, "map.zeros is empty");
        return CircleMap(spec);
    }
    fail(ErrorKind::Config, "unknown map kind '" + kind + "'");
}

RunConfig parse_config(std::istream& in, const std::string& preset_arg) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorKind::Config, e.what());
    }

    Flat flat;
    std::map<std::string, Flat> presets;
    for (const auto& [section, body] : tree) {
        if (body.data().size() && body.empty()) fail(ErrorKind::Config, "key '" + section + "' outside a section");
        if (boost::starts_with(section, "preset.")) {
            Flat& p = presets[section.substr(7)];
            for (const auto& [k, v] : body) {
                if (k.find('.') == std::string::npos)
                    fail(ErrorKind::Config, "preset keys must be section.key, got '" + k + "'");
                upsert(p, k, v.data());
            }
            continue;
        }
        for (const auto& [k, v] : body) upsert(flat, section + "." + k, v.data());
    }

    RunConfig cfg;
    std::string preset = preset_arg;
    for (const auto& [k, v] : flat)
        if (k == "run.preset" && preset.empty()) preset = boost::trim_copy(v);
    if (!preset.empty()) {
        auto it = presets.find(preset);
        if (it == presets.end()) fail(ErrorKind::Config, "unknown preset '" + preset + "'");
        for (const auto& [k, v] : it->second) upsert(flat, k, v);
    }
    cfg.preset = preset;

    static const std::set<std::string> known_sections = {"map", "annulus", "galerkin", "disks", "contour", "run"};
    std::map<std::string, std::string> map_section;
    for (const auto& [key, raw] : flat) {
        const std::string value = boost::trim_copy(raw);
        const std::string sec = section_of(key);
        const std::string name = name_of(key);
        if (!known_sections.count(sec)) fail(ErrorKind::Config, "unknown section '" + sec + "'");
        cfg.resolved[key] = value;
        if (sec == "map") {
            map_section[name] = value;
        } else if (sec == "annulus") {
            if (name == "eta") cfg.eta = real_value(key, value);
            else if (name == "alpha") cfg.alpha = real_value(key, value);
            else if (name == "rho") cfg.rho = real_value(key, value);
            else if (name == "subdivisions") cfg.annulus.subdivisions = static_cast<std::size_t>(integer_value(key, value));
            else if (name == "max_arcs") cfg.annulus.max_arcs = static_cast<std::size_t>(integer_value(key, value));
            else fail(ErrorKind::Config, "unknown key " + key);
        } else if (sec == "galerkin") {
            if (name == "K") cfg.K = static_cast<int>(integer_value(key, value));
            else if (name == "fft_size") cfg.fft_size = static_cast<std::size_t>(integer_value(key, value));
            else if (name == "alias_tolerance") cfg.galerkin.alias_tolerance = real_value(key, value);
            else if (name == "alias_arcs") cfg.galerkin.alias_arcs = static_cast<std::size_t>(integer_value(key, value));
            else fail(ErrorKind::Config, "unknown key " + key);
        } else if (sec == "disks") {
            if (name == "exclusion_radius") cfg.exclusion_radius = real_value(key, value);
            else cfg.disks.push_back(parse_disk(name, value));
        } else if (sec == "contour") {
            if (name == "max_arcs") cfg.contour_max_arcs = static_cast<std::size_t>(integer_value(key, value));
            else if (name == "initial_level") cfg.contour_initial_level = static_cast<int>(integer_value(key, value));
            else fail(ErrorKind::Config, "unknown key " + key);
        } else if (sec == "run") {
            if (name == "workers") cfg.workers = static_cast<int>(integer_value(key, value));
            else if (name == "out") cfg.out_dir = value;
            else if (name == "preset") continue;
            else fail(ErrorKind::Config, "unknown key " + key);
        }
    }

    try {
        cfg.map = std::make_shared<const CircleMap>(build_map(map_section, &cfg.map_kind));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        fail(ErrorKind::Config, std::string("map: ") + e.what());
    }

    if (!(cfg.eta >= 0 && cfg.eta < cfg.alpha && cfg.alpha < cfg.rho))
        fail(ErrorKind::Config, "annulus widths must satisfy 0 <= eta < alpha < rho");
    if (cfg.K < 1) fail(ErrorKind::Config, "galerkin.K must be >= 1");
    const std::size_t n = 2 * static_cast<std::size_t>(cfg.K) + 1;
    if (cfg.fft_size < 2 * n || (cfg.fft_size & (cfg.fft_size - 1)) != 0)
        fail(ErrorKind::Config, "galerkin.fft_size must be a power of two >= 2(2K+1)");
    if (!(cfg.exclusion_radius > 0)) fail(ErrorKind::Config, "disks.exclusion_radius must be positive");
    if (cfg.contour_initial_level < 0 || cfg.contour_initial_level > 20)
        fail(ErrorKind::Config, "contour.initial_level out of range");
    cfg.disks.insert(cfg.disks.begin(), DiskSpec{"F0", Disk{complex(0.0, 0.0), cfg.exclusion_radius},
                                                 "0, " + cfg.resolved["disks.exclusion_radius"]});

    std::ostringstream canon;
    for (const auto& [k, v] : cfg.resolved) {
        if (k == "run.workers" || k == "run.out" || k == "run.preset") continue;
        canon << k << '=' << v << '\n';
    }
    cfg.config_hash = fnv(canon.str());
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::string& preset) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open config " + path.string());
    return parse_config(in, preset);
}

}  // namespace rescert
