#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rescert/circle_map.hpp"
#include "rescert/contour_cert.hpp"
#include "rescert/galerkin.hpp"

namespace rescert {

struct DiskSpec {
    std::string name;
    Disk disk;
    std::string source;  // expression text as written in the config
};

struct RunConfig {
    std::shared_ptr<const CircleMap> map;
    std::string map_kind;
    double eta = 0, alpha = 0, rho = 0;
    AnnulusOptions annulus;
    int K = 0;
    std::size_t fft_size = 0;
    GalerkinOptions galerkin;
    double exclusion_radius = 0;  // radius of the disk F0 centered at 0
    std::vector<DiskSpec> disks;  // F0 first, then the resonance disks in file order
    std::size_t contour_max_arcs = std::size_t{1} << 20;
    int contour_initial_level = 3;
    int workers = 0;  // 0 keeps the runtime default
    std::string out_dir;
    std::string preset;
    std::uint64_t config_hash = 0;
    // Flattened section.key = value pairs after the preset was applied, sorted.
    std::map<std::string, std::string> resolved;

    [[nodiscard]] std::vector<Disk> disk_list() const;
};

// Flat INI text: [section] headers, key = value lines, '#' or ';' comments.
// A section [preset.NAME] holds section.key overrides applied when NAME is
// selected (explicitly or via run.preset). Errors throw ErrorKind::Config.
RunConfig parse_config(std::istream& in, const std::string& preset = "");
RunConfig load_config(const std::filesystem::path& path, const std::string& preset = "");

// Builds the map from a [map] section given as key/value pairs.
CircleMap build_map(const std::map<std::string, std::string>& map_section, std::string* kind = nullptr);

}  // namespace rescert
