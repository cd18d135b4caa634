// config.hpp — Run configuration: JSON parsing, canonical echo and hashing

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qhm/floquet_engine.hpp"

namespace qhm {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class SweepScale { linear, log };
enum class Task { sweep, critical, optimize, spectra, oracle };

std::string_view to_string(SweepScale scale);
std::string_view to_string(Task task);

struct SweepSpec {
    double delta_min{0.1};
    double delta_max{1.0};
    int n_points{2};
    SweepScale scale{SweepScale::linear};

    std::vector<double> deltas() const;
    bool operator==(const SweepSpec&) const = default;
};

// Numerical overrides; mass_tol is applied to the machine.
struct Tolerances {
    double bisect_rel{1e-8};
    double optimize_rel{1e-8};
    int optimize_scan_points{64};
    bool operator==(const Tolerances&) const = default;
};

struct SpectraGrid {
    double omega_min{0.0};
    double omega_max{1.0};
    int n_points{1001};
    bool operator==(const SpectraGrid&) const = default;
};

struct OracleParams {
    double t_end{1000.0};
    double dt_max{0.1};
    double rho_ee0{0.0};
    int samples_per_period{64};
    int omega_nodes{20001};
    double window_factor{8.0};
    bool operator==(const OracleParams&) const = default;
};

struct RunConfig {
    MachineSpec machine;
    SweepSpec sweep;
    std::vector<Task> tasks;
    std::string output{"out"};
    Tolerances tolerances;
    SpectraGrid spectra;
    OracleParams oracle;

    void validate() const;
    bool operator==(const RunConfig&) const = default;
};

// Parses a configuration document. Relative tabulated-spectrum paths are
// resolved against base_dir. Throws ConfigError naming the line (syntax) or
// the field path (content) at fault.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Canonical, re-parseable JSON rendering.
std::string echo_config(const RunConfig& cfg);

// FNV-1a over the canonical rendering.
std::uint64_t config_hash(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

} // namespace qhm
