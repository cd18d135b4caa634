// sweeps.hpp — Delta sweeps, critical-point bisection, optimizer and spectra export tasks

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qhm/config.hpp"
#include "qhm/finite_time.hpp"
#include "qhm/floquet_engine.hpp"
#include "qhm/oracle.hpp"

namespace qhm {

struct SweepRow {
    double delta{0.0};
    SteadyReport report;
    std::string error;  // empty when the point solved
};

// One row per delta in sweep order; per-point failures are recorded in the
// row, never thrown. Points are solved on `threads` workers.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, unsigned threads = 1);

struct CriticalResult {
    double delta_cr{0.0};
    double bracket_lo{0.0};
    double bracket_hi{0.0};
    int iterations{0};
};

// First sign change of P over the sweep grid, refined by bisection to
// tolerances.bisect_rel. Throws NoSignChange if P keeps one sign.
CriticalResult find_critical(const RunConfig& cfg, unsigned threads = 1);

OptimumReport run_optimize(const RunConfig& cfg);

struct SpectraRow {
    bool harmonic{false};
    double omega{0.0};
    double G_C{0.0};
    double G_H{0.0};
    int m{0};
    double P_m{0.0};
    bool breakpoint{false};  // a cutoff of either spectrum lies in (previous omega, omega]
};

std::vector<SpectraRow> export_spectra(const RunConfig& cfg);

struct OracleSummary {
    oracle::CoarseGrained coarse;
    SteadyReport floquet;
    double S_floquet{0.0};
    oracle::Trajectory trajectory;
};

OracleSummary run_oracle(const RunConfig& cfg);

// Output header shared by every table: tool, version, config hash, units.
void write_header(std::ostream& out, const RunConfig& cfg, const std::string& table, std::uint64_t seed);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_critical_csv(std::ostream& out, const CriticalResult& r);
void write_optimize_csv(std::ostream& out, const OptimumReport& r);
void write_spectra_csv(std::ostream& out, const std::vector<SpectraRow>& rows);
void write_oracle_csv(std::ostream& out, const OracleSummary& s);

// Formats with 17 significant digits.
std::string format_number(double v);

} // namespace qhm
