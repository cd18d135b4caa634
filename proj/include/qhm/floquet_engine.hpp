// floquet_engine.hpp — Steady state, heat currents, power and entropy production of the machine

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qhm/modulation.hpp"
#include "qhm/spectra.hpp"

namespace qhm {

// Units: hbar = k_B = 1. Heat currents are positive when heat flows from the
// bath into the qubit; power is the piston's investment and is negative when
// the machine delivers work.
struct MachineSpec {
    ModulationScheme modulation;
    BathModel bathC;
    BathModel bathH;
    int truncation_M{0};                         // 0 selects default_truncation()
    double mass_tol{kDefaultMassTolerance};

    static MachineSpec make(ModulationScheme modulation, BathModel bathC, BathModel bathH,
                            int truncation_M = 0, double mass_tol = kDefaultMassTolerance);

    double omega0() const { return modulation.omega0; }
    double delta() const { return modulation.delta; }
    int effective_truncation() const;
    MachineSpec with_delta(double delta) const;

    // Requires T_C <= T_H (equal temperatures are admitted as the trivial
    // no-gradient machine) and valid components.
    void validate() const;

    bool operator==(const MachineSpec&) const = default;
};

// One retained Floquet harmonic with both baths sampled at its frequency.
struct HarmonicSample {
    int m{0};
    double omega{0.0};
    double weight{0.0};
    double g_cold{0.0};
    double g_hot{0.0};
};

enum class Mode { engine, refrigerator, dud, critical };
std::string_view to_string(Mode mode);

struct SteadyReport {
    double w{0.0};
    double J_C{0.0};
    double J_H{0.0};
    double P{0.0};
    double sigma{0.0};
    Mode mode{Mode::dud};
    double figure_of_merit{0.0};  // eta (engine) or COP (refrigerator); NaN for dud
    double current_scale{0.0};    // gross energy throughput, sets the zero-power threshold
    double T_C{0.0};
    double T_H{0.0};
};

// Harmonics above the weight floor, sampled on both spectra. A harmonic at a
// non-positive frequency is an error only if some bath couples there.
std::vector<HarmonicSample> harmonic_samples(const MachineSpec& spec);

double population_ratio(std::span<const HarmonicSample> samples, double T_C, double T_H);
double population_ratio(const MachineSpec& spec);

struct HeatCurrents {
    double J_C{0.0};
    double J_H{0.0};
};

HeatCurrents heat_currents(std::span<const HarmonicSample> samples, double T_C, double T_H);
HeatCurrents heat_currents(const MachineSpec& spec);

// Stationary power from the harmonic sum (not from the first law).
double power(std::span<const HarmonicSample> samples, double T_C, double T_H);
double power(const MachineSpec& spec);

// -J_C/T_C - J_H/T_H; throws SecondLawViolation below -1e-12 (relative to the
// current scale when it exceeds one).
double entropy_production(const SteadyReport& report, double T_C, double T_H);

struct Rating {
    Mode mode{Mode::dud};
    double figure_of_merit{0.0};
};

Rating classify_and_rate(const SteadyReport& report);

SteadyReport steady_state(std::span<const HarmonicSample> samples, double T_C, double T_H);
SteadyReport steady_state(const MachineSpec& spec);

} // namespace qhm
