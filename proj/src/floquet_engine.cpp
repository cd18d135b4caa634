// floquet_engine.cpp — Closed-form Floquet steady state and its thermodynamics

#include "qhm/floquet_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qhm/errors.hpp"

namespace qhm {

namespace {

constexpr double kSecondLawTol = 1e-12;
constexpr double kCriticalRelTol = 1e-12;

struct Sums {
    double w{0.0};
    double total{0.0};
};

Sums ratio_sums(std::span<const HarmonicSample> samples, double T_C, double T_H) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& s : samples) {
        num += s.weight * (s.g_cold * std::exp(-s.omega / T_C) + s.g_hot * std::exp(-s.omega / T_H));
        den += s.weight * (s.g_cold + s.g_hot);
    }
    if (!(den > 0.0)) {
        throw DecoupledError("no retained harmonic couples to either bath");
    }
    return {num / den, den};
}

double bath_current(std::span<const HarmonicSample> samples, double w, double T, bool cold) {
    double J = 0.0;
    for (const auto& s : samples) {
        const double g = cold ? s.g_cold : s.g_hot;
        J += s.omega * s.weight * g * (std::exp(-s.omega / T) - w);
    }
    return J / (w + 1.0);
}

double throughput(std::span<const HarmonicSample> samples, double w, double T_C, double T_H) {
    double scale = 0.0;
    for (const auto& s : samples) {
        scale += std::abs(s.omega) * s.weight *
                 (s.g_cold * (std::exp(-s.omega / T_C) + w) + s.g_hot * (std::exp(-s.omega / T_H) + w));
    }
    return scale / (w + 1.0);
}

} // namespace

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::engine: return "engine";
    case Mode::refrigerator: return "refrigerator";
    case Mode::dud: return "dud";
    case Mode::critical: return "critical";
    }
    return "?";
}

MachineSpec MachineSpec::make(ModulationScheme modulation, BathModel bathC, BathModel bathH,
                              int truncation_M, double mass_tol) {
    MachineSpec s;
    s.modulation = std::move(modulation);
    s.bathC = std::move(bathC);
    s.bathH = std::move(bathH);
    s.truncation_M = truncation_M;
    s.mass_tol = mass_tol;
    s.validate();
    return s;
}

int MachineSpec::effective_truncation() const {
    return truncation_M > 0 ? truncation_M : default_truncation(modulation, mass_tol);
}

MachineSpec MachineSpec::with_delta(double delta) const {
    MachineSpec s = *this;
    s.modulation = modulation.with_delta(delta);
    return s;
}

void MachineSpec::validate() const {
    modulation.validate();
    bathC.validate();
    bathH.validate();
    if (bathC.label != BathLabel::C || bathH.label != BathLabel::H) {
        throw InvalidMachine("machine: baths must be labelled C and H");
    }
    if (bathC.temperature > bathH.temperature) {
        throw InvalidMachine("machine: T_C must not exceed T_H");
    }
    if (truncation_M < 0) throw InvalidMachine("machine: truncation_M must be >= 0");
    if (!(mass_tol > 0.0 && mass_tol < 1.0)) throw InvalidMachine("machine: mass_tol must lie in (0, 1)");
}

std::vector<HarmonicSample> harmonic_samples(const MachineSpec& spec) {
    spec.validate();
    const int M = spec.effective_truncation();
    const FloquetWeights fw = floquet_weights(spec.modulation, M, spec.mass_tol);
    std::vector<HarmonicSample> out;
    out.reserve(static_cast<std::size_t>(2 * M + 1));
    for (int m = -M; m <= M; ++m) {
        const double p = fw.weight(m);
        if (p < kWeightFloor) continue;
        const double omega = spec.omega0() + m * spec.delta();
        const double gc = eval_spectrum(spec.bathC, omega);
        const double gh = eval_spectrum(spec.bathH, omega);
        if (omega <= 0.0) {
            if (gc > 0.0 || gh > 0.0) {
                throw NegativeSidebandError("harmonic m=" + std::to_string(m) + " at omega=" +
                                            std::to_string(omega) + " couples to a bath");
            }
            continue;
        }
        out.push_back({m, omega, p, gc, gh});
    }
    return out;
}

double population_ratio(std::span<const HarmonicSample> samples, double T_C, double T_H) {
    return ratio_sums(samples, T_C, T_H).w;
}

double population_ratio(const MachineSpec& spec) {
    const auto s = harmonic_samples(spec);
    return population_ratio(s, spec.bathC.temperature, spec.bathH.temperature);
}

HeatCurrents heat_currents(std::span<const HarmonicSample> samples, double T_C, double T_H) {
    const double w = population_ratio(samples, T_C, T_H);
    return {bath_current(samples, w, T_C, true), bath_current(samples, w, T_H, false)};
}

HeatCurrents heat_currents(const MachineSpec& spec) {
    const auto s = harmonic_samples(spec);
    return heat_currents(s, spec.bathC.temperature, spec.bathH.temperature);
}

double power(std::span<const HarmonicSample> samples, double T_C, double T_H) {
    const double w = population_ratio(samples, T_C, T_H);
    double P = 0.0;
    for (const auto& s : samples) {
        P += s.omega * s.weight *
             (s.g_cold * (w - std::exp(-s.omega / T_C)) + s.g_hot * (w - std::exp(-s.omega / T_H)));
    }
    return P / (w + 1.0);
}

double power(const MachineSpec& spec) {
    const auto s = harmonic_samples(spec);
    return power(s, spec.bathC.temperature, spec.bathH.temperature);
}

double entropy_production(const SteadyReport& report, double T_C, double T_H) {
    const double sigma = -report.J_C / T_C - report.J_H / T_H;
    const double tol = kSecondLawTol * std::max(1.0, report.current_scale / std::min(T_C, T_H));
    if (sigma < -tol) {
        throw SecondLawViolation("entropy production " + std::to_string(sigma) + " is negative");
    }
    return sigma;
}

Rating classify_and_rate(const SteadyReport& r) {
    const double eps = kCriticalRelTol * std::max({std::abs(r.J_C), std::abs(r.J_H), r.current_scale});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(r.P) <= eps) {
        if (r.J_H > 0.0 && r.P < 0.0) return {Mode::critical, -r.P / r.J_H};
        if (r.J_C > 0.0 && r.P > 0.0) return {Mode::critical, r.J_C / r.P};
        return {Mode::critical, nan};
    }
    if (r.P < -eps && r.J_H > 0.0) return {Mode::engine, -r.P / r.J_H};
    if (r.J_C > eps && r.P > 0.0) return {Mode::refrigerator, r.J_C / r.P};
    return {Mode::dud, nan};
}

SteadyReport steady_state(std::span<const HarmonicSample> samples, double T_C, double T_H) {
    SteadyReport r;
    r.T_C = T_C;
    r.T_H = T_H;
    r.w = population_ratio(samples, T_C, T_H);
    r.J_C = bath_current(samples, r.w, T_C, true);
    r.J_H = bath_current(samples, r.w, T_H, false);
    r.P = power(samples, T_C, T_H);
    r.current_scale = throughput(samples, r.w, T_C, T_H);
    r.sigma = entropy_production(r, T_C, T_H);
    const Rating rating = classify_and_rate(r);
    r.mode = rating.mode;
    r.figure_of_merit = rating.figure_of_merit;
    return r;
}

SteadyReport steady_state(const MachineSpec& spec) {
    const auto s = harmonic_samples(spec);
    return steady_state(s, spec.bathC.temperature, spec.bathH.temperature);
}

} // namespace qhm
