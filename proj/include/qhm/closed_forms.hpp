// closed_forms.hpp — Analytic currents for the spectrally separated regimes

#pragma once

#include <optional>
#include <string>

#include "qhm/spectra.hpp"

namespace qhm {

// Inputs for the regime formulas. g_cold is G^C(w0 - delta) for A1 and B and
// G^C(w0) for A2; g_hot is G^H(w0 + delta) in every regime. p0 and p1 are the
// harmonic weights entering the normalizer.
struct RegimeCase {
    Regime regime{Regime::A1};
    double omega0{1.0};
    double delta{0.0};
    double T_C{1.0};
    double T_H{1.0};
    double g_cold{0.0};
    double g_hot{0.0};
    double p0{1.0};
    double p1{0.0};
    double lambda{0.0};  // sinusoidal depth; unused for B

    // Leading-order sinusoidal weights p0 = 1 - lambda^2/2, p1 = lambda^2/4.
    static RegimeCase sinusoidal(Regime regime, double omega0, double delta, double T_C, double T_H,
                                 double g_cold, double g_hot, double lambda);
    // pi-flip weights p0 = 0, p1 = (2/pi)^2.
    static RegimeCase pi_flip(double omega0, double delta, double T_C, double T_H, double g_cold,
                              double g_hot);

    void validate() const;
    // Set when lambda leaves the small-depth regime the formulas assume.
    std::optional<std::string> warning() const;
};

struct RegimeCurrents {
    double J_C{0.0};
    double J_H{0.0};
    double P{0.0};
    double normalizer{0.0};
};

RegimeCurrents currents_A1(const RegimeCase& rc);
RegimeCurrents currents_A2(const RegimeCase& rc);
RegimeCurrents currents_B(const RegimeCase& rc);
RegimeCurrents regime_currents(const RegimeCase& rc);

double critical_delta(Regime regime, double omega0, double T_C, double T_H);

// Efficiency below and COP above the critical rate. For A2 the COP is J_C/P
// from the A2 currents, omega0/delta.
double regime_efficiency(Regime regime, double omega0, double delta);
double regime_cop(Regime regime, double omega0, double delta);

// Three-harmonic (m = 0, +-1) sinusoidal expressions to order lambda^2.
struct ThreeHarmonicSamples {
    double omega0{1.0};
    double delta{0.0};
    double T_C{1.0};
    double T_H{1.0};
    double P0{1.0};
    double P1{0.0};
    double gc_minus{0.0};  // G^C(w0 - delta)
    double gc_zero{0.0};   // G^C(w0)
    double gc_plus{0.0};   // G^C(w0 + delta)
    double gh_minus{0.0};
    double gh_zero{0.0};
    double gh_plus{0.0};

    ThreeHarmonicSamples swapped_baths() const;
};

double appendixA_power(const ThreeHarmonicSamples& s);
double appendixA_hot_current(const ThreeHarmonicSamples& s);
double appendixA_cold_current(const ThreeHarmonicSamples& s);

} // namespace qhm
