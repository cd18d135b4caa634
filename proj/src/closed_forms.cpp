// closed_forms.cpp — Regime A1/A2/B currents and the three-harmonic expressions

#include "qhm/closed_forms.hpp"

#include <cmath>
#include <sstream>

#include "qhm/errors.hpp"
#include "qhm/modulation.hpp"

namespace qhm {

namespace {

double normalizer(double p_c, double p_h, double g_c, double g_h, double e_c, double e_h) {
    const double den = p_c * g_c * (1.0 + e_c) + p_h * g_h * (1.0 + e_h);
    if (!(den > 0.0)) throw DecoupledError("regime normalizer: both couplings vanish");
    return p_c * p_h * g_c * g_h / den;
}

void require(const RegimeCase& rc, Regime expected, const char* who) {
    rc.validate();
    if (rc.regime != expected) {
        throw InvalidArgument(std::string(who) + ": regime mismatch");
    }
}

// Shared by A1 and B: couplings at w0 - delta (C) and w0 + delta (H) with
// symmetric weights p1.
RegimeCurrents two_sideband_currents(const RegimeCase& rc) {
    if (rc.omega0 <= rc.delta) {
        throw DomainError("regime currents need omega0 > delta");
    }
    const double e_h = std::exp(-(rc.omega0 + rc.delta) / rc.T_H);
    const double e_c = std::exp(-(rc.omega0 - rc.delta) / rc.T_C);
    const double N = normalizer(rc.p1, rc.p1, rc.g_cold, rc.g_hot, e_c, e_h);
    const double common = e_h - e_c;
    RegimeCurrents out;
    out.normalizer = N;
    out.J_H = (rc.omega0 + rc.delta) * N * common;
    out.J_C = -(rc.omega0 - rc.delta) * N * common;
    out.P = -2.0 * rc.delta * N * common;
    return out;
}

} // namespace

RegimeCase RegimeCase::sinusoidal(Regime regime, double omega0, double delta, double T_C, double T_H,
                                  double g_cold, double g_hot, double lambda) {
    RegimeCase rc{regime, omega0, delta, T_C, T_H, g_cold, g_hot,
                  1.0 - lambda * lambda / 2.0, lambda * lambda / 4.0, lambda};
    rc.validate();
    return rc;
}

RegimeCase RegimeCase::pi_flip(double omega0, double delta, double T_C, double T_H, double g_cold,
                               double g_hot) {
    const double p1 = (2.0 / kPi) * (2.0 / kPi);
    RegimeCase rc{Regime::B, omega0, delta, T_C, T_H, g_cold, g_hot, 0.0, p1, 0.0};
    rc.validate();
    return rc;
}

void RegimeCase::validate() const {
    if (!(omega0 > 0.0 && delta >= 0.0 && T_C > 0.0 && T_H > 0.0)) {
        throw InvalidArgument("regime case: omega0, temperatures must be positive and delta >= 0");
    }
    if (!(g_cold >= 0.0 && g_hot >= 0.0 && p0 >= 0.0 && p1 >= 0.0)) {
        throw InvalidArgument("regime case: spectrum samples and weights must be >= 0");
    }
}

std::optional<std::string> RegimeCase::warning() const {
    if (regime != Regime::B && lambda > 0.3) {
        std::ostringstream os;
        os << "lambda = " << lambda << " exceeds 0.3; second-order formulas lose accuracy";
        return os.str();
    }
    return std::nullopt;
}

RegimeCurrents currents_A1(const RegimeCase& rc) {
    require(rc, Regime::A1, "currents_A1");
    return two_sideband_currents(rc);
}

RegimeCurrents currents_B(const RegimeCase& rc) {
    require(rc, Regime::B, "currents_B");
    return two_sideband_currents(rc);
}

RegimeCurrents currents_A2(const RegimeCase& rc) {
    require(rc, Regime::A2, "currents_A2");
    const double e_h = std::exp(-(rc.omega0 + rc.delta) / rc.T_H);
    const double e_c = std::exp(-rc.omega0 / rc.T_C);
    // C couples through m = 0 (weight p0), H through m = +1 (weight p1).
    const double N = normalizer(rc.p0, rc.p1, rc.g_cold, rc.g_hot, e_c, e_h);
    RegimeCurrents out;
    out.normalizer = N;
    out.J_H = (rc.omega0 + rc.delta) * N * (e_h - e_c);
    out.J_C = rc.omega0 * N * (e_c - e_h);
    out.P = -rc.delta * N * (e_h - e_c);
    return out;
}

RegimeCurrents regime_currents(const RegimeCase& rc) {
    switch (rc.regime) {
    case Regime::A1: return currents_A1(rc);
    case Regime::A2: return currents_A2(rc);
    case Regime::B: return currents_B(rc);
    }
    throw InvalidArgument("unknown regime");
}

double critical_delta(Regime regime, double omega0, double T_C, double T_H) {
    if (!(T_C > 0.0 && T_H >= T_C)) {
        throw DomainError("critical_delta needs 0 < T_C <= T_H");
    }
    if (regime == Regime::A2) return omega0 * (T_H - T_C) / T_C;
    return omega0 * (T_H - T_C) / (T_H + T_C);
}

double regime_efficiency(Regime regime, double omega0, double delta) {
    if (regime == Regime::A2) return delta / (omega0 + delta);
    return 2.0 * delta / (omega0 + delta);
}

double regime_cop(Regime regime, double omega0, double delta) {
    if (regime == Regime::A2) return omega0 / delta;
    return (omega0 - delta) / (2.0 * delta);
}

ThreeHarmonicSamples ThreeHarmonicSamples::swapped_baths() const {
    ThreeHarmonicSamples s = *this;
    std::swap(s.T_C, s.T_H);
    std::swap(s.gc_minus, s.gh_minus);
    std::swap(s.gc_zero, s.gh_zero);
    std::swap(s.gc_plus, s.gh_plus);
    return s;
}

namespace {

struct Boltzmann {
    double c_minus, c_zero, c_plus, h_minus, h_zero, h_plus;
};

Boltzmann boltzmann(const ThreeHarmonicSamples& s) {
    const double wm = s.omega0 - s.delta;
    const double w0 = s.omega0;
    const double wp = s.omega0 + s.delta;
    return {std::exp(-wm / s.T_C), std::exp(-w0 / s.T_C), std::exp(-wp / s.T_C),
            std::exp(-wm / s.T_H), std::exp(-w0 / s.T_H), std::exp(-wp / s.T_H)};
}

double denominator(const ThreeHarmonicSamples& s, const Boltzmann& e) {
    const double d = s.P1 * (s.gc_minus * (1.0 + e.c_minus) + s.gh_minus * (1.0 + e.h_minus)) +
                     s.P0 * (s.gc_zero * (1.0 + e.c_zero) + s.gh_zero * (1.0 + e.h_zero)) +
                     s.P1 * (s.gc_plus * (1.0 + e.c_plus) + s.gh_plus * (1.0 + e.h_plus));
    if (!(d > 0.0)) throw DecoupledError("three-harmonic denominator vanishes");
    return d;
}

} // namespace

double appendixA_power(const ThreeHarmonicSamples& s) {
    const Boltzmann e = boltzmann(s);
    const double D = denominator(s, e);
    const double cross =
        s.gc_plus * s.gc_zero * (e.c_plus - e.c_zero) + s.gc_plus * s.gh_zero * (e.c_plus - e.h_zero) +
        s.gh_plus * s.gc_zero * (e.h_plus - e.c_zero) + s.gc_minus * s.gc_zero * (e.c_zero - e.c_minus) +
        s.gh_minus * s.gc_zero * (e.c_zero - e.h_minus) + s.gc_minus * s.gh_zero * (e.h_zero - e.c_minus) +
        s.gh_plus * s.gh_zero * (e.h_plus - e.h_zero) + s.gh_minus * s.gh_zero * (e.h_zero - e.h_minus);
    const double outer =
        s.gc_plus * s.gc_minus * (e.c_plus - e.c_minus) + s.gc_plus * s.gh_minus * (e.c_plus - e.h_minus) +
        s.gh_plus * s.gc_minus * (e.h_plus - e.c_minus) + s.gh_plus * s.gh_minus * (e.h_plus - e.h_minus);
    return -s.delta / D * (s.P1 * s.P0 * cross + 2.0 * s.P1 * s.P1 * outer);
}

double appendixA_hot_current(const ThreeHarmonicSamples& s) {
    const Boltzmann e = boltzmann(s);
    const double D = denominator(s, e);
    const double w0 = s.omega0;
    const double wm = s.omega0 - s.delta;
    const double wp = s.omega0 + s.delta;
    const double d = s.delta;

    const double zero = w0 * s.gh_zero * s.gc_zero * (e.h_zero - e.c_zero);
    const double cross = -w0 * s.gc_plus * s.gh_zero * (e.c_plus - e.h_zero) +
                         wp * s.gh_plus * s.gc_zero * (e.h_plus - e.c_zero) -
                         wm * s.gh_minus * s.gc_zero * (e.c_zero - e.h_minus) +
                         w0 * s.gc_minus * s.gh_zero * (e.h_zero - e.c_minus) +
                         d * s.gh_plus * s.gh_zero * (e.h_plus - e.h_zero) +
                         d * s.gh_minus * s.gh_zero * (e.h_zero - e.h_minus);
    // The last term (H and C both at w0 + delta) completes the m = +1 pair;
    // without it the expression disagrees with the general harmonic sum.
    const double outer = -wm * s.gc_plus * s.gh_minus * (e.c_plus - e.h_minus) +
                         wp * s.gh_plus * s.gc_minus * (e.h_plus - e.c_minus) +
                         2.0 * d * s.gh_plus * s.gh_minus * (e.h_plus - e.h_minus) +
                         wm * s.gh_minus * s.gc_minus * (e.h_minus - e.c_minus) +
                         wp * s.gh_plus * s.gc_plus * (e.h_plus - e.c_plus);
    return (s.P0 * s.P0 * zero + s.P1 * s.P0 * cross + s.P1 * s.P1 * outer) / D;
}

double appendixA_cold_current(const ThreeHarmonicSamples& s) {
    return appendixA_hot_current(s.swapped_baths());
}

} // namespace qhm
