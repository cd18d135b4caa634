// test_closed_forms.cpp — Regime formulas reduced from the general harmonic sum

#include <doctest.h>

#include <cmath>
#include <random>

#include "qhm/closed_forms.hpp"
#include "qhm/errors.hpp"
#include "qhm/floquet_engine.hpp"

using namespace qhm;

namespace {

bool near_critical(double e_c, double e_h) { return std::abs(e_h - e_c) < 1e-3 * std::max(e_h, e_c); }

// Net currents are differences of gross fluxes, so a few ulps of the gross
// throughput is the attainable floor.
void check_close(const RegimeCurrents& rc, const SteadyReport& r) {
    const double scale = std::max({std::abs(r.J_C), std::abs(r.J_H), std::abs(r.P), 1e-3 * r.current_scale});
    CHECK(std::abs(rc.J_C - r.J_C) <= 1e-12 * scale);
    CHECK(std::abs(rc.J_H - r.J_H) <= 1e-12 * scale);
    CHECK(std::abs(rc.P - r.P) <= 1e-12 * scale);
}

} // namespace

TEST_CASE("A1 formulas match the harmonic sum on ideally separated baths") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int used = 0;
    for (int k = 0; k < 300; ++k) {
        const double w0 = 2 + 20 * u(rng);
        const double d = w0 * (0.02 + 0.95 * u(rng));
        const double T_C = 0.3 + 5 * u(rng);
        const double T_H = T_C * (1 + 4 * u(rng));
        const double gc = 0.05 + u(rng), gh = 0.05 + u(rng);
        const double lambda = 0.02 + 0.28 * u(rng);
        if (near_critical(std::exp(-(w0 - d) / T_C), std::exp(-(w0 + d) / T_H))) continue;
        const auto spec = MachineSpec::make(ModulationScheme::sinusoidal(w0, d, lambda),
                                            BathModel::make(BathLabel::C, T_C, SpectrumShape::flat(gc, 0, w0)),
                                            BathModel::make(BathLabel::H, T_H, SpectrumShape::flat(gh, w0, kInf)),
                                            1, 0.05);
        const auto fw = floquet_amplitudes(spec.modulation, 1);
        RegimeCase rc{Regime::A1, w0, d, T_C, T_H, gc, gh, fw.weight(0), fw.weight(1), lambda};
        check_close(currents_A1(rc), steady_state(spec));
        ++used;
    }
    CHECK(used > 250);
}

TEST_CASE("A2 formulas match the harmonic sum with C resonant at the carrier") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int used = 0;
    for (int k = 0; k < 300; ++k) {
        const double w0 = 2 + 20 * u(rng);
        const double d = w0 * (0.05 + 0.9 * u(rng));
        const double T_C = 0.3 + 5 * u(rng);
        const double T_H = T_C * (1 + 4 * u(rng));
        const double gc = 0.05 + u(rng), gh = 0.05 + u(rng);
        const double lambda = 0.02 + 0.28 * u(rng);
        if (near_critical(std::exp(-w0 / T_C), std::exp(-(w0 + d) / T_H))) continue;
        const auto spec = MachineSpec::make(
            ModulationScheme::sinusoidal(w0, d, lambda),
            BathModel::make(BathLabel::C, T_C, SpectrumShape::flat(gc, std::max(0.0, w0 - d / 2), w0 + d / 2)),
            BathModel::make(BathLabel::H, T_H, SpectrumShape::flat(gh, w0 + d / 2, kInf)), 1, 0.05);
        const auto fw = floquet_amplitudes(spec.modulation, 1);
        RegimeCase rc{Regime::A2, w0, d, T_C, T_H, gc, gh, fw.weight(0), fw.weight(1), lambda};
        check_close(currents_A2(rc), steady_state(spec));
        ++used;
    }
    CHECK(used > 250);
}

TEST_CASE("B formulas match the harmonic sum for the pi-flip") {
    for (double d : {0.5, 2.0, 4.0, 7.0}) {
        const double w0 = 10, T_C = 1, T_H = 3;
        const auto spec = MachineSpec::make(ModulationScheme::pi_flip(w0, d),
                                            BathModel::make(BathLabel::C, T_C, SpectrumShape::flat(0.3, 0, w0)),
                                            BathModel::make(BathLabel::H, T_H, SpectrumShape::flat(0.8, w0, kInf)),
                                            1, 0.2);
        const auto rc = RegimeCase::pi_flip(w0, d, T_C, T_H, 0.3, 0.8);
        check_close(currents_B(rc), steady_state(spec));
    }
}

TEST_CASE("leading-order sinusoidal weights") {
    const auto rc = RegimeCase::sinusoidal(Regime::A1, 10, 2, 1, 2, 1, 1, 0.2);
    CHECK(rc.p0 == doctest::Approx(0.98));
    CHECK(rc.p1 == doctest::Approx(0.01));
    CHECK_FALSE(rc.warning().has_value());
    CHECK(RegimeCase::sinusoidal(Regime::A1, 10, 2, 1, 2, 1, 1, 0.5).warning().has_value());
    CHECK(RegimeCase::pi_flip(10, 2, 1, 2, 1, 1).p1 == doctest::Approx(4 / (kPi * kPi)));
}

TEST_CASE("first law and the sign structure of the regime currents") {
    for (Regime reg : {Regime::A1, Regime::A2, Regime::B}) {
        for (double d : {0.5, 3.0, 6.0, 9.0}) {
            RegimeCase rc{reg, 10, d, 1, 2, 0.7, 0.4, 0.95, 0.02, 0.3};
            const auto c = regime_currents(rc);
            CHECK(std::abs(c.J_C + c.J_H + c.P) <= 1e-14 * std::abs(c.J_H));
            const double dcr = critical_delta(reg, 10, 1, 2);
            if (d < dcr) {
                CHECK(c.P < 0);
                CHECK(-c.P / c.J_H == doctest::Approx(regime_efficiency(reg, 10, d)).epsilon(1e-12));
            } else {
                CHECK(c.P > 0);
                CHECK(c.J_C / c.P == doctest::Approx(regime_cop(reg, 10, d)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("critical rates and Carnot efficiency at the critical point") {
    CHECK(critical_delta(Regime::A1, 10, 1, 2) == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(critical_delta(Regime::B, 10, 1, 2) == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(critical_delta(Regime::A2, 10, 1, 2) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(critical_delta(Regime::A1, 10, 2, 2) == 0.0);
    CHECK_THROWS_AS(critical_delta(Regime::A1, 10, 3, 2), DomainError);
    for (Regime reg : {Regime::A1, Regime::A2}) {
        for (double T_H : {1.5, 2.0, 5.0}) {
            const double dcr = critical_delta(reg, 7, 1, T_H);
            CHECK(regime_efficiency(reg, 7, dcr) == doctest::Approx(1 - 1 / T_H).epsilon(1e-13));
            CHECK(regime_cop(reg, 7, dcr) == doctest::Approx(1 / (T_H - 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("currents vanish at the critical rate") {
    const double dcr = critical_delta(Regime::A1, 10, 1, 2);
    const auto c = currents_A1(RegimeCase::sinusoidal(Regime::A1, 10, dcr, 1, 2, 1, 1, 0.1));
    CHECK(std::abs(c.J_H) < 1e-15);
    CHECK(std::abs(c.P) < 1e-15);
}

TEST_CASE("three-harmonic expressions match a one-sideband engine for arbitrary samples") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        ThreeHarmonicSamples s;
        s.omega0 = 3 + 10 * u(rng);
        s.delta = s.omega0 * 0.9 * u(rng);
        s.T_C = 0.5 + 3 * u(rng);
        s.T_H = s.T_C * (1 + 3 * u(rng));
        const double lambda = 0.6 * u(rng);
        s.P0 = std::pow(std::cyl_bessel_j(0, lambda), 2);
        s.P1 = std::pow(std::cyl_bessel_j(1, lambda), 2);
        s.gc_minus = u(rng);
        s.gc_zero = u(rng);
        s.gc_plus = u(rng);
        s.gh_minus = u(rng);
        s.gh_zero = u(rng);
        s.gh_plus = u(rng);

        const std::vector<HarmonicSample> h{{-1, s.omega0 - s.delta, s.P1, s.gc_minus, s.gh_minus},
                                            {0, s.omega0, s.P0, s.gc_zero, s.gh_zero},
                                            {1, s.omega0 + s.delta, s.P1, s.gc_plus, s.gh_plus}};
        const auto J = heat_currents(h, s.T_C, s.T_H);
        const double P = power(h, s.T_C, s.T_H);
        const double scale = std::max({std::abs(J.J_C), std::abs(J.J_H), std::abs(P), 1e-300});
        CHECK(std::abs(appendixA_power(s) - P) <= 1e-12 * scale);
        CHECK(std::abs(appendixA_hot_current(s) - J.J_H) <= 1e-12 * scale);
        CHECK(std::abs(appendixA_cold_current(s) - J.J_C) <= 1e-12 * scale);
        CHECK(std::abs(appendixA_power(s) + appendixA_hot_current(s) + appendixA_cold_current(s)) <= 1e-12 * scale);
    }
}

TEST_CASE("regime formulas reject bad inputs") {
    CHECK_THROWS_AS(RegimeCase::sinusoidal(Regime::A1, -1, 2, 1, 2, 1, 1, 0.1), InvalidArgument);
    CHECK_THROWS_AS(currents_A1(RegimeCase::sinusoidal(Regime::A1, 10, 12, 1, 2, 1, 1, 0.1)), DomainError);
    CHECK_THROWS_AS(currents_A2(RegimeCase::sinusoidal(Regime::A1, 10, 2, 1, 2, 1, 1, 0.1)), InvalidArgument);
    CHECK_THROWS_AS(currents_A1(RegimeCase::sinusoidal(Regime::A1, 10, 2, 1, 2, 0, 0, 0.1)), DecoupledError);
}
