// test_finite_time.cpp — Maximum-power search and Curzon-Ahlborn comparison

#include <doctest.h>

#include <cmath>

#include "qhm/errors.hpp"
#include "qhm/finite_time.hpp"

using namespace qhm;

namespace {

SteadyReport synthetic(double delta, double peak) {
    SteadyReport r;
    r.P = -delta * (2 * peak - delta);
    r.J_H = 1.0;
    r.J_C = -1.0 - r.P;
    r.current_scale = 2.0;
    const Rating rating = classify_and_rate(r);
    r.mode = rating.mode;
    r.figure_of_merit = rating.figure_of_merit;
    return r;
}

// A2 machine: C resonant only near the carrier, H flat above it.
MachineSpec a2_machine(double T_C, double T_H, double omega0 = 1.0) {
    const double b = 0.005 * omega0;
    return MachineSpec::make(ModulationScheme::sinusoidal(omega0, 0.5 * omega0, 0.1),
                             BathModel::make(BathLabel::C, T_C, SpectrumShape::flat(1, omega0 - b, omega0 + b)),
                             BathModel::make(BathLabel::H, T_H, SpectrumShape::flat(1, omega0 + b, kInf)), 1, 1e-5);
}

MachineSpec a1_machine(double T_C, double T_H, double omega0 = 1.0) {
    return MachineSpec::make(ModulationScheme::sinusoidal(omega0, 0.2 * omega0, 0.1),
                             BathModel::make(BathLabel::C, T_C, SpectrumShape::flat(1, 0, omega0)),
                             BathModel::make(BathLabel::H, T_H, SpectrumShape::flat(1, omega0, kInf)), 1, 1e-5);
}

} // namespace

TEST_CASE("Curzon-Ahlborn efficiency") {
    CHECK(curzon_ahlborn(1, 2) == doctest::Approx(0.29289).epsilon(1e-5));
    CHECK(curzon_ahlborn(1, 1) == 0.0);
    CHECK_THROWS_AS(curzon_ahlborn(2, 1), DomainError);
}

TEST_CASE("high-temperature maximum-power rows") {
    const auto a1 = table1_row(Regime::A1, 1, 1, 2);
    CHECK(a1.eta_max == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK_FALSE(a1.exceeds_CA);
    CHECK(a1.delta_max == doctest::Approx(a1.delta_cr / 2));
    CHECK(a1.efficiency(a1.delta_max) == doctest::Approx(a1.eta_max).epsilon(1e-14));

    const auto a2 = table1_row(Regime::A2, 1, 1, 2);
    CHECK(a2.eta_max == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(a2.exceeds_CA);
    CHECK(a2.efficiency(a2.delta_max) == doctest::Approx(a2.eta_max).epsilon(1e-14));
    CHECK_THROWS_AS(table1_row(Regime::B, 1, 1, 2), InvalidArgument);
}

TEST_CASE("golden-section search finds a known parabolic maximum") {
    for (double peak : {0.1, 0.37, 0.8}) {
        auto obj = [peak](double d) { return synthetic(d, peak); };
        const auto r = maximize_power(obj, 0.0, 1.0, 1, 2);
        CHECK(r.delta_max == doctest::Approx(peak).epsilon(1e-6));
        CHECK(r.P_max == doctest::Approx(peak * peak).epsilon(1e-12));
        CHECK(r.unimodal);
        CHECK(r.eta_CA == doctest::Approx(curzon_ahlborn(1, 2)));
    }
}

TEST_CASE("a bimodal objective is flagged") {
    auto obj = [](double d) {
        SteadyReport r;
        r.P = -(std::exp(-std::pow((d - 0.25) / 0.05, 2)) + 0.8 * std::exp(-std::pow((d - 0.75) / 0.05, 2))) - 0.01;
        r.J_H = 2.0;
        r.J_C = -2.0 - r.P;
        r.current_scale = 4.0;
        r.mode = Mode::engine;
        r.figure_of_merit = -r.P / r.J_H;
        return r;
    };
    const auto r = maximize_power(obj, 0.0, 1.0, 1, 2);
    CHECK_FALSE(r.unimodal);
    CHECK(r.delta_max == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("no engine window") {
    auto obj = [](double d) {
        SteadyReport r;
        r.P = d;
        r.J_C = 0.5;
        r.J_H = -0.5 - d;
        r.current_scale = 1;
        r.mode = Mode::refrigerator;
        return r;
    };
    CHECK_THROWS_AS(maximize_power(obj, 0.0, 1.0, 1, 2), NoEngineWindow);
    CHECK_THROWS_AS(maximize_power(obj, 1.0, 0.5, 1, 2), InvalidArgument);
}

TEST_CASE("high-temperature A2 machine: optimum at half the critical rate") {
    const double T_C = 40, T_H = 80;
    const auto spec = a2_machine(T_C, T_H);
    const double dcr = critical_delta(Regime::A2, 1, T_C, T_H);
    const auto r = maximize_power(spec, 0.02, dcr);
    CHECK(std::abs(r.delta_max / (dcr / 2) - 1) < 0.02);
    CHECK(std::abs(r.eta_at_max / ((T_H - T_C) / (T_H + T_C)) - 1) < 0.02);
    CHECK(r.eta_at_max == doctest::Approx(r.delta_max / (1 + r.delta_max)).epsilon(1e-10));
}

TEST_CASE("high-temperature A1 machine reproduces 2/7 below Curzon-Ahlborn") {
    const double T_C = 30, T_H = 60;
    const auto spec = a1_machine(T_C, T_H);
    const double dcr = critical_delta(Regime::A1, 1, T_C, T_H);
    const auto r = maximize_power(spec, 1e-3, dcr);
    CHECK(std::abs(r.eta_at_max / (2.0 / 7.0) - 1) < 0.02);
    CHECK(r.eta_at_max <= curzon_ahlborn(1, 2));
}

TEST_CASE("A2 at moderate temperature beats Curzon-Ahlborn") {
    const auto spec = a2_machine(1, 2);
    const auto r = maximize_power(spec, 0.02, critical_delta(Regime::A2, 1, 1, 2));
    CHECK(r.eta_at_max > curzon_ahlborn(1, 2));
    CHECK(r.exceeds_CA);
}

TEST_CASE("optimizer is deterministic") {
    const auto spec = a2_machine(1, 2);
    const auto a = maximize_power(spec, 0.02, 1.0);
    const auto b = maximize_power(spec, 0.02, 1.0);
    CHECK(a.delta_max == b.delta_max);
    CHECK(a.P_max == b.P_max);
    CHECK(a.evaluations == b.evaluations);
}
