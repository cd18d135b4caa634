// test_modulation.cpp — Floquet weights, truncation and sideband checks

#include <doctest.h>

#include <cmath>
#include <random>

#include "qhm/errors.hpp"
#include "qhm/modulation.hpp"

using namespace qhm;

TEST_CASE("no modulation puts all weight on the carrier") {
    const auto fw = floquet_weights(ModulationScheme::sinusoidal(10, 1, 0.0), 3);
    CHECK(fw.weight(0) == doctest::Approx(1.0).epsilon(1e-15));
    for (int m = 1; m <= 3; ++m) {
        CHECK(fw.weight(m) < 1e-30);
        CHECK(fw.weight(-m) < 1e-30);
    }
}

TEST_CASE("small-depth weights follow the leading-order expansion") {
    const double lambda = 0.2;
    const auto fw = floquet_weights(ModulationScheme::sinusoidal(10, 1, lambda), 6);
    CHECK(std::abs(fw.weight(0) - 0.98) < 1e-3);
    CHECK(std::abs(fw.weight(1) - 0.01) < 1e-4);
    CHECK(std::abs(fw.weight(-1) - 0.01) < 1e-4);
}

TEST_CASE("small-depth error scales as lambda^4") {
    // Empirical constants frozen from the expansion J0^2 = 1 - l^2/2 + 3l^4/32 and J1^2 = l^2/4 - l^4/16.
    const double C0 = 0.1, C1 = 0.07;
    for (double lambda : {0.05, 0.1, 0.2, 0.3}) {
        const auto fw = floquet_weights(ModulationScheme::sinusoidal(10, 1, lambda), 8);
        const double l4 = std::pow(lambda, 4);
        CHECK(std::abs(fw.weight(0) - (1 - lambda * lambda / 2)) <= C0 * l4);
        CHECK(std::abs(fw.weight(1) - lambda * lambda / 4) <= C1 * l4);
    }
}

TEST_CASE("sinusoidal quadrature matches squared Bessel functions") {
    for (double lambda : {0.1, 0.5, 1.0, 2.0}) {
        const auto fw = floquet_amplitudes(ModulationScheme::sinusoidal(3, 1.5, lambda), 8);
        for (int m = -8; m <= 8; ++m) {
            const double j = std::cyl_bessel_j(std::abs(m), lambda);
            CHECK(std::abs(fw.weight(m) - j * j) < 1e-9);
        }
    }
    const auto one = floquet_amplitudes(ModulationScheme::sinusoidal(3, 1.5, 1.0), 4);
    CHECK(one.weight(0) == doctest::Approx(0.58552).epsilon(1e-5));
}

TEST_CASE("pi-flip weights are the odd square-wave harmonics") {
    const auto fw = floquet_amplitudes(ModulationScheme::pi_flip(10, 1), 9);
    CHECK(fw.weight(0) == 0.0);
    CHECK(fw.weight(1) == doctest::Approx(0.40528).epsilon(1e-5));
    for (int m = -9; m <= 9; ++m) {
        const double expected = (m % 2 != 0) ? std::pow(2.0 / (kPi * m), 2) : 0.0;
        CHECK(std::abs(fw.weight(m) - expected) < 1e-15);
    }
}

TEST_CASE("pi-flip closed form agrees with direct quadrature of the square wave") {
    const auto scheme = ModulationScheme::pi_flip(10, 1);
    const int N = 1 << 16;
    for (int m : {-3, -1, 0, 1, 2, 5}) {
        std::complex<double> acc = 0.0;
        // Midpoint rule avoids sampling the jumps.
        for (int k = 0; k < N; ++k) {
            const double x = 2 * kPi * (k + 0.5) / N;
            acc += phase_factor(scheme, x) * std::polar(1.0, -m * x);
        }
        acc /= N;
        CHECK(std::abs(std::norm(acc) - floquet_amplitudes(scheme, 5).weight(m)) < 1e-8);
    }
}

TEST_CASE("amplitudes reconstruct the phase factor") {
    const auto scheme = ModulationScheme::sinusoidal(5, 2, 0.7);
    const auto fw = floquet_amplitudes(scheme, 20);
    for (double t : {0.0, 0.3, 1.1, 2.9}) {
        std::complex<double> sum = 0.0;
        for (int m = -20; m <= 20; ++m) sum += fw.amplitude(m) * std::polar(1.0, m * scheme.delta * t);
        CHECK(std::abs(sum - phase_factor(scheme, t)) < 1e-12);
    }
}

TEST_CASE("Parseval mass grows monotonically toward one") {
    for (double lambda : {0.3, 1.0, 2.5}) {
        const auto scheme = ModulationScheme::sinusoidal(10, 1, lambda);
        double prev = 0.0;
        for (int M = 1; M <= 12; ++M) {
            const double mass = floquet_amplitudes(scheme, M).total_mass();
            CHECK(mass >= prev - 1e-15);
            CHECK(mass <= 1.0 + 1e-12);
            prev = mass;
        }
        CHECK(prev > 1 - 1e-9);
    }
}

TEST_CASE("symmetric modulations have P_m = P_-m") {
    for (const auto& s : {ModulationScheme::sinusoidal(10, 1, 0.9), ModulationScheme::pi_flip(10, 1)}) {
        const auto fw = floquet_amplitudes(s, 7);
        for (int m = 1; m <= 7; ++m) CHECK(std::abs(fw.weight(m) - fw.weight(-m)) < 1e-15);
    }
}

TEST_CASE("default truncation meets the mass tolerance for sinusoidal schemes") {
    for (double lambda : {0.1, 0.5, 1.0, 2.0}) {
        const auto s = ModulationScheme::sinusoidal(10, 1, lambda);
        const int M = default_truncation(s);
        CHECK(M >= 1);
        CHECK_NOTHROW(floquet_weights(s, M));
        if (M > 1) CHECK_THROWS_AS(floquet_weights(s, M - 1), MassDeficitError);
    }
    CHECK(default_truncation(ModulationScheme::pi_flip(10, 1)) == 7);
}

TEST_CASE("insufficient truncation raises a mass deficit") {
    CHECK_THROWS_AS(floquet_weights(ModulationScheme::sinusoidal(10, 1, 2.0), 1), MassDeficitError);
    CHECK_THROWS_AS(floquet_weights(ModulationScheme::pi_flip(10, 1), 7), MassDeficitError);
    CHECK_NOTHROW(floquet_weights(ModulationScheme::pi_flip(10, 1), 7, 0.06));
}

TEST_CASE("tabulated profile reproduces the sinusoidal weights") {
    const double lambda = 0.8;
    const auto sin_scheme = ModulationScheme::sinusoidal(10, 1, lambda);
    std::vector<cplx> profile(256);
    for (std::size_t k = 0; k < profile.size(); ++k) {
        profile[k] = phase_factor(sin_scheme, 2 * kPi * static_cast<double>(k) / 256.0);
    }
    const auto tab = ModulationScheme::tabulated(10, 1, profile);
    const auto a = floquet_amplitudes(tab, 6);
    const auto b = floquet_amplitudes(sin_scheme, 6);
    for (int m = -6; m <= 6; ++m) CHECK(std::abs(a.weight(m) - b.weight(m)) < 1e-12);
    CHECK(std::abs(phase_factor(tab, 0.37) - phase_factor(sin_scheme, 0.37)) < 1e-3);
}

TEST_CASE("invalid schemes are rejected") {
    CHECK_THROWS_AS(ModulationScheme::sinusoidal(10, 0.0, 0.1), InvalidScheme);
    CHECK_THROWS_AS(ModulationScheme::sinusoidal(10, 1, -0.1), InvalidScheme);
    CHECK_THROWS_AS(ModulationScheme::sinusoidal(-1, 1, 0.1), InvalidScheme);
    CHECK_THROWS_AS(ModulationScheme::tabulated(10, 1, {cplx(1, 0), cplx(0.5, 0)}), InvalidScheme);
    CHECK_THROWS_AS(floquet_weights(ModulationScheme::sinusoidal(10, 1, 0.1), 0), InvalidArgument);
}

TEST_CASE("sideband frequencies") {
    const auto s1 = sideband_frequencies(ModulationScheme::sinusoidal(10, 4, 0.1), 1);
    REQUIRE(s1.size() == 3);
    CHECK(s1[0] == Sideband{-1, 6});
    CHECK(s1[1] == Sideband{0, 10});
    CHECK(s1[2] == Sideband{1, 14});

    const auto s2 = sideband_frequencies(ModulationScheme::sinusoidal(10, 0.1, 0.1), 1);
    CHECK(s2[0].omega == doctest::Approx(9.9));
    CHECK(s2[2].omega == doctest::Approx(10.1));

    CHECK_THROWS_AS(sideband_frequencies(ModulationScheme::pi_flip(10, 4), 3, 1e-6), NegativeSidebandError);
    // Even harmonics of the square wave carry no weight, so m = -3 is the first offender.
    CHECK_NOTHROW(sideband_frequencies(ModulationScheme::pi_flip(10, 4), 2, 1e-6));
}

TEST_CASE("weights are deterministic") {
    const auto s = ModulationScheme::sinusoidal(10, 1.3, 1.7);
    const auto a = floquet_amplitudes(s, 9);
    const auto b = floquet_amplitudes(s, 9);
    CHECK(a.weights == b.weights);
}
