// modulation.hpp — Periodic frequency modulations of the qubit and their Floquet weights

#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace qhm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Harmonics whose weight falls below this floor are dropped from every
// downstream harmonic sum.
inline constexpr double kWeightFloor = 1e-10;
inline constexpr double kDefaultMassTolerance = 1e-9;

enum class ModulationKind { sinusoidal, pi_flip, tabulated };

std::string_view to_string(ModulationKind kind);
ModulationKind modulation_kind_from_string(std::string_view name);

// Periodic modulation nu(t) of the qubit splitting about omega0, with period
// 2*pi/delta. The phase factor is eps(t) = exp(i * int_0^t (nu - omega0)).
//
//   sinusoidal: nu(t) = omega0 + lambda * delta * sin(delta * t)
//   pi_flip:    eps(t) = sign(sin(delta * t)), a unimodular square wave
//   tabulated:  eps(t) sampled uniformly over one period (phase_profile[k]
//               at t = k * period / N), linearly interpolated in phase
struct ModulationScheme {
    ModulationKind kind{ModulationKind::sinusoidal};
    double omega0{1.0};
    double delta{1.0};
    double lambda{0.0};
    std::vector<cplx> phase_profile;

    static ModulationScheme sinusoidal(double omega0, double delta, double lambda);
    static ModulationScheme pi_flip(double omega0, double delta);
    static ModulationScheme tabulated(double omega0, double delta, std::vector<cplx> profile);

    double period() const { return 2.0 * kPi / delta; }

    // Throws InvalidScheme when a type invariant is broken.
    void validate() const;

    // The same scheme at a different modulation rate.
    ModulationScheme with_delta(double new_delta) const;

    bool operator==(const ModulationScheme&) const = default;
};

// eps(t) for the scheme.
cplx phase_factor(const ModulationScheme& scheme, double t);

// Harmonic weights P_m = |eps_m|^2 for m in [-M, M], where
// eps(t) = sum_m eps_m exp(i m delta t), so that P_m weights the sideband
// omega0 + m*delta.
struct FloquetWeights {
    int truncation_M{0};
    std::vector<double> weights;      // index m + M
    std::vector<cplx> amplitudes;     // index m + M
    double mass_deficit{0.0};

    double weight(int m) const;
    cplx amplitude(int m) const;
    double total_mass() const { return 1.0 - mass_deficit; }
};

// Amplitudes and weights without the mass check.
FloquetWeights floquet_amplitudes(const ModulationScheme& scheme, int truncation_M);

// Weights with the mass check; throws MassDeficitError if
// sum_m P_m < 1 - tol at the given truncation.
FloquetWeights floquet_weights(const ModulationScheme& scheme, int truncation_M,
                               double tol = kDefaultMassTolerance);

// Smallest truncation meeting the mass tolerance for sinusoidal and
// tabulated schemes; 7 for pi_flip, whose square-wave tail decays only as
// 1/m^2 and cannot reach tight tolerances at any practical M.
int default_truncation(const ModulationScheme& scheme, double tol = kDefaultMassTolerance);

struct Sideband {
    int m{0};
    double omega{0.0};
    bool operator==(const Sideband&) const = default;
};

// All harmonics omega0 + m*delta for m in [-M, M], ascending in m. Throws
// NegativeSidebandError if a harmonic with weight >= weight_floor sits at a
// non-positive frequency.
std::vector<Sideband> sideband_frequencies(const ModulationScheme& scheme, int truncation_M,
                                           double weight_floor = kWeightFloor);

} // namespace qhm
