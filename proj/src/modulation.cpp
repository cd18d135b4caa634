// modulation.cpp — Floquet harmonic weights by periodic quadrature

#include "qhm/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhm/errors.hpp"

namespace qhm {

namespace {

constexpr double kUnimodularTol = 1e-12;
constexpr double kRefineTol = 1e-12;
constexpr std::size_t kMaxNodes = std::size_t{1} << 22;

// Trapezoid estimate of eps_m on N uniform nodes over one period (x = delta*t).
template <class Eps>
std::vector<cplx> trapezoid_amplitudes(Eps&& eps_of_phase, int M, std::size_t N) {
    std::vector<cplx> samples(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double x = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(N);
        samples[k] = eps_of_phase(x);
    }
    std::vector<cplx> amps(static_cast<std::size_t>(2 * M + 1));
    for (int m = -M; m <= M; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < N; ++k) {
            const double x = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(N);
            acc += samples[k] * std::polar(1.0, -static_cast<double>(m) * x);
        }
        amps[static_cast<std::size_t>(m + M)] = acc / static_cast<double>(N);
    }
    return amps;
}

std::vector<cplx> sinusoidal_amplitudes(double lambda, int M) {
    auto eps = [lambda](double x) { return std::polar(1.0, lambda * (1.0 - std::cos(x))); };
    std::size_t N = 16;
    while (N <= static_cast<std::size_t>(4 * M + 4)) N *= 2;
    auto prev = trapezoid_amplitudes(eps, M, N);
    while (true) {
        N *= 2;
        if (N > kMaxNodes) {
            throw ConvergenceError("floquet_weights: trapezoid refinement did not converge");
        }
        auto next = trapezoid_amplitudes(eps, M, N);
        double change = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            change = std::max(change, std::abs(std::norm(next[i]) - std::norm(prev[i])));
        }
        prev = std::move(next);
        if (change < kRefineTol) break;
    }
    return prev;
}

// Square wave sign(sin x): eps_m = -2i/(pi m) for odd m, zero otherwise.
std::vector<cplx> pi_flip_amplitudes(int M) {
    std::vector<cplx> amps(static_cast<std::size_t>(2 * M + 1), cplx{0.0, 0.0});
    for (int m = -M; m <= M; ++m) {
        if (m % 2 != 0) {
            amps[static_cast<std::size_t>(m + M)] = cplx{0.0, -2.0 / (kPi * m)};
        }
    }
    return amps;
}

// Discrete Fourier coefficients of the sampled profile.
std::vector<cplx> tabulated_amplitudes(const std::vector<cplx>& profile, int M) {
    const std::size_t N = profile.size();
    std::vector<cplx> amps(static_cast<std::size_t>(2 * M + 1));
    for (int m = -M; m <= M; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < N; ++k) {
            const double x = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(N);
            acc += profile[k] * std::polar(1.0, -static_cast<double>(m) * x);
        }
        amps[static_cast<std::size_t>(m + M)] = acc / static_cast<double>(N);
    }
    return amps;
}

} // namespace

std::string_view to_string(ModulationKind kind) {
    switch (kind) {
    case ModulationKind::sinusoidal: return "sinusoidal";
    case ModulationKind::pi_flip: return "pi_flip";
    case ModulationKind::tabulated: return "tabulated";
    }
    return "unknown";
}

ModulationKind modulation_kind_from_string(std::string_view name) {
    if (name == "sinusoidal") return ModulationKind::sinusoidal;
    if (name == "pi_flip") return ModulationKind::pi_flip;
    if (name == "tabulated") return ModulationKind::tabulated;
    throw InvalidScheme("unknown modulation kind '" + std::string(name) + "'");
}

ModulationScheme ModulationScheme::sinusoidal(double omega0, double delta, double lambda) {
    ModulationScheme s;
    s.kind = ModulationKind::sinusoidal;
    s.omega0 = omega0;
    s.delta = delta;
    s.lambda = lambda;
    s.validate();
    return s;
}

ModulationScheme ModulationScheme::pi_flip(double omega0, double delta) {
    ModulationScheme s;
    s.kind = ModulationKind::pi_flip;
    s.omega0 = omega0;
    s.delta = delta;
    s.validate();
    return s;
}

ModulationScheme ModulationScheme::tabulated(double omega0, double delta, std::vector<cplx> profile) {
    ModulationScheme s;
    s.kind = ModulationKind::tabulated;
    s.omega0 = omega0;
    s.delta = delta;
    s.phase_profile = std::move(profile);
    s.validate();
    return s;
}

void ModulationScheme::validate() const {
    if (!(std::isfinite(omega0) && omega0 > 0.0)) {
        throw InvalidScheme("modulation: omega0 must be positive");
    }
    if (!(std::isfinite(delta) && delta > 0.0)) {
        throw InvalidScheme("modulation: delta must be positive");
    }
    if (kind == ModulationKind::sinusoidal && !(std::isfinite(lambda) && lambda >= 0.0)) {
        throw InvalidScheme("modulation: lambda must be >= 0");
    }
    if (kind == ModulationKind::tabulated) {
        if (phase_profile.size() < 2) {
            throw InvalidScheme("modulation: tabulated profile needs at least two samples");
        }
        for (const auto& v : phase_profile) {
            if (!(std::abs(std::abs(v) - 1.0) <= kUnimodularTol)) {
                throw InvalidScheme("modulation: tabulated profile is not unimodular");
            }
        }
    }
}

ModulationScheme ModulationScheme::with_delta(double new_delta) const {
    ModulationScheme s = *this;
    s.delta = new_delta;
    s.validate();
    return s;
}

cplx phase_factor(const ModulationScheme& scheme, double t) {
    const double x = scheme.delta * t;
    switch (scheme.kind) {
    case ModulationKind::sinusoidal:
        return std::polar(1.0, scheme.lambda * (1.0 - std::cos(x)));
    case ModulationKind::pi_flip: {
        const double s = std::sin(x);
        return cplx{s >= 0.0 ? 1.0 : -1.0, 0.0};
    }
    case ModulationKind::tabulated: {
        const auto& p = scheme.phase_profile;
        const double N = static_cast<double>(p.size());
        double u = x / (2.0 * kPi);
        u -= std::floor(u);
        const double pos = u * N;
        const auto k = static_cast<std::size_t>(std::min(std::floor(pos), N - 1.0));
        const double frac = pos - static_cast<double>(k);
        const cplx a = p[k];
        const cplx b = p[(k + 1) % p.size()];
        return a * std::polar(1.0, frac * std::arg(b / a));
    }
    }
    return {1.0, 0.0};
}

double FloquetWeights::weight(int m) const {
    if (m < -truncation_M || m > truncation_M) return 0.0;
    return weights[static_cast<std::size_t>(m + truncation_M)];
}

cplx FloquetWeights::amplitude(int m) const {
    if (m < -truncation_M || m > truncation_M) return {0.0, 0.0};
    return amplitudes[static_cast<std::size_t>(m + truncation_M)];
}

FloquetWeights floquet_amplitudes(const ModulationScheme& scheme, int truncation_M) {
    scheme.validate();
    if (truncation_M < 1) {
        throw InvalidArgument("floquet_weights: truncation_M must be >= 1");
    }
    FloquetWeights fw;
    fw.truncation_M = truncation_M;
    switch (scheme.kind) {
    case ModulationKind::sinusoidal:
        fw.amplitudes = sinusoidal_amplitudes(scheme.lambda, truncation_M);
        break;
    case ModulationKind::pi_flip:
        fw.amplitudes = pi_flip_amplitudes(truncation_M);
        break;
    case ModulationKind::tabulated:
        fw.amplitudes = tabulated_amplitudes(scheme.phase_profile, truncation_M);
        break;
    }
    fw.weights.resize(fw.amplitudes.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < fw.amplitudes.size(); ++i) {
        fw.weights[i] = std::min(1.0, std::norm(fw.amplitudes[i]));
        mass += fw.weights[i];
    }
    fw.mass_deficit = 1.0 - mass;
    return fw;
}

FloquetWeights floquet_weights(const ModulationScheme& scheme, int truncation_M, double tol) {
    FloquetWeights fw = floquet_amplitudes(scheme, truncation_M);
    if (fw.mass_deficit > tol) {
        throw MassDeficitError("floquet_weights: harmonic mass " + std::to_string(fw.total_mass()) +
                               " at M=" + std::to_string(truncation_M) +
                               " is below 1 - tol; increase the truncation");
    }
    return fw;
}

int default_truncation(const ModulationScheme& scheme, double tol) {
    scheme.validate();
    int max_M = 256;
    switch (scheme.kind) {
    case ModulationKind::pi_flip:
        return 7;
    case ModulationKind::tabulated:
        max_M = std::max(1, static_cast<int>((scheme.phase_profile.size() - 1) / 2));
        break;
    case ModulationKind::sinusoidal:
        break;
    }
    for (int M = 1; M <= max_M; ++M) {
        if (floquet_amplitudes(scheme, M).mass_deficit <= tol) return M;
    }
    return max_M;
}

std::vector<Sideband> sideband_frequencies(const ModulationScheme& scheme, int truncation_M,
                                           double weight_floor) {
    const FloquetWeights fw = floquet_amplitudes(scheme, truncation_M);
    std::vector<Sideband> out;
    out.reserve(static_cast<std::size_t>(2 * truncation_M + 1));
    for (int m = -truncation_M; m <= truncation_M; ++m) {
        const double omega = scheme.omega0 + m * scheme.delta;
        if (omega <= 0.0 && fw.weight(m) >= weight_floor) {
            throw NegativeSidebandError("sideband m=" + std::to_string(m) + " at omega=" +
                                        std::to_string(omega) + " is not positive");
        }
        out.push_back({m, omega});
    }
    return out;
}

} // namespace qhm
