// spectra.cpp — Bath coupling spectra, principal-value Lamb shift and filter modes

#include "qhm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qhm/errors.hpp"
#include "qhm/modulation.hpp"

namespace qhm {

struct LambShiftCache {
    std::mutex mutex;
    std::map<std::pair<double, double>, double> values;  // (omega, T) -> shift
};

namespace {

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// w^3 / (1 - exp(-w/T)), valid for either sign of w.
double cubic_thermal(double omega, double T) {
    if (omega == 0.0) return 0.0;
    return omega * omega * omega / (-std::expm1(-omega / T));
}

double integrate_piece(const auto& f, double a, double b) {
    // Deeper bisection can amplify roundoff in the subtracted integrand, so the
    // shallowest depth that meets the accuracy target wins.
    for (unsigned depth : {4U, 8U, 12U, 15U}) {
        double err = 0.0;
        double l1 = 0.0;
        const double value =
            boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, 1e-11, &err, &l1);
        if (std::isfinite(value) && err <= 1e-7 * l1 + 1e-300) return value;
    }
    throw ConvergenceError("lamb_shift: quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
}

double lorentzian_response(double gamma_f, double omega_f, double g, double shift, double omega) {
    const double width = kPi * g;
    const double detuning = omega - (omega_f + shift);
    return (gamma_f / kPi) * width * width / (detuning * detuning + width * width);
}

} // namespace

bool FilteredShape::operator==(const FilteredShape& o) const {
    const bool same_inner = (inner && o.inner) ? (*inner == *o.inner) : (inner == o.inner);
    return same_inner && gamma_f == o.gamma_f && omega_f == o.omega_f && lamb_cutoff == o.lamb_cutoff;
}

std::string_view to_string(BathLabel label) { return label == BathLabel::C ? "C" : "H"; }

std::string_view to_string(KmsMode mode) {
    return mode == KmsMode::analytic ? "analytic" : "extend_from_positive";
}

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::A1: return "A1";
    case Regime::A2: return "A2";
    case Regime::B: return "B";
    }
    return "?";
}

KmsMode kms_mode_from_string(std::string_view name) {
    if (name == "analytic") return KmsMode::analytic;
    if (name == "extend_from_positive") return KmsMode::extend_from_positive;
    throw InvalidArgument("unknown kms_mode '" + std::string(name) + "'");
}

Regime regime_from_string(std::string_view name) {
    if (name == "A1") return Regime::A1;
    if (name == "A2") return Regime::A2;
    if (name == "B") return Regime::B;
    throw InvalidArgument("unknown regime '" + std::string(name) + "'");
}

SpectrumShape::SpectrumShape(Variant v) : v_(std::move(v)) { validate(); }

SpectrumShape SpectrumShape::debye(double f, double omega_D) { return SpectrumShape(DebyeShape{f, omega_D}); }

SpectrumShape SpectrumShape::cubic(double A) { return SpectrumShape(CubicShape{A}); }

SpectrumShape SpectrumShape::flat(double G0, double lo, double hi) {
    return SpectrumShape(FlatShape{G0, lo, hi});
}

SpectrumShape SpectrumShape::filtered(SpectrumShape inner, double gamma_f, double omega_f,
                                      double lamb_cutoff) {
    FilteredShape fs;
    fs.inner = std::make_shared<const SpectrumShape>(std::move(inner));
    fs.gamma_f = gamma_f;
    fs.omega_f = omega_f;
    fs.lamb_cutoff = lamb_cutoff;
    fs.cache = std::make_shared<LambShiftCache>();
    return SpectrumShape(std::move(fs));
}

SpectrumShape SpectrumShape::tabulated(std::vector<double> omega, std::vector<double> G) {
    return SpectrumShape(TabulatedShape{std::move(omega), std::move(G), {}});
}

SpectrumShape SpectrumShape::load_tabulated(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spectrum table '" + path.string() + "'");
    TabulatedShape t;
    t.source = path.string();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double w = 0.0;
        double g = 0.0;
        if (!(ls >> w)) continue;
        if (!(ls >> g)) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
        }
        t.omega.push_back(w);
        t.G.push_back(g);
    }
    try {
        return SpectrumShape(std::move(t));
    } catch (const InvalidArgument& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string_view SpectrumShape::name() const {
    return std::visit(overloaded{
                          [](const DebyeShape&) { return std::string_view("debye"); },
                          [](const CubicShape&) { return std::string_view("cubic"); },
                          [](const FlatShape&) { return std::string_view("flat"); },
                          [](const FilteredShape&) { return std::string_view("filtered"); },
                          [](const TabulatedShape&) { return std::string_view("tabulated"); },
                      },
                      v_);
}

void SpectrumShape::validate() const {
    std::visit(overloaded{
                   [](const DebyeShape& s) {
                       if (!(s.f > 0.0 && s.omega_D > 0.0)) {
                           throw InvalidArgument("debye spectrum needs f > 0 and omega_D > 0");
                       }
                   },
                   [](const CubicShape& s) {
                       if (!(s.A >= 0.0 && std::isfinite(s.A))) {
                           throw InvalidArgument("cubic spectrum needs A >= 0");
                       }
                   },
                   [](const FlatShape& s) {
                       if (!(s.G0 >= 0.0 && std::isfinite(s.G0) && s.lo >= 0.0 && s.hi > s.lo)) {
                           throw InvalidArgument("flat spectrum needs G0 >= 0 and 0 <= lo < hi");
                       }
                   },
                   [](const FilteredShape& s) {
                       if (!s.inner) throw InvalidArgument("filtered spectrum needs an inner spectrum");
                       if (!(s.gamma_f > 0.0 && s.omega_f > 0.0)) {
                           throw InvalidArgument("filtered spectrum needs gamma_f > 0 and omega_f > 0");
                       }
                       if (!(s.lamb_cutoff > 0.0)) {
                           throw InvalidArgument("filtered spectrum needs lamb_cutoff > 0");
                       }
                   },
                   [](const TabulatedShape& s) {
                       if (s.omega.size() < 2 || s.omega.size() != s.G.size()) {
                           throw InvalidArgument("tabulated spectrum needs >= 2 (omega, G) rows");
                       }
                       if (s.omega.front() < 0.0) {
                           throw InvalidArgument("tabulated spectrum covers the positive axis only");
                       }
                       for (std::size_t i = 0; i < s.omega.size(); ++i) {
                           if (i > 0 && !(s.omega[i] > s.omega[i - 1])) {
                               throw InvalidArgument("tabulated omega must be strictly increasing");
                           }
                           if (!(s.G[i] >= 0.0 && std::isfinite(s.G[i]))) {
                               throw InvalidArgument("tabulated G must be finite and >= 0");
                           }
                       }
                   },
               },
               v_);
}

bool SpectrumShape::has_analytic_kms() const {
    return std::holds_alternative<DebyeShape>(v_) || std::holds_alternative<CubicShape>(v_);
}

double SpectrumShape::analytic_value(double omega, double T) const {
    if (const auto* d = std::get_if<DebyeShape>(&v_)) {
        if (std::abs(omega) >= d->omega_D) return 0.0;
        const double s = 1.0 / d->omega_D;
        return d->f * s * s * s * cubic_thermal(omega, T);
    }
    if (const auto* c = std::get_if<CubicShape>(&v_)) {
        return c->A * cubic_thermal(omega, T);
    }
    throw InvalidArgument("spectrum '" + std::string(name()) + "' has no analytic negative branch");
}

double SpectrumShape::positive_value(double omega, double T) const {
    if (omega < 0.0) throw DomainError("positive_value called with negative omega");
    return std::visit(
        overloaded{
            [&](const DebyeShape&) { return analytic_value(omega, T); },
            [&](const CubicShape&) { return analytic_value(omega, T); },
            [&](const FlatShape& s) { return (omega > s.lo && omega < s.hi) ? s.G0 : 0.0; },
            [&](const FilteredShape& s) {
                const double g = s.inner->positive_value(omega, T);
                if (g <= 0.0) return 0.0;
                if (omega == s.inner->support_lower() ||
                    omega == std::min(s.lamb_cutoff, s.inner->support_upper())) {
                    return 0.0;
                }
                double shift = 0.0;
                const auto key = std::make_pair(omega, T);
                bool cached = false;
                {
                    std::lock_guard<std::mutex> lock(s.cache->mutex);
                    auto it = s.cache->values.find(key);
                    if (it != s.cache->values.end()) {
                        shift = it->second;
                        cached = true;
                    }
                }
                if (!cached) {
                    shift = lamb_shift(*s.inner, T, omega, s.lamb_cutoff);
                    std::lock_guard<std::mutex> lock(s.cache->mutex);
                    s.cache->values.emplace(key, shift);
                }
                return lorentzian_response(s.gamma_f, s.omega_f, g, shift, omega);
            },
            [&](const TabulatedShape& s) {
                if (omega < s.omega.front() || omega > s.omega.back()) {
                    throw DomainError("omega=" + std::to_string(omega) + " outside tabulated grid [" +
                                      std::to_string(s.omega.front()) + ", " +
                                      std::to_string(s.omega.back()) + "]");
                }
                auto it = std::upper_bound(s.omega.begin(), s.omega.end(), omega);
                if (it == s.omega.end()) return s.G.back();
                const auto i = static_cast<std::size_t>(it - s.omega.begin());
                const double t = (omega - s.omega[i - 1]) / (s.omega[i] - s.omega[i - 1]);
                return (1.0 - t) * s.G[i - 1] + t * s.G[i];
            },
        },
        v_);
}

double SpectrumShape::support_lower() const {
    return std::visit(overloaded{
                          [](const FlatShape& s) { return s.lo; },
                          [](const FilteredShape& s) { return s.inner->support_lower(); },
                          [](const TabulatedShape& s) { return s.omega.front(); },
                          [](const auto&) { return 0.0; },
                      },
                      v_);
}

double SpectrumShape::support_upper() const {
    return std::visit(overloaded{
                          [](const DebyeShape& s) { return s.omega_D; },
                          [](const CubicShape&) { return kInf; },
                          [](const FlatShape& s) { return s.hi; },
                          [](const FilteredShape& s) { return s.inner->support_upper(); },
                          [](const TabulatedShape& s) { return s.omega.back(); },
                      },
                      v_);
}

std::vector<double> SpectrumShape::breakpoints() const {
    return std::visit(overloaded{
                          [](const DebyeShape& s) { return std::vector<double>{s.omega_D}; },
                          [](const CubicShape&) { return std::vector<double>{}; },
                          [](const FlatShape& s) {
                              std::vector<double> b{s.lo};
                              if (std::isfinite(s.hi)) b.push_back(s.hi);
                              return b;
                          },
                          [](const FilteredShape& s) { return s.inner->breakpoints(); },
                          [](const TabulatedShape& s) {
                              return std::vector<double>{s.omega.front(), s.omega.back()};
                          },
                      },
                      v_);
}

BathModel BathModel::make(BathLabel label, double temperature, SpectrumShape spectrum) {
    BathModel b;
    b.label = label;
    b.temperature = temperature;
    b.kms_mode = spectrum.has_analytic_kms() ? KmsMode::analytic : KmsMode::extend_from_positive;
    b.spectrum = std::move(spectrum);
    b.validate();
    return b;
}

void BathModel::validate() const {
    if (!(temperature > 0.0 && std::isfinite(temperature))) {
        throw InvalidArgument("bath temperature must be positive");
    }
    spectrum.validate();
    if (kms_mode == KmsMode::analytic && !spectrum.has_analytic_kms()) {
        throw InvalidArgument("spectrum '" + std::string(spectrum.name()) +
                              "' supports only kms_mode extend_from_positive");
    }
}

double eval_spectrum(const BathModel& bath, double omega) {
    if (bath.kms_mode == KmsMode::analytic) {
        return bath.spectrum.analytic_value(omega, bath.temperature);
    }
    if (omega >= 0.0) return bath.spectrum.positive_value(omega, bath.temperature);
    return std::exp(omega / bath.temperature) * bath.spectrum.positive_value(-omega, bath.temperature);
}

double lamb_shift(const SpectrumShape& inner, double T, double omega, double omega_max) {
    const double lo = inner.support_lower();
    const double hi = std::min(omega_max, inner.support_upper());
    if (!std::isfinite(hi)) {
        throw ConvergenceError("lamb_shift: spectrum '" + std::string(inner.name()) +
                               "' has unbounded support; supply a cutoff");
    }
    if (!(hi > lo)) return 0.0;

    std::vector<double> nodes{lo, hi};
    for (double b : inner.breakpoints()) {
        if (b > lo && b < hi) nodes.push_back(b);
    }
    const bool inside = omega > lo && omega < hi;
    if (inside) nodes.push_back(omega);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    auto G = [&](double w) { return inner.positive_value(w, T); };
    const double g_at = inside ? G(omega) : 0.0;

    // The subtraction G(w') - G(omega) removes the pole; its integral is analytic.
    auto integrand = [&](double w) { return (G(w) - g_at) / (omega - w); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        total += integrate_piece(integrand, nodes[i], nodes[i + 1]);
    }
    if (g_at != 0.0) {
        total += g_at * std::log(std::abs((omega - lo) / (omega - hi)));
    }
    return total;
}

double filtered_spectrum(const SpectrumShape& inner, double gamma_f, double omega_f, double T,
                         double omega, double lamb_cutoff) {
    if (!(gamma_f > 0.0)) throw InvalidArgument("filtered_spectrum: gamma_f must be positive");
    const double g = inner.positive_value(omega, T);
    if (g <= 0.0) return 0.0;
    // At an edge of the Lamb-shift band the shift diverges logarithmically
    // and the response vanishes.
    if (omega == inner.support_lower() || omega == std::min(lamb_cutoff, inner.support_upper())) return 0.0;
    return lorentzian_response(gamma_f, omega_f, g, lamb_shift(inner, T, omega, lamb_cutoff), omega);
}

bool SeparationReport::satisfied() const {
    return std::all_of(residuals.begin(), residuals.end(),
                       [](const SeparationResidual& r) { return r.satisfied; });
}

SeparationReport check_spectral_separation(const BathModel& bathC, const BathModel& bathH,
                                           double omega0, double delta, Regime regime,
                                           double eta_tol) {
    auto gc = [&](double w) { return eval_spectrum(bathC, w); };
    auto gh = [&](double w) { return eval_spectrum(bathH, w); };
    auto ratio = [](double unwanted, double wanted) {
        if (unwanted == 0.0) return 0.0;
        if (wanted == 0.0) return kInf;
        return unwanted / wanted;
    };

    SeparationReport rep;
    rep.regime = regime;
    rep.eta_tol = eta_tol;
    auto add = [&](std::string name, double value) {
        rep.residuals.push_back({std::move(name), value, value < eta_tol});
    };
    const double up = omega0 + delta;
    const double down = omega0 - delta;
    switch (regime) {
    case Regime::A1:
        add("GC(w0+d)/GC(w0-d)", ratio(gc(up), gc(down)));
        add("GH(w0-d)/GH(w0+d)", ratio(gh(down), gh(up)));
        break;
    case Regime::A2:
        add("GC(w0+d)/GC(w0)", ratio(gc(up), gc(omega0)));
        add("GC(w0-d)/GC(w0)", ratio(gc(down), gc(omega0)));
        add("GH(w0)/GH(w0+d)", ratio(gh(omega0), gh(up)));
        add("GH(w0-d)/GH(w0+d)", ratio(gh(down), gh(up)));
        break;
    case Regime::B:
        add("GC(w0+d)/GH(w0+d)", ratio(gc(up), gh(up)));
        add("GH(w0-d)/GH(w0+d)", ratio(gh(down), gh(up)));
        add("GC(w0-d)/GH(w0+d)", ratio(gc(down), gh(up)));
        add("GC(w0+d)/GC(w0-d)", ratio(gc(up), gc(down)));
        break;
    }
    return rep;
}

} // namespace qhm
