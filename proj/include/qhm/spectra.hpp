// spectra.hpp — KMS-consistent bath coupling spectra, filter modes and separation checks

#pragma once

#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qhm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class BathLabel { C, H };
enum class KmsMode { analytic, extend_from_positive };
enum class Regime { A1, A2, B };

std::string_view to_string(BathLabel label);
std::string_view to_string(KmsMode mode);
std::string_view to_string(Regime regime);
KmsMode kms_mode_from_string(std::string_view name);
Regime regime_from_string(std::string_view name);

class SpectrumShape;
struct LambShiftCache;

// G(w) = f (w/w_D)^3 / (1 - exp(-w/T)) for |w| < w_D, zero beyond.
struct DebyeShape {
    double f{1.0};
    double omega_D{1.0};
    bool operator==(const DebyeShape&) const = default;
};

// G(w) = A w^3 (n(w) + 1) with no cutoff.
struct CubicShape {
    double A{1.0};
    bool operator==(const CubicShape&) const = default;
};

// G(w) = G0 on the open band (lo, hi) of the positive axis; hi may be infinite.
struct FlatShape {
    double G0{1.0};
    double lo{0.0};
    double hi{kInf};
    bool operator==(const FlatShape&) const = default;
};

// Inner spectrum seen through a harmonic filter mode of coupling rate gamma_f
// and frequency omega_f (skewed Lorentzian). lamb_cutoff bounds the Lamb-shift
// integral for inner spectra without a natural cutoff.
struct FilteredShape {
    std::shared_ptr<const SpectrumShape> inner;
    double gamma_f{1.0};
    double omega_f{1.0};
    double lamb_cutoff{kInf};
    std::shared_ptr<LambShiftCache> cache;
    bool operator==(const FilteredShape& o) const;
};

// Linear interpolation of G on a strictly increasing positive-axis grid.
struct TabulatedShape {
    std::vector<double> omega;
    std::vector<double> G;
    std::string source;  // file the table was read from, if any
    bool operator==(const TabulatedShape&) const = default;
};

class SpectrumShape {
public:
    using Variant = std::variant<DebyeShape, CubicShape, FlatShape, FilteredShape, TabulatedShape>;

    SpectrumShape() : v_(FlatShape{0.0, 0.0, kInf}) {}
    explicit SpectrumShape(Variant v);

    static SpectrumShape debye(double f, double omega_D);
    static SpectrumShape cubic(double A);
    static SpectrumShape flat(double G0, double lo = 0.0, double hi = kInf);
    static SpectrumShape filtered(SpectrumShape inner, double gamma_f, double omega_f,
                                  double lamb_cutoff = kInf);
    static SpectrumShape tabulated(std::vector<double> omega, std::vector<double> G);
    // Two-column text file (omega, G), '#' comments, omega strictly increasing.
    static SpectrumShape load_tabulated(const std::filesystem::path& path);

    const Variant& variant() const { return v_; }
    std::string_view name() const;

    // G(omega) on the non-negative axis for a bath at temperature T.
    double positive_value(double omega, double T) const;

    bool has_analytic_kms() const;
    // Closed-form G(omega) for either sign (debye and cubic only).
    double analytic_value(double omega, double T) const;

    double support_lower() const;
    double support_upper() const;
    // Positive-axis points where G may jump.
    std::vector<double> breakpoints() const;

    void validate() const;

    bool operator==(const SpectrumShape& o) const { return v_ == o.v_; }

private:
    Variant v_;
};

struct BathModel {
    BathLabel label{BathLabel::C};
    double temperature{1.0};
    SpectrumShape spectrum;
    KmsMode kms_mode{KmsMode::extend_from_positive};

    // Analytic KMS where the shape supports it, positive-axis extension otherwise.
    static BathModel make(BathLabel label, double temperature, SpectrumShape spectrum);

    void validate() const;
    bool operator==(const BathModel&) const = default;
};

// G(omega) for any real omega; negative frequencies obey
// G(-w) = exp(-w/T) G(w).
double eval_spectrum(const BathModel& bath, double omega);

// Principal value of int_0^W G(w')/(omega - w') dw', with G the inner spectrum
// at temperature T and W the smaller of omega_max and the spectrum's support.
// Throws ConvergenceError for unbounded support without a cutoff.
double lamb_shift(const SpectrumShape& inner, double T, double omega, double omega_max = kInf);

// Filter-mode response on the positive axis.
double filtered_spectrum(const SpectrumShape& inner, double gamma_f, double omega_f, double T,
                         double omega, double lamb_cutoff = kInf);

struct SeparationResidual {
    std::string name;
    double value{0.0};
    bool satisfied{false};
};

struct SeparationReport {
    Regime regime{Regime::A1};
    double eta_tol{0.0};
    std::vector<SeparationResidual> residuals;
    bool satisfied() const;
};

// Ratios of unwanted to wanted couplings at the sidebands the regime relies
// on; each is flagged satisfied when below eta_tol. Never throws on violation.
SeparationReport check_spectral_separation(const BathModel& bathC, const BathModel& bathH,
                                           double omega0, double delta, Regime regime,
                                           double eta_tol);

} // namespace qhm
