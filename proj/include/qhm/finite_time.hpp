// finite_time.hpp — Maximum-power operating point and Curzon-Ahlborn comparison

#pragma once

#include <functional>

#include "qhm/closed_forms.hpp"
#include "qhm/floquet_engine.hpp"

namespace qhm {

double curzon_ahlborn(double T_C, double T_H);

struct OptimumReport {
    double delta_max{0.0};
    double P_max{0.0};       // extracted power |P| at the optimum (engine mode asserted)
    double eta_at_max{0.0};
    double eta_CA{0.0};
    bool exceeds_CA{false};
    bool unimodal{true};     // the coarse pre-scan found a single interior maximum
    int evaluations{0};
};

struct MaximizeOptions {
    int scan_points{64};
    double rel_tol{1e-8};    // final bracket width relative to the upper bound
};

// Operating point at a given modulation rate.
using DeltaObjective = std::function<SteadyReport(double delta)>;

// Golden-section maximization of -P over delta in (lo, hi), restricted to
// engine points, after a coarse scan that locates the bracket. Throws
// NoEngineWindow if no scanned point runs as an engine.
OptimumReport maximize_power(const DeltaObjective& objective, double lo, double hi, double T_C,
                             double T_H, const MaximizeOptions& opts = {});
OptimumReport maximize_power(const MachineSpec& spec, double lo, double hi,
                             const MaximizeOptions& opts = {});

struct Table1Row {
    Regime regime{Regime::A1};
    double omega0{1.0};
    double delta_cr{0.0};
    double delta_max{0.0};
    double eta_max{0.0};
    double eta_CA{0.0};
    bool exceeds_CA{false};

    // Engine efficiency below the critical rate.
    double efficiency(double delta) const { return regime_efficiency(regime, omega0, delta); }
};

// High-temperature, flat-spectrum maximum-power row for A1 or A2.
Table1Row table1_row(Regime regime, double omega0, double T_C, double T_H);

} // namespace qhm
