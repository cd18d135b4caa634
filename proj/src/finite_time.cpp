// finite_time.cpp — Golden-section search for the maximum-power modulation rate

#include "qhm/finite_time.hpp"

#include <cmath>
#include <vector>

#include "qhm/errors.hpp"

namespace qhm {

double curzon_ahlborn(double T_C, double T_H) {
    if (!(T_C > 0.0 && T_H >= T_C)) {
        throw DomainError("curzon_ahlborn needs 0 < T_C <= T_H");
    }
    return 1.0 - std::sqrt(T_C / T_H);
}

OptimumReport maximize_power(const DeltaObjective& objective, double lo, double hi, double T_C,
                             double T_H, const MaximizeOptions& opts) {
    if (!(lo >= 0.0 && hi > lo)) throw InvalidArgument("maximize_power: need 0 <= lo < hi");
    if (opts.scan_points < 3) throw InvalidArgument("maximize_power: scan_points must be >= 3");

    OptimumReport out;
    const int n = opts.scan_points;
    const double step = (hi - lo) / (n + 1);
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> gain(static_cast<std::size_t>(n), -kInf);
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + (i + 1) * step;
        try {
            const SteadyReport r = objective(xs[static_cast<std::size_t>(i)]);
            ++out.evaluations;
            if (r.mode == Mode::engine) gain[static_cast<std::size_t>(i)] = -r.P;
        } catch (const NumericalError&) {
            ++out.evaluations;
        }
    }

    int best = -1;
    int local_maxima = 0;
    for (int i = 0; i < n; ++i) {
        const double g = gain[static_cast<std::size_t>(i)];
        if (!std::isfinite(g)) continue;
        if (best < 0 || g > gain[static_cast<std::size_t>(best)]) best = i;
        const double left = i > 0 ? gain[static_cast<std::size_t>(i - 1)] : -kInf;
        const double right = i + 1 < n ? gain[static_cast<std::size_t>(i + 1)] : -kInf;
        if (g > left && g >= right) ++local_maxima;
    }
    if (best < 0) throw NoEngineWindow("maximize_power: no engine operation in the bracket");
    out.unimodal = local_maxima == 1;

    double a = best > 0 ? xs[static_cast<std::size_t>(best - 1)] : lo;
    double b = best + 1 < n ? xs[static_cast<std::size_t>(best + 1)] : hi;
    auto f = [&](double x) {
        ++out.evaluations;
        const SteadyReport r = objective(x);
        return -r.P;
    };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    const double width_tol = opts.rel_tol * hi;
    while (b - a > width_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }

    out.delta_max = 0.5 * (a + b);
    const SteadyReport r = objective(out.delta_max);
    ++out.evaluations;
    if (r.mode != Mode::engine) {
        throw NoEngineWindow("maximize_power: optimum is not an engine point");
    }
    out.P_max = -r.P;
    out.eta_at_max = r.figure_of_merit;
    out.eta_CA = curzon_ahlborn(T_C, T_H);
    out.exceeds_CA = out.eta_at_max > out.eta_CA;
    return out;
}

OptimumReport maximize_power(const MachineSpec& spec, double lo, double hi, const MaximizeOptions& opts) {
    spec.validate();
    auto objective = [&spec](double delta) { return steady_state(spec.with_delta(delta)); };
    return maximize_power(objective, lo, hi, spec.bathC.temperature, spec.bathH.temperature, opts);
}

Table1Row table1_row(Regime regime, double omega0, double T_C, double T_H) {
    if (regime == Regime::B) throw InvalidArgument("table1_row covers regimes A1 and A2");
    Table1Row row;
    row.regime = regime;
    row.omega0 = omega0;
    row.delta_cr = critical_delta(regime, omega0, T_C, T_H);
    row.delta_max = 0.5 * row.delta_cr;
    row.eta_max = regime == Regime::A1 ? 2.0 * (T_H - T_C) / (3.0 * T_H + T_C)
                                       : (T_H - T_C) / (T_H + T_C);
    row.eta_CA = curzon_ahlborn(T_C, T_H);
    row.exceeds_CA = row.eta_max > row.eta_CA;
    return row;
}

} // namespace qhm
