// oracle.hpp — Time-domain non-Markovian rate integrator used to cross-check the Floquet steady state

#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qhm/floquet_engine.hpp"
#include "qhm/modulation.hpp"
#include "qhm/spectra.hpp"

namespace qhm::oracle {

// Phi(t) = int G(w) exp(-i w t) dw sampled on a time grid.
struct CorrelationFunction {
    std::vector<double> t;
    std::vector<cplx> phi;
    double memory_time{0.0};  // last grid time with |Phi| >= 1e-4 |Phi(0)|
    bool decayed{false};      // |Phi| fell below the threshold before the grid ended

    // Cubic interpolation on a uniform non-negative grid; Phi(-t) = conj(Phi(t))
    // and zero beyond the grid.
    cplx at(double time) const;
    double spacing() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

CorrelationFunction operator+(const CorrelationFunction& a, const CorrelationFunction& b);

// Piecewise-linear Filon quadrature: int G(w) exp(-i w t) dw with G linear
// between consecutive nodes. Exact for piecewise-linear G at every t.
std::vector<cplx> fourier_filon(const std::function<double(double)>& G,
                                std::span<const double> omega_nodes, std::span<const double> times);

struct CorrelationOptions {
    std::size_t omega_nodes{20001};
    bool energy_weighted{false};  // transform w G(w) instead of G(w)
};

// Frequency nodes covering the bath's support on both sides of zero, with
// jumps resolved by node pairs straddling each breakpoint.
std::vector<double> spectrum_nodes(const BathModel& bath, std::size_t count);

// Throws ConvergenceError when the spectrum has unbounded support.
CorrelationFunction bath_correlation(const BathModel& bath, std::span<const double> t_grid,
                                     const CorrelationOptions& opts = {});

struct RatePair {
    double R_e{0.0};
    double R_g{0.0};
};

// Instantaneous e->g and g->e rates with the history integral taken over
// [0, min(t, window)] by trapezoid on the correlation grid.
RatePair transition_rates(double t, const ModulationScheme& scheme, const CorrelationFunction& phi_total,
                          double window);

struct IntegratorOptions {
    double rho_ee0{0.0};
    int samples_per_period{64};
    int table_points_per_period{128};
    double window_factor{8.0};
    double local_tol{1e-10};
    std::size_t omega_nodes{20001};
    double max_memory_time{2.0e4};
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> rho_ee;
    std::vector<double> rho_gg;
    std::vector<double> R_e;
    std::vector<double> R_g;
    std::vector<double> J_C;  // instantaneous heat flow from C into the qubit
    std::vector<double> J_H;
    std::vector<double> S_bar;  // period-averaged polarization, one per full period
    double period{0.0};
    int samples_per_period{0};
    double memory_time{0.0};
    double window{0.0};
    double relaxation_rate{0.0};
    double max_trace_error{0.0};
    std::size_t negative_rate_samples{0};
    std::vector<std::string> warnings;
};

// Integrates the population rate equations with explicit adaptive
// Dormand-Prince steps of at most dt_max. Throws StiffnessError when the
// step size collapses.
Trajectory integrate_populations(const MachineSpec& spec, double t_end, double dt_max,
                                 const IntegratorOptions& opts = {});

struct CoarseGrained {
    double S_bar{0.0};
    double rho_ee{0.0};
    double J_C{0.0};
    double J_H{0.0};
    double P{0.0};
};

// Averages over the last full period; throws NotConverged if S_bar moved by
// 0.1% or more between the last two periods.
CoarseGrained coarse_grained_observables(const Trajectory& traj, const MachineSpec& spec);

// Whitespace-separated table: t rho_ee R_e R_g.
void write_trajectory(const Trajectory& traj, std::ostream& out);

} // namespace qhm::oracle
