// sweeps.cpp — Task drivers behind the command-line tool

#include "qhm/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include "qhm/errors.hpp"

namespace qhm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

SweepRow solve_point(const MachineSpec& machine, double delta) {
    SweepRow row;
    row.delta = delta;
    try {
        row.report = steady_state(machine.with_delta(delta));
    } catch (const Error& e) {
        row.report.w = row.report.J_C = row.report.J_H = row.report.P = row.report.sigma = kNaN;
        row.report.figure_of_merit = kNaN;
        row.report.mode = Mode::dud;
        row.error = e.what();
    }
    return row;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, unsigned threads) {
    cfg.validate();
    const std::vector<double> deltas = cfg.sweep.deltas();
    std::vector<SweepRow> rows(deltas.size());
    parallel_for(deltas.size(), threads, [&](std::size_t i) { rows[i] = solve_point(cfg.machine, deltas[i]); });
    return rows;
}

CriticalResult find_critical(const RunConfig& cfg, unsigned threads) {
    const std::vector<SweepRow> rows = run_sweep(cfg, threads);
    auto sign = [](double p) { return p > 0.0 ? 1 : (p < 0.0 ? -1 : 0); };

    CriticalResult out;
    const SweepRow* prev = nullptr;
    for (const SweepRow& r : rows) {
        if (!r.error.empty()) continue;
        if (sign(r.report.P) == 0) {
            out.delta_cr = out.bracket_lo = out.bracket_hi = r.delta;
            return out;
        }
        if (prev && sign(prev->report.P) != sign(r.report.P)) {
            double a = prev->delta;
            double b = r.delta;
            const int sa = sign(prev->report.P);
            while (b - a > cfg.tolerances.bisect_rel * 0.5 * (a + b)) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const int sm = sign(steady_state(cfg.machine.with_delta(mid)).P);
                ++out.iterations;
                if (sm == 0) {
                    a = b = mid;
                    break;
                }
                (sm == sa ? a : b) = mid;
            }
            out.bracket_lo = a;
            out.bracket_hi = b;
            out.delta_cr = 0.5 * (a + b);
            return out;
        }
        prev = &r;
    }
    throw NoSignChange("find_critical: power keeps one sign over [" + format_number(cfg.sweep.delta_min) + ", " +
                       format_number(cfg.sweep.delta_max) + "]");
}

OptimumReport run_optimize(const RunConfig& cfg) {
    cfg.validate();
    MaximizeOptions opts;
    opts.rel_tol = cfg.tolerances.optimize_rel;
    opts.scan_points = cfg.tolerances.optimize_scan_points;
    return maximize_power(cfg.machine, cfg.sweep.delta_min, cfg.sweep.delta_max, opts);
}

std::vector<SpectraRow> export_spectra(const RunConfig& cfg) {
    cfg.validate();
    const MachineSpec& mach = cfg.machine;
    std::vector<double> cuts = mach.bathC.spectrum.breakpoints();
    for (double b : mach.bathH.spectrum.breakpoints()) cuts.push_back(b);
    for (double b : std::vector<double>(cuts)) cuts.push_back(-b);

    std::vector<SpectraRow> rows;
    const int n = cfg.spectra.n_points;
    double prev = -kInf;
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        const double w = i + 1 == n ? cfg.spectra.omega_max
                                    : cfg.spectra.omega_min + f * (cfg.spectra.omega_max - cfg.spectra.omega_min);
        SpectraRow r;
        r.omega = w;
        r.G_C = eval_spectrum(mach.bathC, w);
        r.G_H = eval_spectrum(mach.bathH, w);
        if (i > 0) {
            for (double c : cuts) {
                if (c > prev && c <= w) r.breakpoint = true;
            }
        }
        prev = w;
        rows.push_back(r);
    }

    const int M = mach.effective_truncation();
    const FloquetWeights fw = floquet_amplitudes(mach.modulation, M);
    for (int m = -M; m <= M; ++m) {
        const double p = fw.weight(m);
        if (p < kWeightFloor) continue;
        SpectraRow r;
        r.harmonic = true;
        r.m = m;
        r.P_m = p;
        r.omega = mach.omega0() + m * mach.delta();
        r.G_C = eval_spectrum(mach.bathC, r.omega);
        r.G_H = eval_spectrum(mach.bathH, r.omega);
        rows.push_back(r);
    }
    return rows;
}

OracleSummary run_oracle(const RunConfig& cfg) {
    cfg.validate();
    oracle::IntegratorOptions opts;
    opts.rho_ee0 = cfg.oracle.rho_ee0;
    opts.samples_per_period = cfg.oracle.samples_per_period;
    opts.omega_nodes = static_cast<std::size_t>(cfg.oracle.omega_nodes);
    opts.window_factor = cfg.oracle.window_factor;
    OracleSummary s;
    s.trajectory = oracle::integrate_populations(cfg.machine, cfg.oracle.t_end, cfg.oracle.dt_max, opts);
    s.coarse = oracle::coarse_grained_observables(s.trajectory, cfg.machine);
    s.floquet = steady_state(cfg.machine);
    s.S_floquet = (s.floquet.w - 1.0) / (2.0 * (s.floquet.w + 1.0));
    return s;
}

void write_header(std::ostream& out, const RunConfig& cfg, const std::string& table, std::uint64_t seed) {
    out << "# qhm " << table << '\n';
    out << "# tool_version: " << kToolVersion << '\n';
    out << "# config_hash: " << config_hash_hex(cfg) << '\n';
    out << "# seed: " << seed << '\n';
    out << "# units: hbar = k_B = 1\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "delta,w,J_C,J_H,P,sigma,mode,figure_of_merit,error\n";
    for (const SweepRow& r : rows) {
        const SteadyReport& s = r.report;
        out << format_number(r.delta) << ',' << format_number(s.w) << ',' << format_number(s.J_C) << ','
            << format_number(s.J_H) << ',' << format_number(s.P) << ',' << format_number(s.sigma) << ','
            << (r.error.empty() ? std::string(to_string(s.mode)) : std::string("error")) << ','
            << format_number(s.figure_of_merit) << ',' << csv_quote(r.error) << '\n';
    }
}

void write_critical_csv(std::ostream& out, const CriticalResult& r) {
    out << "delta_cr,bracket_lo,bracket_hi,iterations\n";
    out << format_number(r.delta_cr) << ',' << format_number(r.bracket_lo) << ',' << format_number(r.bracket_hi)
        << ',' << r.iterations << '\n';
}

void write_optimize_csv(std::ostream& out, const OptimumReport& r) {
    out << "delta_max,P_max,eta_at_max,eta_CA,exceeds_CA,unimodal,evaluations\n";
    out << format_number(r.delta_max) << ',' << format_number(r.P_max) << ',' << format_number(r.eta_at_max)
        << ',' << format_number(r.eta_CA) << ',' << (r.exceeds_CA ? "true" : "false") << ','
        << (r.unimodal ? "true" : "false") << ',' << r.evaluations << '\n';
}

void write_spectra_csv(std::ostream& out, const std::vector<SpectraRow>& rows) {
    out << "kind,omega,G_C,G_H,m,P_m,flag\n";
    for (const SpectraRow& r : rows) {
        out << (r.harmonic ? "harmonic" : "spectrum") << ',' << format_number(r.omega) << ','
            << format_number(r.G_C) << ',' << format_number(r.G_H) << ',';
        if (r.harmonic) {
            out << r.m << ',' << format_number(r.P_m) << ",\n";
        } else {
            out << ",," << (r.breakpoint ? "breakpoint" : "") << '\n';
        }
    }
}

void write_oracle_csv(std::ostream& out, const OracleSummary& s) {
    out << "quantity,oracle,floquet\n";
    out << "S_bar," << format_number(s.coarse.S_bar) << ',' << format_number(s.S_floquet) << '\n';
    out << "J_C," << format_number(s.coarse.J_C) << ',' << format_number(s.floquet.J_C) << '\n';
    out << "J_H," << format_number(s.coarse.J_H) << ',' << format_number(s.floquet.J_H) << '\n';
    out << "P," << format_number(s.coarse.P) << ',' << format_number(s.floquet.P) << '\n';
    out << "memory_time," << format_number(s.trajectory.memory_time) << ",\n";
    out << "relaxation_rate," << format_number(s.trajectory.relaxation_rate) << ",\n";
    out << "max_trace_error," << format_number(s.trajectory.max_trace_error) << ",\n";
    for (const std::string& w : s.trajectory.warnings) out << "# warning: " << w << '\n';
}

} // namespace qhm
