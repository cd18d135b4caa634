// oracle.cpp — Filon correlation functions, memory-kernel rates and a Dormand-Prince population integrator

#include "qhm/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qhm/errors.hpp"

namespace qhm::oracle {

namespace {

constexpr double kDecayThreshold = 1e-4;

// int_0^1 (1-u) e^{-i th u} du and int_0^1 u e^{-i th u} du.
void filon_weights(double th, cplx& A, cplx& B) {
    const cplx I(0.0, 1.0);
    if (std::abs(th) < 0.05) {
        cplx e0(0.0), e1(0.0), term(1.0);
        double fact = 1.0;
        for (int n = 0; n <= 7; ++n) {
            if (n > 0) {
                term *= -I * th;
                fact *= n;
            }
            e0 += term / (fact * (n + 1));
            e1 += term / (fact * (n + 2));
        }
        B = e1;
        A = e0 - e1;
        return;
    }
    const cplx em = std::polar(1.0, -th);
    const cplx E0 = (1.0 - em) / (I * th);
    B = (E0 - em) / (I * th);
    A = E0 - B;
}

double threshold_time(const std::vector<double>& t, const std::vector<cplx>& phi, bool& decayed) {
    decayed = false;
    if (phi.empty()) return 0.0;
    const double ref = std::abs(phi.front());
    if (ref == 0.0) {
        decayed = true;
        return 0.0;
    }
    std::size_t last = 0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
        if (std::abs(phi[k]) >= kDecayThreshold * ref) last = k;
    }
    decayed = last + 1 < phi.size();
    return t[last];
}

cplx cubic_at(const std::vector<cplx>& v, double h, double x) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n == 1 || h <= 0.0) return v.front();
    const double pos = x / h;
    long k = static_cast<long>(std::floor(pos));
    const long last = static_cast<long>(n) - 1;
    if (k >= last) return pos <= static_cast<double>(last) + 1e-9 ? v.back() : cplx(0.0);
    long k0 = std::clamp(k - 1, 0L, std::max(0L, last - 3));
    if (last < 3) k0 = 0;
    const int npts = static_cast<int>(std::min<long>(4, last + 1));
    cplx out(0.0);
    for (int i = 0; i < npts; ++i) {
        double w = 1.0;
        const double xi = static_cast<double>(k0 + i);
        for (int j = 0; j < npts; ++j) {
            if (j == i) continue;
            const double xj = static_cast<double>(k0 + j);
            w *= (pos - xj) / (xi - xj);
        }
        out += w * v[static_cast<std::size_t>(k0 + i)];
    }
    return out;
}

// Per-time sample of the six history integrals derived from the kernels.
struct RateSample {
    double R_e{0.0};
    double R_g{0.0};
    double Ee_C{0.0};  // energy released into C per e->g transition rate unit
    double Eg_C{0.0};  // energy drawn from C per g->e transition rate unit
    double Ee_H{0.0};
    double Eg_H{0.0};
};

// Kernels on a uniform grid s_j = j*ds, j = 0..J, with the modulation
// sampled on the same grid over one period (n_s points).
struct KernelGrid {
    double ds{0.0};
    std::size_t n_period{0};
    std::vector<cplx> eps;  // eps(j*ds), j = 0..n_period-1
    std::vector<cplx> rot;  // exp(i omega0 s_j)
    std::vector<cplx> phi;  // Phi_C + Phi_H
    std::vector<cplx> psi_C;
    std::vector<cplx> psi_H;
};

// History integrals at t = n*ds with the window truncated at `window_steps`.
RateSample rate_sample(const KernelGrid& g, std::size_t n, std::size_t window_steps) {
    const std::size_t J = std::min(n, window_steps);
    const std::size_t P = g.n_period;
    const cplx eps_t = g.eps[n % P];
    cplx ie_phi(0.0), ig_phi(0.0), ie_c(0.0), ig_c(0.0), ie_h(0.0), ig_h(0.0);
    for (std::size_t j = 0; j <= J; ++j) {
        if (J == 0) break;
        const double w = (j == 0 || j == J) ? 0.5 : 1.0;
        const cplx e_past = g.eps[(n - j) % P];
        const cplx ae = w * g.rot[j] * std::conj(e_past);
        const cplx ag = w * std::conj(g.rot[j]) * e_past;
        ie_phi += ae * g.phi[j];
        ig_phi += ag * g.phi[j];
        ie_c += ae * g.psi_C[j];
        ig_c += ag * g.psi_C[j];
        ie_h += ae * g.psi_H[j];
        ig_h += ag * g.psi_H[j];
    }
    const double ds = g.ds;
    const cplx ce = eps_t * ds;
    const cplx cg = std::conj(eps_t) * ds;
    RateSample r;
    r.R_e = 2.0 * std::real(ce * ie_phi);
    r.R_g = 2.0 * std::real(cg * ig_phi);
    r.Ee_C = 2.0 * std::real(ce * ie_c);
    r.Eg_C = -2.0 * std::real(cg * ig_c);
    r.Ee_H = 2.0 * std::real(ce * ie_h);
    r.Eg_H = -2.0 * std::real(cg * ig_h);
    return r;
}

// Rates tabulated every `stride` kernel steps up to one period past the
// window; beyond that the rates repeat with the modulation period.
class RateTable {
public:
    RateTable(const KernelGrid& g, std::size_t window_steps, std::size_t stride)
        : h_(g.ds * static_cast<double>(stride)),
          per_(g.n_period / stride),
          start_((window_steps + stride - 1) / stride) {
        const std::size_t count = start_ + per_ + 1;
        rows_.resize(count);
        for (std::size_t k = 0; k < count; ++k) rows_[k] = rate_sample(g, k * stride, window_steps);
    }

    double periodic_start() const { return static_cast<double>(start_) * h_; }

    RateSample at(double t) const {
        const double pos = t / h_;
        long k = static_cast<long>(std::floor(pos));
        double frac = pos - static_cast<double>(k);
        const long s = static_cast<long>(start_);
        const long p = static_cast<long>(per_);
        if (k >= s + p) {
            const long shift = ((k - s) / p) * p;
            k -= shift;
        }
        std::array<RateSample, 4> pts;
        for (int i = 0; i < 4; ++i) pts[static_cast<std::size_t>(i)] = row(k - 1 + i);
        // Cubic Lagrange through k-1..k+2 at local coordinate frac in [0,1).
        const double x = frac;
        const double w0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
        const double w1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        const double w2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
        const double w3 = (x + 1.0) * x * (x - 1.0) / 6.0;
        auto mix = [&](double RateSample::*f) {
            return w0 * pts[0].*f + w1 * pts[1].*f + w2 * pts[2].*f + w3 * pts[3].*f;
        };
        RateSample r;
        r.R_e = mix(&RateSample::R_e);
        r.R_g = mix(&RateSample::R_g);
        r.Ee_C = mix(&RateSample::Ee_C);
        r.Eg_C = mix(&RateSample::Eg_C);
        r.Ee_H = mix(&RateSample::Ee_H);
        r.Eg_H = mix(&RateSample::Eg_H);
        return r;
    }

private:
    RateSample row(long k) const {
        if (k < 0) return RateSample{};  // rates vanish before the drive starts
        const long s = static_cast<long>(start_);
        const long p = static_cast<long>(per_);
        if (k > s + p) k -= p;
        return rows_[static_cast<std::size_t>(k)];
    }

    double h_;
    std::size_t per_;
    std::size_t start_;
    std::vector<RateSample> rows_;
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
    double ee{0.0};
    double gg{0.0};
};

State rhs(const RateTable& table, double t, const State& y) {
    const RateSample r = table.at(t);
    const double flow = r.R_g * y.gg - r.R_e * y.ee;
    return {flow, -flow};
}

} // namespace

cplx CorrelationFunction::at(double time) const {
    if (time < 0.0) return std::conj(at(-time));
    return cubic_at(phi, spacing(), time);
}

CorrelationFunction operator+(const CorrelationFunction& a, const CorrelationFunction& b) {
    if (a.t != b.t) throw InvalidArgument("correlation functions sampled on different grids");
    CorrelationFunction out;
    out.t = a.t;
    out.phi.resize(a.phi.size());
    for (std::size_t k = 0; k < a.phi.size(); ++k) out.phi[k] = a.phi[k] + b.phi[k];
    out.memory_time = threshold_time(out.t, out.phi, out.decayed);
    return out;
}

std::vector<cplx> fourier_filon(const std::function<double(double)>& G, std::span<const double> omega_nodes,
                                std::span<const double> times) {
    const std::size_t n = omega_nodes.size();
    std::vector<cplx> out(times.size(), cplx(0.0));
    if (n < 2) return out;
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && !(omega_nodes[k] > omega_nodes[k - 1])) {
            throw InvalidArgument("fourier_filon: nodes must be strictly increasing");
        }
        g[k] = G(omega_nodes[k]);
        if (!std::isfinite(g[k])) throw ConvergenceError("fourier_filon: non-finite spectrum sample");
    }
    for (std::size_t it = 0; it < times.size(); ++it) {
        const double t = times[it];
        cplx acc(0.0);
        cplx phase = std::polar(1.0, -omega_nodes[0] * t);
        double last_h = -1.0;
        cplx A, B, step;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double h = omega_nodes[k + 1] - omega_nodes[k];
            if (h != last_h) {
                filon_weights(h * t, A, B);
                step = std::polar(1.0, -h * t);
                last_h = h;
            }
            if (g[k] != 0.0 || g[k + 1] != 0.0) acc += phase * h * (g[k] * A + g[k + 1] * B);
            if ((k & 1023U) == 1023U) {
                phase = std::polar(1.0, -omega_nodes[k + 1] * t);
            } else {
                phase *= step;
            }
        }
        out[it] = acc;
    }
    return out;
}

std::vector<double> spectrum_nodes(const BathModel& bath, std::size_t count) {
    const double W = bath.spectrum.support_upper();
    if (!std::isfinite(W)) {
        throw ConvergenceError("bath_correlation: spectrum '" + std::string(bath.spectrum.name()) +
                               "' has unbounded support; supply a cutoff");
    }
    count = std::max<std::size_t>(count, 3);
    const double h = 2.0 * W / static_cast<double>(count - 1);
    std::vector<double> nodes;
    nodes.reserve(count + 16);
    for (std::size_t k = 0; k < count; ++k) nodes.push_back(-W + h * static_cast<double>(k));
    nodes.back() = W;
    const double gap = 1e-9 * W;
    std::vector<double> extra{0.0};
    for (double b : bath.spectrum.breakpoints()) {
        if (!(b > 0.0) || !(b < W)) continue;
        for (double s : {-b, b}) {
            extra.push_back(s - gap);
            extra.push_back(s + gap);
        }
    }
    // G is zero at the support edge itself, so a band ending there jumps.
    for (double s : {-W, W}) extra.push_back(s);
    extra.push_back(-W + gap);
    extra.push_back(W - gap);
    nodes.insert(nodes.end(), extra.begin(), extra.end());
    std::sort(nodes.begin(), nodes.end());
    std::vector<double> out;
    out.reserve(nodes.size());
    for (double x : nodes) {
        if (x < -W || x > W) continue;
        if (!out.empty() && x - out.back() < 0.25 * gap) continue;
        out.push_back(x);
    }
    return out;
}

CorrelationFunction bath_correlation(const BathModel& bath, std::span<const double> t_grid,
                                     const CorrelationOptions& opts) {
    bath.validate();
    const std::vector<double> nodes = spectrum_nodes(bath, opts.omega_nodes);
    const double W = nodes.back();
    auto G = [&](double w) {
        // The support edge is an open boundary; sampling it exactly would pick
        // up the band value at a point where G is defined as zero.
        if (std::abs(w) >= W) return 0.0;
        const double v = eval_spectrum(bath, w);
        return opts.energy_weighted ? w * v : v;
    };
    CorrelationFunction out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.phi = fourier_filon(G, nodes, t_grid);
    out.memory_time = threshold_time(out.t, out.phi, out.decayed);
    return out;
}

RatePair transition_rates(double t, const ModulationScheme& scheme, const CorrelationFunction& phi_total,
                          double window) {
    RatePair out;
    if (!(t > 0.0)) return out;
    const double ds = phi_total.spacing();
    if (!(ds > 0.0)) throw InvalidArgument("transition_rates: correlation grid needs two or more points");
    const double L = std::min({t, window, phi_total.t.back()});
    const std::size_t n_full = static_cast<std::size_t>(std::floor(L / ds + 1e-12));
    const cplx eps_t = phase_factor(scheme, t);
    cplx ie(0.0), ig(0.0);
    auto integrand = [&](double s, cplx phi) {
        const cplx e_past = phase_factor(scheme, t - s);
        const cplx rot = std::polar(1.0, scheme.omega0 * s);
        return std::pair<cplx, cplx>{rot * std::conj(e_past) * phi, std::conj(rot) * e_past * phi};
    };
    for (std::size_t j = 0; j < n_full; ++j) {
        const double sa = ds * static_cast<double>(j);
        const auto fa = integrand(sa, phi_total.phi[j]);
        const auto fb = integrand(sa + ds, phi_total.phi[j + 1]);
        ie += 0.5 * ds * (fa.first + fb.first);
        ig += 0.5 * ds * (fa.second + fb.second);
    }
    const double s_last = ds * static_cast<double>(n_full);
    if (L - s_last > 1e-12 * ds) {
        const auto fa = integrand(s_last, phi_total.phi[n_full]);
        const auto fb = integrand(L, phi_total.at(L));
        ie += 0.5 * (L - s_last) * (fa.first + fb.first);
        ig += 0.5 * (L - s_last) * (fa.second + fb.second);
    }
    out.R_e = 2.0 * std::real(eps_t * ie);
    out.R_g = 2.0 * std::real(std::conj(eps_t) * ig);
    return out;
}

Trajectory integrate_populations(const MachineSpec& spec, double t_end, double dt_max,
                                 const IntegratorOptions& opts) {
    spec.validate();
    if (!(t_end > 0.0 && dt_max > 0.0)) throw InvalidArgument("integrate_populations: t_end and dt_max must be > 0");
    if (!(opts.rho_ee0 >= 0.0 && opts.rho_ee0 <= 1.0)) throw InvalidArgument("integrate_populations: rho_ee0 outside [0, 1]");
    if (opts.samples_per_period < 4 || opts.table_points_per_period < 8) {
        throw InvalidArgument("integrate_populations: too few samples per period");
    }
    const ModulationScheme& scheme = spec.modulation;
    const double tau = scheme.period();

    // Kernel spacing: a multiple of the table resolution, fine enough to
    // resolve exp(i (omega0 - omega) s) across both spectra.
    const double W = std::max(spec.bathC.spectrum.support_upper(), spec.bathH.spectrum.support_upper());
    if (!std::isfinite(W)) {
        throw ConvergenceError("integrate_populations: spectra need bounded support");
    }
    const double nu_max = scheme.omega0 + W + scheme.delta;
    const std::size_t table_pts = static_cast<std::size_t>(opts.table_points_per_period);
    std::size_t stride = 1;
    while (tau / static_cast<double>(table_pts * stride) > kPi / (6.0 * nu_max)) stride *= 2;
    KernelGrid grid;
    grid.n_period = table_pts * stride;
    grid.ds = tau / static_cast<double>(grid.n_period);

    // Memory time from the total correlation, doubling the probe horizon
    // until the decay threshold is crossed well inside it.
    CorrelationOptions copt;
    copt.omega_nodes = opts.omega_nodes;
    double probe = std::max(8.0 * tau, 50.0 * grid.ds);
    double t_c = 0.0;
    for (;;) {
        const double h_probe = std::max(grid.ds, probe / 2000.0);
        std::vector<double> tp;
        for (double s = 0.0; s <= probe; s += h_probe) tp.push_back(s);
        const CorrelationFunction pc = bath_correlation(spec.bathC, tp, copt);
        const CorrelationFunction ph = bath_correlation(spec.bathH, tp, copt);
        const CorrelationFunction tot = pc + ph;
        if (std::abs(tot.phi.front()) == 0.0) throw DecoupledError("integrate_populations: both baths are empty");
        if (tot.memory_time < 0.5 * probe) {
            t_c = std::max(tot.memory_time + h_probe, grid.ds);
            break;
        }
        probe *= 2.0;
        if (probe > opts.max_memory_time) {
            throw ConvergenceError("integrate_populations: correlation does not decay within the memory limit");
        }
    }
    const double window = opts.window_factor * t_c;
    const std::size_t window_steps = static_cast<std::size_t>(std::ceil(window / grid.ds));

    std::vector<double> s_grid(window_steps + 1);
    for (std::size_t j = 0; j <= window_steps; ++j) s_grid[j] = grid.ds * static_cast<double>(j);
    const CorrelationFunction phi_C = bath_correlation(spec.bathC, s_grid, copt);
    const CorrelationFunction phi_H = bath_correlation(spec.bathH, s_grid, copt);
    grid.phi = (phi_C + phi_H).phi;
    copt.energy_weighted = true;
    grid.psi_C = bath_correlation(spec.bathC, s_grid, copt).phi;
    grid.psi_H = bath_correlation(spec.bathH, s_grid, copt).phi;
    grid.rot.resize(window_steps + 1);
    for (std::size_t j = 0; j <= window_steps; ++j) grid.rot[j] = std::polar(1.0, scheme.omega0 * s_grid[j]);
    grid.eps.resize(grid.n_period);
    for (std::size_t j = 0; j < grid.n_period; ++j) grid.eps[j] = phase_factor(scheme, grid.ds * static_cast<double>(j));

    const RateTable table(grid, window_steps, stride);

    Trajectory tr;
    tr.period = tau;
    tr.samples_per_period = opts.samples_per_period;
    tr.memory_time = t_c;
    tr.window = window;

    const double dt_out = tau / opts.samples_per_period;
    const std::size_t n_out = static_cast<std::size_t>(std::floor(t_end / dt_out + 1e-9));
    auto record = [&](double t, const State& y) {
        const RateSample r = table.at(t);
        tr.t.push_back(t);
        tr.rho_ee.push_back(y.ee);
        tr.rho_gg.push_back(y.gg);
        tr.R_e.push_back(r.R_e);
        tr.R_g.push_back(r.R_g);
        tr.J_C.push_back(y.gg * r.Eg_C - y.ee * r.Ee_C);
        tr.J_H.push_back(y.gg * r.Eg_H - y.ee * r.Ee_H);
        if (r.R_e < 0.0 || r.R_g < 0.0) ++tr.negative_rate_samples;
        tr.max_trace_error = std::max(tr.max_trace_error, std::abs(y.ee + y.gg - 1.0));
    };

    State y{opts.rho_ee0, 1.0 - opts.rho_ee0};
    double t = 0.0;
    double h = std::min(dt_max, dt_out);
    const double tol = opts.local_tol;
    record(t, y);
    for (std::size_t i = 1; i <= n_out; ++i) {
        const double t_target = dt_out * static_cast<double>(i);
        while (t < t_target) {
            h = std::min({h, dt_max, t_target - t});
            if (h < 1e-14 * std::max(1.0, t_end)) {
                throw StiffnessError("integrate_populations: step size underflow at t = " + std::to_string(t));
            }
            const State k1 = rhs(table, t, y);
            auto at = [&](double a1, const State& k_1, double a2 = 0, const State& k_2 = {}, double a3 = 0,
                          const State& k_3 = {}, double a4 = 0, const State& k_4 = {}, double a5 = 0,
                          const State& k_5 = {}) {
                return State{y.ee + h * (a1 * k_1.ee + a2 * k_2.ee + a3 * k_3.ee + a4 * k_4.ee + a5 * k_5.ee),
                             y.gg + h * (a1 * k_1.gg + a2 * k_2.gg + a3 * k_3.gg + a4 * k_4.gg + a5 * k_5.gg)};
            };
            const State k2 = rhs(table, t + c2 * h, at(a21, k1));
            const State k3 = rhs(table, t + c3 * h, at(a31, k1, a32, k2));
            const State k4 = rhs(table, t + c4 * h, at(a41, k1, a42, k2, a43, k3));
            const State k5 = rhs(table, t + c5 * h, at(a51, k1, a52, k2, a53, k3, a54, k4));
            const State k6 = rhs(table, t + h, at(a61, k1, a62, k2, a63, k3, a64, k4, a65, k5));
            const State yn{y.ee + h * (b1 * k1.ee + b3 * k3.ee + b4 * k4.ee + b5 * k5.ee + b6 * k6.ee),
                           y.gg + h * (b1 * k1.gg + b3 * k3.gg + b4 * k4.gg + b5 * k5.gg + b6 * k6.gg)};
            const State k7 = rhs(table, t + h, yn);
            const double err = h * std::abs(e1 * k1.ee + e3 * k3.ee + e4 * k4.ee + e5 * k5.ee + e6 * k6.ee +
                                            e7 * k7.ee);
            const double scale = tol * (1.0 + std::max(std::abs(y.ee), std::abs(yn.ee)));
            if (err <= scale) {
                t += h;
                y = yn;
            }
            const double ratio = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
            h *= std::clamp(ratio, 0.2, 5.0);
        }
        t = t_target;
        record(t, y);
    }

    // Period averages of the polarization (trapezoid over each full period).
    const std::size_t spp = static_cast<std::size_t>(opts.samples_per_period);
    for (std::size_t p = 0; (p + 1) * spp < tr.t.size(); ++p) {
        double acc = 0.0;
        for (std::size_t k = 0; k < spp; ++k) {
            const std::size_t a = p * spp + k;
            acc += 0.25 * ((tr.rho_ee[a] - tr.rho_gg[a]) + (tr.rho_ee[a + 1] - tr.rho_gg[a + 1]));
        }
        tr.S_bar.push_back(acc / static_cast<double>(spp));
    }

    // Relaxation rate from one period of the periodic regime.
    double gamma = 0.0;
    const double t0 = table.periodic_start();
    for (std::size_t k = 0; k < spp; ++k) {
        const RateSample r = table.at(t0 + dt_out * static_cast<double>(k));
        gamma += r.R_e + r.R_g;
    }
    tr.relaxation_rate = gamma / static_cast<double>(spp);
    if (tr.relaxation_rate * t_c >= 0.1) {
        std::ostringstream os;
        os << "relaxation rate * memory time = " << tr.relaxation_rate * t_c
           << " >= 0.1; weak-coupling comparison outside its validity range";
        tr.warnings.push_back(os.str());
    }
    if (tr.negative_rate_samples > 0) {
        tr.warnings.push_back("negative instantaneous rates at " + std::to_string(tr.negative_rate_samples) +
                              " samples");
    }
    if (t_end < t0 + 2.0 * tau) {
        tr.warnings.push_back("trajectory ends before two periods of the periodic regime");
    }
    return tr;
}

CoarseGrained coarse_grained_observables(const Trajectory& traj, const MachineSpec& spec) {
    if (std::abs(traj.period - spec.modulation.period()) > 1e-12 * traj.period) {
        throw InvalidArgument("coarse_grained_observables: trajectory period does not match the machine");
    }
    if (traj.S_bar.size() < 2) throw NotConverged("coarse_grained_observables: fewer than two full periods");
    const double last = traj.S_bar.back();
    const double prev = traj.S_bar[traj.S_bar.size() - 2];
    if (std::abs(last - prev) >= 1e-3 * std::abs(last)) {
        std::ostringstream os;
        os << "coarse_grained_observables: S_bar changed by " << std::abs(last - prev)
           << " over the last period";
        throw NotConverged(os.str());
    }
    const std::size_t spp = static_cast<std::size_t>(traj.samples_per_period);
    const std::size_t end = traj.S_bar.size() * spp;  // last sample of the last full period
    const std::size_t begin = end - spp;
    CoarseGrained out;
    out.S_bar = last;
    double ee = 0.0, jc = 0.0, jh = 0.0;
    for (std::size_t a = begin; a < end; ++a) {
        ee += 0.5 * (traj.rho_ee[a] + traj.rho_ee[a + 1]);
        jc += 0.5 * (traj.J_C[a] + traj.J_C[a + 1]);
        jh += 0.5 * (traj.J_H[a] + traj.J_H[a + 1]);
    }
    const double n = static_cast<double>(spp);
    out.rho_ee = ee / n;
    out.J_C = jc / n;
    out.J_H = jh / n;
    out.P = -(out.J_C + out.J_H);
    return out;
}

void write_trajectory(const Trajectory& traj, std::ostream& out) {
    out << "# t rho_ee R_e R_g\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        out << traj.t[k] << ' ' << traj.rho_ee[k] << ' ' << traj.R_e[k] << ' ' << traj.R_g[k] << '\n';
    }
}

} // namespace qhm::oracle
