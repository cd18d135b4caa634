// config.cpp — JSON run configuration with field-path diagnostics

#include "qhm/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qhm/errors.hpp"

namespace qhm {

using json = nlohmann::ordered_json;

std::string_view to_string(SweepScale scale) { return scale == SweepScale::linear ? "linear" : "log"; }

std::string_view to_string(Task task) {
    switch (task) {
    case Task::sweep: return "sweep";
    case Task::critical: return "critical";
    case Task::optimize: return "optimize";
    case Task::spectra: return "spectra";
    case Task::oracle: return "oracle";
    }
    return "?";
}

std::vector<double> SweepSpec::deltas() const {
    std::vector<double> out(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n_points - 1);
        out[static_cast<std::size_t>(i)] = scale == SweepScale::linear
                                               ? delta_min + f * (delta_max - delta_min)
                                               : delta_min * std::pow(delta_max / delta_min, f);
    }
    out.back() = delta_max;
    return out;
}

void RunConfig::validate() const {
    if (!(sweep.delta_min > 0.0)) throw ConfigError("sweep.delta_min: must be > 0");
    if (!(sweep.delta_max > sweep.delta_min)) throw ConfigError("sweep.delta_max: must exceed delta_min");
    if (sweep.n_points < 2) throw ConfigError("sweep.n_points: must be >= 2");
    if (output.empty()) throw ConfigError("output: must name a directory");
    if (!(tolerances.bisect_rel > 0.0 && tolerances.optimize_rel > 0.0)) {
        throw ConfigError("tolerances: relative tolerances must be > 0");
    }
    if (tolerances.optimize_scan_points < 3) throw ConfigError("tolerances.optimize_scan_points: must be >= 3");
    if (!(spectra.omega_max > spectra.omega_min) || spectra.n_points < 2) {
        throw ConfigError("spectra: need omega_max > omega_min and n_points >= 2");
    }
    if (!(oracle.t_end > 0.0 && oracle.dt_max > 0.0)) throw ConfigError("oracle: t_end and dt_max must be > 0");
    if (!(oracle.rho_ee0 >= 0.0 && oracle.rho_ee0 <= 1.0)) throw ConfigError("oracle.rho_ee0: must lie in [0, 1]");
    if (oracle.samples_per_period < 4 || oracle.omega_nodes < 3 || !(oracle.window_factor > 0.0)) {
        throw ConfigError("oracle: samples_per_period >= 4, omega_nodes >= 3, window_factor > 0");
    }
    try {
        machine.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("machine: ") + e.what());
    }
}

namespace {

// A JSON node together with its dotted path, for diagnostics.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + msg);
    }

    const std::string& path() const { return path_; }
    const json& raw() const { return j_; }

    void require_object(std::initializer_list<const char*> allowed) const {
        if (!j_.is_object()) fail("expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, value] : j_.items()) {
            if (!ok.count(key)) child_path_fail(key, "unknown field");
        }
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    Node at(const char* key) const {
        if (!has(key)) child_path_fail(key, "missing required field");
        return Node(j_.at(key), join(key));
    }

    double number(const char* key) const { return at(key).as_number(); }
    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    int integer(const char* key, int fallback) const {
        if (!has(key)) return fallback;
        const Node n = at(key);
        if (!n.j_.is_number_integer()) n.fail("expected an integer");
        return n.j_.get<int>();
    }

    std::string string(const char* key) const {
        const Node n = at(key);
        if (!n.j_.is_string()) n.fail("expected a string");
        return n.j_.get<std::string>();
    }
    std::string string(const char* key, const std::string& fallback) const {
        return has(key) ? string(key) : fallback;
    }

    // Numbers, or the strings "inf" / "-inf".
    double as_number() const {
        if (j_.is_number()) return j_.get<double>();
        if (j_.is_string()) {
            const auto s = j_.get<std::string>();
            if (s == "inf") return kInf;
            if (s == "-inf") return -kInf;
        }
        fail("expected a number");
    }

private:
    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    [[noreturn]] void child_path_fail(const std::string& key, const std::string& msg) const {
        throw ConfigError(join(key) + ": " + msg);
    }

    const json& j_;
    std::string path_;
};

json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

template <class F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
}

SpectrumShape parse_spectrum(const Node& n, const std::filesystem::path& base_dir) {
    if (!n.raw().is_object()) n.fail("expected an object");
    const std::string type = n.string("type");
    if (type == "flat") {
        n.require_object({"type", "G0", "lo", "hi"});
        return guarded(n, [&] { return SpectrumShape::flat(n.number("G0"), n.number("lo", 0.0), n.number("hi", kInf)); });
    }
    if (type == "debye") {
        n.require_object({"type", "f", "omega_D"});
        return guarded(n, [&] { return SpectrumShape::debye(n.number("f"), n.number("omega_D")); });
    }
    if (type == "cubic") {
        n.require_object({"type", "A"});
        return guarded(n, [&] { return SpectrumShape::cubic(n.number("A")); });
    }
    if (type == "filtered") {
        n.require_object({"type", "inner", "gamma_f", "omega_f", "lamb_cutoff"});
        SpectrumShape inner = parse_spectrum(n.at("inner"), base_dir);
        return guarded(n, [&] {
            return SpectrumShape::filtered(std::move(inner), n.number("gamma_f"), n.number("omega_f"),
                                           n.number("lamb_cutoff", kInf));
        });
    }
    if (type == "tabulated") {
        n.require_object({"type", "file", "omega", "G"});
        if (n.has("file")) {
            std::filesystem::path p = n.string("file");
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            try {
                return SpectrumShape::load_tabulated(p.lexically_normal());
            } catch (const ConfigError& e) {
                n.fail(e.what());
            }
        }
        auto vec = [&](const char* key) {
            const Node a = n.at(key);
            if (!a.raw().is_array()) a.fail("expected an array of numbers");
            std::vector<double> v;
            for (std::size_t i = 0; i < a.raw().size(); ++i) {
                Node(a.raw()[i], a.path() + "[" + std::to_string(i) + "]").as_number();
                v.push_back(a.raw()[i].get<double>());
            }
            return v;
        };
        std::vector<double> w = vec("omega");
        std::vector<double> g = vec("G");
        return guarded(n, [&] { return SpectrumShape::tabulated(std::move(w), std::move(g)); });
    }
    Node(n.raw().at("type"), n.path() + ".type").fail("unknown spectrum type '" + type + "'");
}

json spectrum_json(const SpectrumShape& s) {
    json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FlatShape>) {
                j["type"] = "flat";
                j["G0"] = v.G0;
                j["lo"] = number_json(v.lo);
                j["hi"] = number_json(v.hi);
            } else if constexpr (std::is_same_v<T, DebyeShape>) {
                j["type"] = "debye";
                j["f"] = v.f;
                j["omega_D"] = v.omega_D;
            } else if constexpr (std::is_same_v<T, CubicShape>) {
                j["type"] = "cubic";
                j["A"] = v.A;
            } else if constexpr (std::is_same_v<T, FilteredShape>) {
                j["type"] = "filtered";
                j["inner"] = spectrum_json(*v.inner);
                j["gamma_f"] = v.gamma_f;
                j["omega_f"] = v.omega_f;
                j["lamb_cutoff"] = number_json(v.lamb_cutoff);
            } else {
                j["type"] = "tabulated";
                if (!v.source.empty()) {
                    j["file"] = v.source;
                } else {
                    j["omega"] = v.omega;
                    j["G"] = v.G;
                }
            }
        },
        s.variant());
    return j;
}

ModulationScheme parse_modulation(const Node& n) {
    n.require_object({"kind", "omega0", "delta", "lambda", "profile"});
    const std::string kind = n.string("kind");
    const double omega0 = n.number("omega0");
    const double delta = n.number("delta");
    try {
        if (kind == "sinusoidal") return ModulationScheme::sinusoidal(omega0, delta, n.number("lambda"));
        if (kind == "pi_flip") return ModulationScheme::pi_flip(omega0, delta);
        if (kind == "tabulated") {
            const Node p = n.at("profile");
            if (!p.raw().is_array()) p.fail("expected an array of [re, im] pairs");
            std::vector<cplx> prof;
            for (std::size_t i = 0; i < p.raw().size(); ++i) {
                const json& e = p.raw()[i];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                    Node(e, p.path() + "[" + std::to_string(i) + "]").fail("expected [re, im]");
                }
                prof.emplace_back(e[0].get<double>(), e[1].get<double>());
            }
            return ModulationScheme::tabulated(omega0, delta, std::move(prof));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
    Node(n.raw().at("kind"), n.path() + ".kind").fail("unknown modulation kind '" + kind + "'");
}

json modulation_json(const ModulationScheme& m) {
    json j;
    j["kind"] = std::string(to_string(m.kind));
    j["omega0"] = m.omega0;
    j["delta"] = m.delta;
    if (m.kind == ModulationKind::sinusoidal) j["lambda"] = m.lambda;
    if (m.kind == ModulationKind::tabulated) {
        json prof = json::array();
        for (const cplx& z : m.phase_profile) prof.push_back(json::array({z.real(), z.imag()}));
        j["profile"] = prof;
    }
    return j;
}

BathModel parse_bath(const Node& n, BathLabel label, const std::filesystem::path& base_dir) {
    n.require_object({"temperature", "spectrum", "kms"});
    const double T = n.number("temperature");
    SpectrumShape shape = parse_spectrum(n.at("spectrum"), base_dir);
    BathModel b = BathModel::make(label, T, std::move(shape));
    if (n.has("kms")) {
        const Node k = n.at("kms");
        try {
            b.kms_mode = kms_mode_from_string(n.string("kms"));
        } catch (const InvalidArgument& e) {
            k.fail(e.what());
        }
    }
    try {
        b.validate();
    } catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
    return b;
}

json bath_json(const BathModel& b) {
    json j;
    j["temperature"] = b.temperature;
    j["spectrum"] = spectrum_json(b.spectrum);
    j["kms"] = std::string(to_string(b.kms_mode));
    return j;
}

Task task_from_string(const Node& n) {
    if (!n.raw().is_string()) n.fail("expected a task name");
    const std::string s = n.raw().get<std::string>();
    for (Task t : {Task::sweep, Task::critical, Task::optimize, Task::spectra, Task::oracle}) {
        if (to_string(t) == s) return t;
    }
    n.fail("unknown task '" + s + "'");
}

std::string syntax_location(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("syntax error at " + syntax_location(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                          e.what());
    }
    const Node root(doc, "");
    root.require_object({"machine", "sweep", "tasks", "output", "tolerances", "spectra", "oracle"});

    RunConfig cfg;
    const Node m = root.at("machine");
    m.require_object({"modulation", "baths", "truncation_M"});
    const Node baths = m.at("baths");
    baths.require_object({"C", "H"});
    const ModulationScheme mod = parse_modulation(m.at("modulation"));
    const BathModel bc = parse_bath(baths.at("C"), BathLabel::C, base_dir);
    const BathModel bh = parse_bath(baths.at("H"), BathLabel::H, base_dir);
    const int M = m.integer("truncation_M", 0);
    if (M < 0) m.at("truncation_M").fail("must be >= 0 (0 selects the default)");

    double mass_tol = kDefaultMassTolerance;
    if (root.has("tolerances")) {
        const Node t = root.at("tolerances");
        t.require_object({"mass_tol", "bisect_rel", "optimize_rel", "optimize_scan_points"});
        mass_tol = t.number("mass_tol", mass_tol);
        cfg.tolerances.bisect_rel = t.number("bisect_rel", cfg.tolerances.bisect_rel);
        cfg.tolerances.optimize_rel = t.number("optimize_rel", cfg.tolerances.optimize_rel);
        cfg.tolerances.optimize_scan_points = t.integer("optimize_scan_points", cfg.tolerances.optimize_scan_points);
    }
    cfg.machine.modulation = mod;
    cfg.machine.bathC = bc;
    cfg.machine.bathH = bh;
    cfg.machine.truncation_M = M;
    cfg.machine.mass_tol = mass_tol;

    const Node s = root.at("sweep");
    s.require_object({"delta_min", "delta_max", "n_points", "scale"});
    cfg.sweep.delta_min = s.number("delta_min");
    cfg.sweep.delta_max = s.number("delta_max");
    cfg.sweep.n_points = s.integer("n_points", 0);
    const std::string scale = s.string("scale", "linear");
    if (scale == "linear") {
        cfg.sweep.scale = SweepScale::linear;
    } else if (scale == "log") {
        cfg.sweep.scale = SweepScale::log;
    } else {
        s.at("scale").fail("expected 'linear' or 'log'");
    }

    if (root.has("tasks")) {
        const Node t = root.at("tasks");
        if (!t.raw().is_array()) t.fail("expected an array of task names");
        for (std::size_t i = 0; i < t.raw().size(); ++i) {
            const Task task = task_from_string(Node(t.raw()[i], t.path() + "[" + std::to_string(i) + "]"));
            for (Task seen : cfg.tasks) {
                if (seen == task) t.fail("duplicate task '" + std::string(to_string(task)) + "'");
            }
            cfg.tasks.push_back(task);
        }
    }
    cfg.output = root.string("output", cfg.output);

    if (root.has("spectra")) {
        const Node g = root.at("spectra");
        g.require_object({"omega_min", "omega_max", "n_points"});
        cfg.spectra.omega_min = g.number("omega_min", cfg.spectra.omega_min);
        cfg.spectra.omega_max = g.number("omega_max", cfg.spectra.omega_max);
        cfg.spectra.n_points = g.integer("n_points", cfg.spectra.n_points);
    }
    if (root.has("oracle")) {
        const Node o = root.at("oracle");
        o.require_object({"t_end", "dt_max", "rho_ee0", "samples_per_period", "omega_nodes", "window_factor"});
        cfg.oracle.t_end = o.number("t_end", cfg.oracle.t_end);
        cfg.oracle.dt_max = o.number("dt_max", cfg.oracle.dt_max);
        cfg.oracle.rho_ee0 = o.number("rho_ee0", cfg.oracle.rho_ee0);
        cfg.oracle.samples_per_period = o.integer("samples_per_period", cfg.oracle.samples_per_period);
        cfg.oracle.omega_nodes = o.integer("omega_nodes", cfg.oracle.omega_nodes);
        cfg.oracle.window_factor = o.number("window_factor", cfg.oracle.window_factor);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str(), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string echo_config(const RunConfig& cfg) {
    json j;
    json& m = j["machine"];
    m["modulation"] = modulation_json(cfg.machine.modulation);
    m["baths"]["C"] = bath_json(cfg.machine.bathC);
    m["baths"]["H"] = bath_json(cfg.machine.bathH);
    m["truncation_M"] = cfg.machine.truncation_M;
    j["sweep"] = {{"delta_min", cfg.sweep.delta_min},
                  {"delta_max", cfg.sweep.delta_max},
                  {"n_points", cfg.sweep.n_points},
                  {"scale", std::string(to_string(cfg.sweep.scale))}};
    json tasks = json::array();
    for (Task t : cfg.tasks) tasks.push_back(std::string(to_string(t)));
    j["tasks"] = tasks;
    j["output"] = cfg.output;
    j["tolerances"] = {{"mass_tol", cfg.machine.mass_tol},
                       {"bisect_rel", cfg.tolerances.bisect_rel},
                       {"optimize_rel", cfg.tolerances.optimize_rel},
                       {"optimize_scan_points", cfg.tolerances.optimize_scan_points}};
    j["spectra"] = {{"omega_min", cfg.spectra.omega_min},
                    {"omega_max", cfg.spectra.omega_max},
                    {"n_points", cfg.spectra.n_points}};
    j["oracle"] = {{"t_end", cfg.oracle.t_end},
                   {"dt_max", cfg.oracle.dt_max},
                   {"rho_ee0", cfg.oracle.rho_ee0},
                   {"samples_per_period", cfg.oracle.samples_per_period},
                   {"omega_nodes", cfg.oracle.omega_nodes},
                   {"window_factor", cfg.oracle.window_factor}};
    return j.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : echo_config(cfg)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

} // namespace qhm
