// qhm_cli.cpp — Command-line front end: sweep, critical, optimize, spectra, oracle, echo-config

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "qhm/config.hpp"
#include "qhm/errors.hpp"
#include "qhm/sweeps.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config;
    std::string out;
    unsigned threads{0};
    std::uint64_t seed{0};
};

fs::path output_dir(const qhm::RunConfig& cfg, const Options& o) {
    fs::path dir = o.out.empty() ? fs::path(cfg.output) : fs::path(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw qhm::ConfigError("output directory '" + dir.string() + "' is not writable");
    }
    return dir;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qhm::ConfigError("cannot write '" + path.string() + "'");
    body(f);
    if (!f) throw qhm::ConfigError("write failed for '" + path.string() + "'");
    std::cout << path.string() << '\n';
}

unsigned thread_count(const Options& o) {
    if (o.threads > 0) return o.threads;
    return std::max(1U, std::thread::hardware_concurrency());
}

void do_sweep(const qhm::RunConfig& cfg, const Options& o) {
    const auto rows = qhm::run_sweep(cfg, thread_count(o));
    write_file(output_dir(cfg, o) / "sweep.csv", [&](std::ostream& out) {
        qhm::write_header(out, cfg, "sweep", o.seed);
        qhm::write_sweep_csv(out, rows);
    });
}

void do_critical(const qhm::RunConfig& cfg, const Options& o) {
    const auto r = qhm::find_critical(cfg, thread_count(o));
    write_file(output_dir(cfg, o) / "critical.csv", [&](std::ostream& out) {
        qhm::write_header(out, cfg, "critical", o.seed);
        qhm::write_critical_csv(out, r);
    });
}

void do_optimize(const qhm::RunConfig& cfg, const Options& o) {
    const auto r = qhm::run_optimize(cfg);
    write_file(output_dir(cfg, o) / "optimize.csv", [&](std::ostream& out) {
        qhm::write_header(out, cfg, "optimize", o.seed);
        qhm::write_optimize_csv(out, r);
    });
}

void do_spectra(const qhm::RunConfig& cfg, const Options& o) {
    const auto rows = qhm::export_spectra(cfg);
    write_file(output_dir(cfg, o) / "spectra.csv", [&](std::ostream& out) {
        qhm::write_header(out, cfg, "spectra", o.seed);
        qhm::write_spectra_csv(out, rows);
    });
}

void do_oracle(const qhm::RunConfig& cfg, const Options& o) {
    const auto s = qhm::run_oracle(cfg);
    const fs::path dir = output_dir(cfg, o);
    write_file(dir / "oracle.csv", [&](std::ostream& out) {
        qhm::write_header(out, cfg, "oracle", o.seed);
        qhm::write_oracle_csv(out, s);
    });
    write_file(dir / "trajectory.txt", [&](std::ostream& out) { qhm::oracle::write_trajectory(s.trajectory, out); });
    for (const auto& w : s.trajectory.warnings) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodically modulated qubit heat machine: steady-state sweeps and checks"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool needs_out) {
        sub->add_option("--config", opt.config, "Configuration file (JSON)")->required()->check(CLI::ExistingFile);
        if (needs_out) {
            sub->add_option("--out", opt.out, "Output directory (overrides the config)");
            sub->add_option("--threads", opt.threads, "Worker threads (default: hardware concurrency)");
            sub->add_option("--seed", opt.seed, "Seed recorded in output headers; does not affect results");
        }
    };

    struct Sub {
        const char* name;
        const char* help;
        void (*run)(const qhm::RunConfig&, const Options&);
    };
    const Sub subs[] = {
        {"sweep", "Steady state over the delta grid", do_sweep},
        {"critical", "Engine/refrigerator transition by bisection", do_critical},
        {"optimize", "Maximum-power modulation rate", do_optimize},
        {"spectra", "Coupling spectra and harmonic markers", do_spectra},
        {"oracle", "Time-domain cross-check of the steady state", do_oracle},
    };
    void (*chosen)(const qhm::RunConfig&, const Options&) = nullptr;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_common(sub, true);
        sub->callback([&chosen, run = s.run] { chosen = run; });
    }
    bool echo = false;
    CLI::App* echo_cmd = app.add_subcommand("echo-config", "Print the parsed configuration in canonical form");
    add_common(echo_cmd, false);
    echo_cmd->callback([&echo] { echo = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const qhm::RunConfig cfg = qhm::load_config(opt.config);
        if (echo) {
            std::cout << qhm::echo_config(cfg);
            return 0;
        }
        chosen(cfg, opt);
        return 0;
    } catch (const qhm::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qhm::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qhm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
