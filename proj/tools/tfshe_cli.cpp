// Command-line front end: one subcommand per experiment mode.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tfshe/errors.hpp"
#include "tfshe/experiments.hpp"

using namespace tfshe;
using namespace tfshe::expcli;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int replicas = 0;
    unsigned threads = 0;
    bool force = false;
};

void add_common(CLI::App* sub, Args& a) {
    sub->add_option("--config", a.config, "experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", a.out, "output directory (overrides the config)");
    sub->add_option("--seed", a.seed, "base seed (overrides the config)");
    sub->add_option("--replicas", a.replicas, "Monte Carlo replicas (overrides the config)")->check(CLI::PositiveNumber);
    sub->add_option("--threads", a.threads, "worker threads, 0 = hardware concurrency");
    sub->add_flag("--force", a.force, "recompute even if an up-to-date manifest exists");
}

Mode mode_for(const std::string& sub, const ExperimentConfig& c) {
    if (sub == "kernel-verify") return Mode::KernelVerify;
    if (sub == "moment-oracle") return Mode::MomentOracle;
    if (sub == "excitation") return Mode::Excitation;
    if (sub == "hoelder") return Mode::Hoelder;
    return c.model.gamma ? Mode::McColored : Mode::McWhite;
}

void print_checks(const RunResult& r) {
    std::cout << (r.reused ? "reused " : "wrote ") << r.dir.string() << "\n";
    for (const auto& ch : r.manifest.checks)
        std::cout << "  " << (ch.pass ? "PASS" : "FAIL") << (ch.asserted ? "  " : " (info) ") << ch.name << "\n";
    std::cout << (r.pass ? "all assertions passed" : "assertion failures") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-fractional stochastic heat equation experiments"};
    app.require_subcommand(1);
    Args a;
    for (const char* name : {"kernel-verify", "moment-oracle", "simulate", "excitation", "hoelder"})
        add_common(app.add_subcommand(name), a);
    CLI11_PARSE(app, argc, argv);

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        ExperimentConfig c = load_config(a.config);
        const Mode m = mode_for(sub, c);
        if (c.mode != m)
            std::cerr << "note: config mode " << to_string(c.mode) << " replaced by " << to_string(m) << "\n";
        c.mode = m;

        RunOptions opt;
        opt.force = a.force;
        if (!a.out.empty()) opt.out = a.out;
        if (app.get_subcommands().front()->count("--seed")) opt.seed = a.seed;
        if (a.replicas > 0) opt.replicas = a.replicas;
        if (app.get_subcommands().front()->count("--threads")) opt.threads = a.threads;
        const RunResult r = run(c, opt);
        print_checks(r);
        return r.pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
