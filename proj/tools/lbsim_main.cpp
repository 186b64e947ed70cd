#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbsim/availability.hpp"
#include "lbsim/compare.hpp"
#include "lbsim/config_io.hpp"
#include "lbsim/reports.hpp"
#include "lbsim/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct SimulateArgs {
    std::string config_path;
    std::string policy;
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::optional<double> hours;
    std::string out_dir = "out";
    bool trace = false;
    bool arrivals = false;
    bool assignments = false;
};

struct CompareArgs {
    std::string config_path;
    int seeds = 20;
    std::string out_dir = "out";
};

struct AvailArgs {
    double mp = 0.0;
    double rl = 0.0;
    double de = 0.0;
    std::optional<double> threshold;
};

// Returns the validated scenario or prints violations and exits with the
// config error code.
lbsim::SimulationConfig load_checked(const std::string& path) {
    lbsim::SimulationConfig cfg = lbsim::load_config_file(path);
    const auto violations = lbsim::validate_config(cfg);
    if (!violations.empty()) {
        for (const auto& v : violations)
            std::cerr << "invalid config: " << v.entity << ": " << v.rule << "\n";
        std::exit(kExitConfig);
    }
    return cfg;
}

int run_simulate(const SimulateArgs& args) {
    lbsim::SimulationConfig cfg = lbsim::load_config_file(args.config_path);
    if (!args.policy.empty() && !lbsim::policy_from_string(args.policy, cfg.policy)) {
        std::cerr << "unknown policy '" << args.policy << "'\n";
        return kExitConfig;
    }
    if (!args.mode.empty() && !lbsim::mode_from_string(args.mode, cfg.scheduling_mode)) {
        std::cerr << "unknown mode '" << args.mode << "'\n";
        return kExitConfig;
    }
    if (args.seed) cfg.seed = *args.seed;
    if (args.hours) cfg.duration_hours = *args.hours;

    const auto violations = lbsim::validate_config(cfg);
    if (!violations.empty()) {
        for (const auto& v : violations)
            std::cerr << "invalid config: " << v.entity << ": " << v.rule << "\n";
        return kExitConfig;
    }

    lbsim::RunOptions options;
    std::unique_ptr<lbsim::FileTraceSink> trace;
    if (args.trace) {
        std::filesystem::create_directories(args.out_dir);
        trace = std::make_unique<lbsim::FileTraceSink>(
            (std::filesystem::path(args.out_dir) / "trace.tsv").string());
        options.trace = trace.get();
    }

    const lbsim::RunResult result = lbsim::run_simulation(cfg, options);
    lbsim::write_run_outputs(result, cfg, args.out_dir, args.arrivals, args.assignments);
    std::cout << lbsim::render_summary_text(result);
    std::cout << "reports written to " << args.out_dir << "/\n";
    return kExitOk;
}

int run_compare(const CompareArgs& args) {
    const lbsim::SimulationConfig cfg = load_checked(args.config_path);
    if (args.seeds < 1) {
        std::cerr << "--seeds must be at least 1\n";
        return kExitConfig;
    }
    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < args.seeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    const lbsim::ComparisonReport report = lbsim::compare_policies(cfg, seeds);
    lbsim::write_compare_outputs(report, cfg, args.out_dir);
    std::cout << lbsim::render_compare_text(report);
    std::cout << "report written to " << args.out_dir << "/compare.json\n";
    return kExitOk;
}

int run_avail(const AvailArgs& args) {
    const lbsim::AvailabilityParams params{args.mp, args.rl, args.de};
    const lbsim::AvailabilityRating rating = lbsim::expected_availability(params);
    std::printf("expected availability: %.6f (%.4f%%)\n", rating.a_e, rating.a_e * 100.0);
    if (rating.clamped) std::printf("note: raw value clamped into [0, 1]\n");
    if (args.threshold) {
        const bool ok = lbsim::is_available(params, *args.threshold);
        std::printf("meets threshold %.4f: %s\n", *args.threshold, ok ? "yes" : "no");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator of multi-region cloud load balancing"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Run one scenario and write its reports");
    sim->add_option("--config", sim_args.config_path, "scenario file")->required();
    sim->add_option("--policy", sim_args.policy, "rr|esce|throttled (overrides config)");
    sim->add_option("--mode", sim_args.mode, "ts|ss (overrides config)");
    sim->add_option("--seed", sim_args.seed, "random seed (overrides config)");
    sim->add_option("--hours", sim_args.hours, "simulated hours (overrides config)");
    sim->add_option("--out", sim_args.out_dir, "output directory (default: out)");
    sim->add_flag("--trace", sim_args.trace, "dump the event trace to <out>/trace.tsv");
    sim->add_flag("--arrivals", sim_args.arrivals, "export arrivals.csv");
    sim->add_flag("--assignments", sim_args.assignments, "export assignments.csv");

    CompareArgs cmp_args;
    auto* cmp = app.add_subcommand("compare", "Run all three policies over several seeds");
    cmp->add_option("--config", cmp_args.config_path, "scenario file")->required();
    cmp->add_option("--seeds", cmp_args.seeds, "number of seeds (default: 20)");
    cmp->add_option("--out", cmp_args.out_dir, "output directory (default: out)");

    AvailArgs avail_args;
    auto* avail = app.add_subcommand("avail", "Expected-availability rating");
    avail->add_option("--mp", avail_args.mp, "measurement period, minutes")->required();
    avail->add_option("--rl", avail_args.rl, "expected loss events per period")->required();
    avail->add_option("--de", avail_args.de, "expected downtime per loss, minutes")->required();
    avail->add_option("--threshold", avail_args.threshold, "availability threshold in [0, 1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_args);
        if (cmp->parsed()) return run_compare(cmp_args);
        if (avail->parsed()) return run_avail(avail_args);
    } catch (const lbsim::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const lbsim::SimInvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
