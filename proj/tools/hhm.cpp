// hhm: exact and numerical checks for the Henon-Heiles family and its
// five-dimensional extension.

#include <hhm/app.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <utility>
#include <vector>

namespace {

using hhm::app::RunConfig;

struct Flags {
    std::vector<std::pair<std::string, CLI::Option*>> options; // config key, option
    std::string config_path;

    void add(std::string key, CLI::Option* opt) { options.emplace_back(std::move(key), opt); }
};

void add_common(CLI::App* sub, RunConfig& cfg, Flags& flags)
{
    flags.add("system", sub->add_option("--system", cfg.system, "hh-general, hh-case3 or master")->capture_default_str());
    flags.add("A", sub->add_option("--A", cfg.A, "parameter A (exact rational)"));
    flags.add("B", sub->add_option("--B", cfg.B, "parameter B (hh-general)"));
    flags.add("epsilon", sub->add_option("--epsilon", cfg.epsilon, "parameter eps (hh-general)"));
    flags.add("output", sub->add_option("--output", cfg.output, "write the JSON report here"));
    sub->add_option("--config", flags.config_path, "JSON file with default option values");
}

void add_tolerances(CLI::App* sub, RunConfig& cfg, Flags& flags)
{
    flags.add("rtol", sub->add_option("--rtol", cfg.rtol, "relative tolerance (env HHM_RTOL)"));
    flags.add("atol", sub->add_option("--atol", cfg.atol, "absolute tolerance (env HHM_ATOL)"));
}

void emit(const hhm::app::json& report, const RunConfig& cfg)
{
    const std::string text = report.dump(2) + "\n";
    if (cfg.output) {
        std::ofstream out(*cfg.output);
        if (!out)
            throw hhm::app::UsageError("cannot write '" + *cfg.output + "'");
        out << text;
    } else {
        std::cout << text;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact and numerical analysis of the Henon-Heiles family"};
    app.require_subcommand(1);
    RunConfig cfg;
    Flags flags;

    auto* verify = app.add_subcommand("verify", "check invariants, brackets, Jacobi and the morphism");
    add_common(verify, cfg, flags);

    auto* integrate = app.add_subcommand("integrate", "integrate a trajectory and monitor invariants");
    add_common(integrate, cfg, flags);
    add_tolerances(integrate, cfg, flags);
    flags.add("u0", integrate->add_option("--u0", cfg.u0, "initial state, comma separated")->delimiter(','));
    flags.add("t", integrate->add_option("--t", cfg.t, "end time")->capture_default_str());
    flags.add("t_start", integrate->add_option("--t-start", cfg.t_start, "start time"));
    flags.add("seed", integrate->add_option("--seed", cfg.seed, "random initial state from this seed"));
    flags.add("scale", integrate->add_option("--scale", cfg.scale, "half-width of random states")
                                 ->capture_default_str());
    flags.add("seed_from_series", integrate->add_flag("--seed-from-series", cfg.seed_from_series, "start on the Laurent solution (hh-case3)"));
    flags.add("t0", integrate->add_option("--t0", cfg.t0, "series evaluation time")->capture_default_str());
    flags.add("alpha", integrate->add_option("--alpha", cfg.alpha, "series parameter alpha"));
    flags.add("beta", integrate->add_option("--beta", cfg.beta, "series parameter beta"));
    flags.add("gamma", integrate->add_option("--gamma", cfg.gamma, "series parameter gamma"));
    flags.add("threshold", integrate->add_option("--threshold", cfg.threshold, "allowed invariant drift")
                                     ->capture_default_str());
    flags.add("csv", integrate->add_option("--csv", cfg.csv, "trajectory CSV path")->capture_default_str());

    auto* series = app.add_subcommand("series", "Laurent solutions, resonances and restricted invariants");
    add_common(series, cfg, flags);
    flags.add("order", series->add_option("--order", cfg.order, "expansion order in t")->capture_default_str());

    auto* curve = app.add_subcommand("curve", "eliminate gamma and build the curve (hh-case3)");
    add_common(curve, cfg, flags);
    flags.add("order", curve->add_option("--order", cfg.order, "expansion order in t")->capture_default_str());

    auto* bracket = app.add_subcommand("bracket", "Poisson bracket of two polynomials");
    add_common(bracket, cfg, flags);
    flags.add("f", bracket->add_option("--f", cfg.f, "first polynomial")->required());
    flags.add("g", bracket->add_option("--g", cfg.g, "second polynomial")->required());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hhm::app::exit_usage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (!flags.config_path.empty()) {
            std::set<std::string> given;
            for (const auto& [key, opt] : flags.options)
                if (opt->count())
                    given.insert(key);
            hhm::app::merge_config(cfg, hhm::app::load_config(flags.config_path), given);
        }
        auto result = hhm::app::run(command, cfg);
        emit(result.report, cfg);
        return result.exit_code;
    } catch (const hhm::app::UsageError& e) {
        std::cerr << "hhm " << command << ": " << e.what() << "\n";
        return hhm::app::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "hhm " << command << ": " << e.what() << "\n";
        return hhm::app::exit_verification_failure;
    }
}
