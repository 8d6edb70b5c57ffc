// sstp: command-line runner for sequential short-time propagation of the
// spin-boson model.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "sstp/config.hpp"
#include "sstp/engine.hpp"
#include "sstp/experiment.hpp"
#include "sstp/oracle.hpp"

namespace {

struct ConfigSource
{
    std::string preset;
    std::string config_file;
    std::string metadata_file;
    std::map<std::string, std::string> flags;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--preset", preset, "Built-in preset: fig1, fig2, uncoupled, oracle-small");
        cmd.add_option("-c,--config", config_file, "Flat key = value config file")->check(CLI::ExistingFile);
        cmd.add_option("--from-metadata", metadata_file, "Rerun the resolved config recorded in a metadata JSON")
            ->check(CLI::ExistingFile);
        for (auto const& key : sstp::config_keys())
        {
            cmd.add_option("--" + key, flags[key], "Override config key '" + key + "'");
        }
    }

    sstp::RunConfig resolve() const
    {
        sstp::RunConfig base;
        if (!metadata_file.empty())
        {
            base = sstp::config_from_metadata(metadata_file);
        }
        else if (!preset.empty())
        {
            auto p = sstp::preset(preset);
            if (!p)
            {
                throw sstp::ConfigError("unknown preset '" + preset + "'");
            }
            base = *p;
        }
        sstp::KeyValues overrides;
        for (auto const& [key, value] : flags)
        {
            if (!value.empty())
            {
                overrides[key] = value;
            }
        }
        if (!config_file.empty())
        {
            return sstp::parse_config(config_file, overrides, base);
        }
        return sstp::apply_key_values(overrides, base);
    }
};

std::string default_output_dir()
{
    if (char const* env = std::getenv("SSTP_OUTPUT_DIR"); env != nullptr && *env != '\0')
    {
        return env;
    }
    return ".";
}

int default_threads()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sequential short-time propagation surface hopping for the spin-boson model"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run an ensemble and write CSV + metadata");
    ConfigSource run_source;
    run_source.attach(*run);
    sstp::ExperimentOptions options;
    options.output_dir = default_output_dir();
    options.threads = default_threads();
    std::string output_dir = options.output_dir.string();
    run->add_option("-o,--out", output_dir, "Output directory (default: $SSTP_OUTPUT_DIR or .)");
    run->add_option("-n,--name", options.name, "Output file stem");
    run->add_flag("--compare", options.compare, "Run primitive and energy-conserving schemes on the same draws");
    run->add_flag("--hop-log", options.hop_log, "Write every accepted hop to <name>_hops.csv");
    run->add_option("-j,--threads", options.threads, "Worker threads (results do not depend on this)")
        ->check(CLI::PositiveNumber);

    // config
    auto* show = app.add_subcommand("config", "Print the resolved config");
    ConfigSource show_source;
    show_source.attach(*show);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Compare engine Monte Carlo against exact branch enumeration");
    ConfigSource oracle_source;
    oracle_source.attach(*oracle);

    // presets
    auto* presets = app.add_subcommand("presets", "List built-in presets");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            options.output_dir = output_dir;
            auto const config = run_source.resolve();
            auto const report = sstp::run_experiment(config, options);
            for (auto const& f : report.files)
            {
                std::cout << f.string() << '\n';
            }
            if (report.exit_code != 0)
            {
                std::cerr << "sstp: numeric failure\n" << report.diagnostic;
            }
            return report.exit_code;
        }
        if (*show)
        {
            sstp::write_config(std::cout, show_source.resolve());
            return 0;
        }
        if (*oracle)
        {
            auto config = oracle_source.resolve();
            sstp::TrajectoryRunner const runner(config);
            auto const x0 = runner.initial_point(0);
            long const n_steps = config.n_steps();
            if (n_steps > sstp::kMaxEnumeratedSteps)
            {
                throw sstp::ConfigError("oracle: t_max/tau must be <= " + std::to_string(sstp::kMaxEnumeratedSteps));
            }
            for (auto const pair : sstp::kAllPairs)
            {
                auto const exact = sstp::enumerate_dyson(x0, pair, static_cast<int>(n_steps), config.tau,
                                                         config.model, runner.bath(), config.scheme);
                double sum = 0.0;
                double sum_sq = 0.0;
                for (long i = 0; i < config.n_traj; ++i)
                {
                    sstp::RandomStream rng(config.master_seed, static_cast<std::uint64_t>(i), 7);
                    double const v = runner.branch_estimate({x0, pair, 0.0}, n_steps, rng).real();
                    sum += v;
                    sum_sq += v * v;
                }
                double const n = static_cast<double>(config.n_traj);
                double const mean = sum / n;
                double const se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0));
                std::printf("pair (%d,%d): exact %.12f  engine %.12f +- %.3e  z = %.2f  branches %ld\n",
                            sstp::label_of(pair.ket), sstp::label_of(pair.bra), exact.value.real(), mean, se,
                            se > 0 ? (mean - exact.value.real()) / se : 0.0, exact.n_branches);
            }
            return 0;
        }
        if (*presets)
        {
            for (auto const& name : sstp::preset_names())
            {
                std::cout << "# preset " << name << '\n';
                sstp::write_config(std::cout, *sstp::preset(name));
                std::cout << '\n';
            }
            return 0;
        }
    }
    catch (sstp::ConfigError const& e)
    {
        std::cerr << "sstp: config error: " << e.what() << '\n';
        return 64;
    }
    catch (std::exception const& e)
    {
        std::cerr << "sstp: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
