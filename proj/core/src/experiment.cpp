#include "sstp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sstp/config.hpp"

#ifndef SSTP_VERSION
#define SSTP_VERSION "unknown"
#endif

namespace sstp {

namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::ofstream open_output(std::filesystem::path const& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write output file '" + path.string() + "'");
    }
    return out;
}

struct SchemeRun
{
    RunConfig config;
    EnsembleResult result;
    double wall_seconds = 0.0;
};

SchemeRun run_timed(RunConfig const& config, int threads)
{
    auto const t0 = std::chrono::steady_clock::now();
    auto result = run_ensemble(config, threads);
    auto const t1 = std::chrono::steady_clock::now();
    return {config, std::move(result), std::chrono::duration<double>(t1 - t0).count()};
}

std::string scheme_tag(SchemeVariant variant)
{
    return variant == SchemeVariant::primitive ? "primitive" : "energy_conserving";
}

void write_hop_log(std::filesystem::path const& path, RunConfig const& config)
{
    auto out = open_output(path);
    out << "traj,initial_ket,initial_bra,step,side,target,energy_residual\n";
    TrajectoryRunner const runner(config);
    for (long i = 0; i < config.n_traj; ++i)
    {
        auto const traj = runner.run_trajectory(i, true);
        for (auto const& branch : traj.branches)
        {
            for (auto const& hop : branch.hop_log)
            {
                out << i << ',' << label_of(branch.initial_pair.ket) << ',' << label_of(branch.initial_pair.bra) << ','
                    << hop.step << ',' << (hop.side == HopSide::ket ? "ket" : "bra") << ',' << label_of(hop.target)
                    << ',' << fmt17(hop.energy_residual) << '\n';
            }
        }
    }
}

}  // namespace

void write_observable_csv(std::ostream& out, ObservableSeries const& series)
{
    out << kObservableCsvHeader << '\n';
    for (std::size_t k = 0; k < series.size(); ++k)
    {
        out << fmt17(series.times[k]) << ',' << fmt17(series.mean[k]) << ',' << fmt17(series.stderr_[k]) << ','
            << fmt17(series.weight_var[k]) << ',' << fmt17(series.n_effective[k]) << '\n';
    }
}

void write_metadata(std::ostream& out, RunConfig const& config, EnsembleResult const& result, double wall_seconds,
                    int threads)
{
    json meta;
    meta["format"] = "sstp-run-metadata";
    meta["format_version"] = 1;
    meta["code_version"] = SSTP_VERSION;
    json cfg = json::object();
    auto const values = to_key_values(config);
    for (auto const& key : config_keys())
    {
        cfg[key] = values.at(key);
    }
    meta["config"] = cfg;
    meta["wall_time_seconds"] = wall_seconds;
    meta["threads"] = threads;
    auto const& hops = result.stats.hops;
    meta["hops"] = {
        {"proposals", hops.proposals},
        {"accepted", hops.accepted},
        {"frustrated", hops.frustrated},
        {"filter_rejected", hops.filtered},
        {"window_violations", hops.window_violations},
        {"max_accepted_abs_residual", hops.max_accepted_residual},
    };
    meta["capped_trajectories"] = result.stats.capped_trajectories;
    meta["overflowed_trajectories"] = result.stats.overflowed_trajectories;
    json max_weight = json::array();
    json n_samples = json::array();
    for (std::size_t k = 0; k < result.series.size(); ++k)
    {
        max_weight.push_back(number_or_null(result.series.max_weight[k]));
        n_samples.push_back(result.series.n_samples[k]);
    }
    meta["max_weight"] = max_weight;
    meta["n_samples"] = n_samples;
    out << meta.dump(2) << '\n';
}

RunConfig config_from_metadata(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open metadata file '" + path.string() + "'");
    }
    json meta;
    try
    {
        meta = json::parse(in);
    }
    catch (json::exception const& e)
    {
        throw ConfigError("malformed metadata file '" + path.string() + "': " + e.what());
    }
    if (!meta.contains("config") || !meta["config"].is_object())
    {
        throw ConfigError("metadata file '" + path.string() + "' has no config record");
    }
    KeyValues values;
    for (auto const& [key, value] : meta["config"].items())
    {
        values[key] = value.get<std::string>();
    }
    return apply_key_values(values);
}

ExperimentReport run_experiment(RunConfig const& config, ExperimentOptions const& options)
{
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(options.output_dir, ec);
    if (ec || !std::filesystem::is_directory(options.output_dir))
    {
        throw std::runtime_error("cannot create output directory '" + options.output_dir.string() + "'");
    }

    std::vector<RunConfig> configs;
    if (options.compare)
    {
        for (auto const variant : {SchemeVariant::primitive, SchemeVariant::energy_conserving})
        {
            RunConfig c = config;
            c.scheme.variant = variant;
            configs.push_back(c);
        }
    }
    else
    {
        configs.push_back(config);
    }

    ExperimentReport report;
    std::vector<SchemeRun> runs;
    for (auto const& c : configs)
    {
        auto run = run_timed(c, options.threads);
        std::string const stem =
            options.compare ? options.name + "_" + scheme_tag(c.scheme.variant) : options.name;

        auto const csv_path = options.output_dir / (stem + ".csv");
        auto csv = open_output(csv_path);
        write_observable_csv(csv, run.result.series);
        report.files.push_back(csv_path);

        auto const meta_path = options.output_dir / (stem + ".json");
        auto meta = open_output(meta_path);
        write_metadata(meta, c, run.result, run.wall_seconds, options.threads);
        report.files.push_back(meta_path);

        if (options.hop_log)
        {
            auto const hop_path = options.output_dir / (stem + "_hops.csv");
            write_hop_log(hop_path, c);
            report.files.push_back(hop_path);
        }

        auto const& stats = run.result.stats;
        if (stats.overflowed_trajectories > 0)
        {
            report.exit_code = 2;
            report.diagnostic += stem + ": " + std::to_string(stats.overflowed_trajectories) +
                                 " trajectories with non-finite weight\n";
        }
        if (stats.hops.window_violations > 0)
        {
            report.exit_code = 3;
            report.diagnostic += stem + ": " + std::to_string(stats.hops.window_violations) +
                                 " accepted hops outside the energy window\n";
        }
        runs.push_back(std::move(run));
    }

    if (options.compare)
    {
        auto const& prim = runs[0].result.series;
        auto const& ec_series = runs[1].result.series;
        auto const path = options.output_dir / (options.name + "_compare.csv");
        auto out = open_output(path);
        out << "t,weight_var_primitive,weight_var_energy_conserving,weight_var_ratio,stderr_primitive,"
               "stderr_energy_conserving\n";
        for (std::size_t k = 0; k < prim.size(); ++k)
        {
            double const ratio = prim.weight_var[k] / ec_series.weight_var[k];
            out << fmt17(prim.times[k]) << ',' << fmt17(prim.weight_var[k]) << ',' << fmt17(ec_series.weight_var[k])
                << ',' << fmt17(ratio) << ',' << fmt17(prim.stderr_[k]) << ',' << fmt17(ec_series.stderr_[k]) << '\n';
        }
        report.files.push_back(path);
    }
    return report;
}

}  // namespace sstp
