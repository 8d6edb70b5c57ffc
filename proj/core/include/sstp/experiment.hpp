#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sstp/engine.hpp"
#include "sstp/estimator.hpp"
#include "sstp/run_config.hpp"

namespace sstp {

inline constexpr char const* kObservableCsvHeader = "t,mean,stderr,weight_var,n_eff";

struct ExperimentOptions
{
    std::filesystem::path output_dir = ".";
    std::string name = "run";
    bool compare = false;  ///< run both schemes on identical bath draws
    bool hop_log = false;  ///< dump every accepted hop to <name>_hops.csv
    int threads = 1;
};

struct ExperimentReport
{
    int exit_code = 0;
    std::vector<std::filesystem::path> files;
    std::string diagnostic;
};

/// One row per record; every number has 17 significant digits.
void write_observable_csv(std::ostream& out, ObservableSeries const& series);

/// Self-describing JSON record of the resolved config and run statistics.
void write_metadata(std::ostream& out, RunConfig const& config, EnsembleResult const& result, double wall_seconds,
                    int threads);

/// Resolved config stored in a metadata file written by write_metadata.
RunConfig config_from_metadata(std::filesystem::path const& path);

/// Runs the ensemble(s) and writes CSV + metadata files. Nonzero exit code
/// when a trajectory weight became non-finite or an accepted hop fell
/// outside the energy window. Throws std::runtime_error when the output
/// directory cannot be created or written.
ExperimentReport run_experiment(RunConfig const& config, ExperimentOptions const& options);

}  // namespace sstp
