#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sstp/bath.hpp"

namespace sstp {

struct TrajectoryResult;

/// <sigma_z(t)> with error bars and weight diagnostics on the record grid.
struct ObservableSeries
{
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> stderr_;  ///< NaN when fewer than 2 samples contributed
    std::vector<double> weight_var;
    std::vector<double> n_effective;
    std::vector<double> max_weight;
    std::vector<long> n_samples;

    std::size_t size() const noexcept { return times.size(); }
    bool has_error_bars() const;
};

/// Contribution of one sample unit (a bath draw with its branches) at one
/// record time.
struct RecordSample
{
    double value = 0.0;    ///< sum over branches of Re[w0 * weight * sigma_z]
    double modulus = 0.0;  ///< mean over branches of |weight|
    bool capped = false;
};

/// Streaming, order-deterministic reduction of per-sample records.
///
/// Samples must be added in a fixed order (trajectory index) for
/// bit-reproducible output; the engine guarantees that.
class SeriesAccumulator
{
  public:
    SeriesAccumulator(std::vector<double> times, bool truncate_capped);

    void add(std::span<RecordSample const> records);

    ObservableSeries finish() const;

  private:
    struct Moments
    {
        long n = 0;
        double mean_value = 0.0;
        double m2_value = 0.0;
        double mean_modulus = 0.0;
        double m2_modulus = 0.0;
        double sum_modulus = 0.0;
        double sum_modulus_sq = 0.0;
        double max_modulus = 0.0;
    };

    std::vector<double> times_;
    std::vector<Moments> moments_;
    bool truncate_capped_;
};

/// Ensemble estimate from fully recorded trajectories (all must share the
/// record grid). With truncate_above set, a sample unit is dropped at every
/// record where one of its branches has |weight| above that value.
/// Throws std::invalid_argument for an empty input.
ObservableSeries estimate(std::span<TrajectoryResult const> trajectories,
                          ModelParams const& model,
                          BathSpec const& bath,
                          std::optional<double> truncate_above = std::nullopt);

}  // namespace sstp
