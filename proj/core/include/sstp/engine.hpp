#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sstp/adiabatic.hpp"
#include "sstp/bath.hpp"
#include "sstp/estimator.hpp"
#include "sstp/hopping.hpp"
#include "sstp/propagator.hpp"
#include "sstp/random.hpp"
#include "sstp/run_config.hpp"

namespace sstp {

struct HopEvent
{
    long step = 0;
    HopSide side = HopSide::ket;
    Surface target = Surface::lower;
    double energy_residual = 0.0;
};

/// Counters over hop proposals. Merging is associative and order-free.
struct HopStatistics
{
    long proposals = 0;
    long accepted = 0;
    long frustrated = 0;
    long filtered = 0;  ///< nonzero rate but outside the energy window
    long window_violations = 0;  ///< accepted with |E| > c_energy; must stay 0
    double max_accepted_residual = 0.0;

    HopStatistics& operator+=(HopStatistics const& other);
};

/// Trajectory under the short-time propagator: segment state plus the
/// weight ledger. weight() = amplitude * exp(i theta); |weight| is the
/// product of the per-step importance factors.
struct TrajectoryState
{
    SegmentState segment;
    double amplitude = 1.0;
    double gamma = 0.0;  ///< gamma(R) cache, maintained by TrajectoryRunner
    bool log_hops = false;
    std::vector<HopEvent> hop_log;

    std::complex<double> weight() const { return amplitude * segment.phase(); }
};

struct TrajectorySample
{
    double time = 0.0;
    SurfacePair pair;
    PhasePoint point;
    std::complex<double> weight;
};

/// One propagated branch started from a fixed initial pair.
struct SubTrajectory
{
    SurfacePair initial_pair;
    double initial_weight = 0.0;  ///< includes the 4x factor in random-pair mode
    std::vector<TrajectorySample> samples;
    std::vector<HopEvent> hop_log;
    bool capped = false;      ///< |weight| exceeded RunConfig::weight_cap
    bool overflowed = false;  ///< weight became non-finite
};

struct TrajectoryResult
{
    long traj_index = 0;
    PhasePoint initial_point;
    std::vector<SubTrajectory> branches;  ///< 4 with pair enumeration, else 1
    HopStatistics hops;
};

struct EnsembleStatistics
{
    HopStatistics hops;
    long capped_trajectories = 0;
    long overflowed_trajectories = 0;
};

struct EnsembleResult
{
    ObservableSeries series;
    EnsembleStatistics stats;
};

/// Sequential short-time propagation for one RunConfig.
///
/// Each step advances the segment, then tests a ket-side and a bra-side
/// transition in that order. At most one transition happens per step: a
/// bra-side test is skipped after an accepted ket-side hop. Two uniforms
/// are drawn every step regardless, so schemes sharing a seed consume
/// identical random streams.
class TrajectoryRunner
{
  public:
    explicit TrajectoryRunner(RunConfig config);

    RunConfig const& config() const noexcept { return config_; }
    BathSpec const& bath() const noexcept { return bath_; }

    TrajectoryState start(SegmentState segment, bool log_hops = false) const;

    void step(TrajectoryState& state, RandomStream& rng, long step_index, HopStatistics& stats) const;

    /// weight * sigma_z^{pair}(R) after n_steps from a fixed start; one
    /// Monte Carlo sample of the branch sum enumerated by the oracle.
    std::complex<double> branch_estimate(SegmentState const& start, long n_steps, RandomStream& rng) const;

    /// Initial phase point of trajectory traj_index.
    PhasePoint initial_point(long traj_index) const;

    TrajectoryResult run_trajectory(long traj_index, bool log_hops = false) const;

    EnsembleResult run_ensemble(int threads = 1) const;

  private:
    struct BranchStart
    {
        SurfacePair pair;
        double weight;
        std::uint32_t substream;
    };
    std::vector<BranchStart> branch_starts(long traj_index, PhasePoint const& point) const;

    // Propagates one sample unit and writes (value, modulus, capped) per record.
    void run_unit(long traj_index, std::span<RecordSample> records, EnsembleStatistics& stats) const;

    RunConfig config_;
    BathSpec bath_;
    SegmentPropagator propagator_;
    HopKernel kernel_;
};

TrajectoryResult run_trajectory(RunConfig const& config, long traj_index);

EnsembleResult run_ensemble(RunConfig const& config, int threads = 1);

}  // namespace sstp
