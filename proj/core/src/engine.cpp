#include "sstp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace sstp {

namespace {

// Substream 0 feeds initial conditions; branch b uses substream 1 + b.
constexpr std::uint32_t kInitialSubstream = 0;

double dot(std::span<double const> a, std::span<double const> b)
{
    return lane_dot(a.data(), b.data(), a.size());
}

BathSpec validated_bath(RunConfig const& config)
{
    config.validate();
    return discretize_bath(config.model, config.n_modes, config.omega_c, config.omega_max);
}

}  // namespace

HopStatistics& HopStatistics::operator+=(HopStatistics const& other)
{
    proposals += other.proposals;
    accepted += other.accepted;
    frustrated += other.frustrated;
    filtered += other.filtered;
    window_violations += other.window_violations;
    max_accepted_residual = std::max(max_accepted_residual, other.max_accepted_residual);
    return *this;
}

TrajectoryRunner::TrajectoryRunner(RunConfig config)
    : config_(std::move(config))
    , bath_(validated_bath(config_))
    , propagator_(config_.model, bath_, config_.tau)
    , kernel_(config_.model, bath_)
{
}

TrajectoryState TrajectoryRunner::start(SegmentState segment, bool log_hops) const
{
    TrajectoryState state;
    state.gamma = dot(segment.point.positions, bath_.couplings);
    state.segment = std::move(segment);
    state.log_hops = log_hops;
    return state;
}

void TrajectoryRunner::step(TrajectoryState& state, RandomStream& rng, long step_index, HopStatistics& stats) const
{
    state.gamma = propagator_.advance(state.segment, state.gamma);
    double const u_ket = rng.uniform();
    double const u_bra = rng.uniform();
    if (!kernel_.coupled())
    {
        return;
    }

    auto const& scheme = config_.scheme;
    double const c_dot_p = dot(state.segment.point.momenta, bath_.couplings);
    for (auto const& [side, u] : {std::pair{HopSide::ket, u_ket}, std::pair{HopSide::bra, u_bra}})
    {
        auto const proposal =
            kernel_.propose(state.segment.pair, side, state.gamma, c_dot_p, config_.tau, scheme.jump_rule);
        ++stats.proposals;
        if (proposal->frustrated)
        {
            ++stats.frustrated;
        }
        double const p = hop_probability(*proposal, scheme);
        if (p == 0.0 && proposal->rate_x > 0.0 && !proposal->frustrated)
        {
            ++stats.filtered;
        }
        bool const accepted = u < p;
        state.amplitude *= weight_factor(*proposal, scheme, accepted);
        if (!accepted)
        {
            continue;
        }

        double const residual = proposal->energy_residual;
        ++stats.accepted;
        stats.max_accepted_residual = std::max(stats.max_accepted_residual, std::abs(residual));
        if (scheme.variant == SchemeVariant::energy_conserving && !(std::abs(residual) <= scheme.c_energy))
        {
            ++stats.window_violations;
        }
        kernel_.apply(*proposal, state.segment.point.momenta);
        state.segment.pair = proposal->new_pair(state.segment.pair);
        if (state.log_hops)
        {
            state.hop_log.push_back({step_index, side, proposal->target, residual});
        }
        // One transition per step.
        break;
    }
}

std::complex<double> TrajectoryRunner::branch_estimate(SegmentState const& start, long n_steps, RandomStream& rng) const
{
    auto state = this->start(start);
    HopStatistics ignored;
    for (long s = 1; s <= n_steps; ++s)
    {
        step(state, rng, s, ignored);
    }
    auto const sz = SubsystemGeometry::at(state.gamma, config_.model.omega_tunnel).sigma_z();
    return state.weight() * sz[index_of(state.segment.pair.ket)][index_of(state.segment.pair.bra)];
}

PhasePoint TrajectoryRunner::initial_point(long traj_index) const
{
    RandomStream rng(config_.master_seed, static_cast<std::uint64_t>(traj_index), kInitialSubstream);
    return sample_wigner(bath_, config_.model.beta, rng);
}

std::vector<TrajectoryRunner::BranchStart> TrajectoryRunner::branch_starts(long traj_index,
                                                                             PhasePoint const& point) const
{
    auto const geo = SubsystemGeometry::at(dot(point.positions, bath_.couplings), config_.model.omega_tunnel);
    auto const rho = geo.initial_weights();
    std::vector<BranchStart> starts;
    if (config_.enumerate_pairs)
    {
        for (std::uint32_t b = 0; b < kAllPairs.size(); ++b)
        {
            auto const pair = kAllPairs[b];
            starts.push_back({pair, rho[index_of(pair.ket)][index_of(pair.bra)], 1 + b});
        }
        return starts;
    }
    // The pair draw follows the bath draw on the initial-condition stream.
    RandomStream rng(config_.master_seed, static_cast<std::uint64_t>(traj_index), kInitialSubstream);
    (void)sample_wigner(bath_, config_.model.beta, rng);
    auto const choice = std::min<std::size_t>(static_cast<std::size_t>(rng.uniform() * 4.0), 3);
    auto const pair = kAllPairs[choice];
    starts.push_back({pair, 4.0 * rho[index_of(pair.ket)][index_of(pair.bra)], 1});
    return starts;
}

TrajectoryResult TrajectoryRunner::run_trajectory(long traj_index, bool log_hops) const
{
    TrajectoryResult result;
    result.traj_index = traj_index;
    result.initial_point = initial_point(traj_index);
    long const n_steps = config_.n_steps();

    for (auto const& origin : branch_starts(traj_index, result.initial_point))
    {
        SubTrajectory branch;
        branch.initial_pair = origin.pair;
        branch.initial_weight = origin.weight;
        RandomStream rng(config_.master_seed, static_cast<std::uint64_t>(traj_index), origin.substream);
        auto state = start(SegmentState{result.initial_point, origin.pair, 0.0}, log_hops);

        auto record = [&](long s) {
            branch.samples.push_back(
                {static_cast<double>(s) * config_.tau, state.segment.pair, state.segment.point, state.weight()});
            double const modulus = std::abs(state.amplitude);
            branch.overflowed = branch.overflowed || !std::isfinite(modulus);
            branch.capped = branch.capped || modulus > config_.weight_cap;
        };
        record(0);
        for (long s = 1; s <= n_steps; ++s)
        {
            step(state, rng, s, result.hops);
            if (s % config_.record_stride == 0)
            {
                record(s);
            }
        }
        branch.hop_log = std::move(state.hop_log);
        result.branches.push_back(std::move(branch));
    }
    return result;
}

void TrajectoryRunner::run_unit(long traj_index, std::span<RecordSample> records, EnsembleStatistics& stats) const
{
    auto const point = initial_point(traj_index);
    auto const starts = branch_starts(traj_index, point);
    long const n_steps = config_.n_steps();
    double const omega = config_.model.omega_tunnel;
    std::fill(records.begin(), records.end(), RecordSample{});
    bool capped = false;
    bool overflowed = false;

    for (auto const& origin : starts)
    {
        RandomStream rng(config_.master_seed, static_cast<std::uint64_t>(traj_index), origin.substream);
        auto state = start(SegmentState{point, origin.pair, 0.0});
        auto record = [&](long k) {
            auto const w = state.weight();
            auto const sz = SubsystemGeometry::at(state.gamma, omega).sigma_z();
            double const element = sz[index_of(state.segment.pair.ket)][index_of(state.segment.pair.bra)];
            double const modulus = std::abs(w);
            records[k].value += origin.weight * (w.real() * element);
            records[k].modulus += modulus;
            bool const over_cap = modulus > config_.weight_cap;
            records[k].capped = records[k].capped || over_cap;
            capped = capped || over_cap;
            overflowed = overflowed || !std::isfinite(modulus);
        };
        record(0);
        for (long s = 1; s <= n_steps; ++s)
        {
            step(state, rng, s, stats.hops);
            if (s % config_.record_stride == 0)
            {
                record(s / config_.record_stride);
            }
        }
    }
    double const n_branches = static_cast<double>(starts.size());
    for (auto& r : records)
    {
        r.modulus /= n_branches;
    }
    stats.capped_trajectories += capped ? 1 : 0;
    stats.overflowed_trajectories += overflowed ? 1 : 0;
}

EnsembleResult TrajectoryRunner::run_ensemble(int threads) const
{
    long const n_records = config_.n_records();
    std::vector<double> times(static_cast<std::size_t>(n_records));
    for (long k = 0; k < n_records; ++k)
    {
        times[k] = config_.record_time(k);
    }
    SeriesAccumulator acc(times, config_.truncate_capped);
    EnsembleResult result;

    threads = std::max(1, threads);
    // Bounded buffer: trajectories are propagated in chunks and reduced in
    // index order, so the output does not depend on the thread count.
    long const chunk = std::clamp<long>(4'000'000 / n_records, 1, 4096);
    std::vector<RecordSample> buffer(static_cast<std::size_t>(chunk * n_records));
    std::vector<EnsembleStatistics> per_traj(static_cast<std::size_t>(chunk));

    for (long first = 0; first < config_.n_traj; first += chunk)
    {
        long const count = std::min(chunk, config_.n_traj - first);
        std::fill(per_traj.begin(), per_traj.end(), EnsembleStatistics{});
        auto work = [&](long i) {
            std::span<RecordSample> slot(buffer.data() + i * n_records, static_cast<std::size_t>(n_records));
            run_unit(first + i, slot, per_traj[i]);
        };
        if (threads == 1 || count == 1)
        {
            for (long i = 0; i < count; ++i)
            {
                work(i);
            }
        }
        else
        {
            std::atomic<long> next{0};
            std::vector<std::jthread> pool;
            for (int t = 0; t < std::min<long>(threads, count); ++t)
            {
                pool.emplace_back([&] {
                    for (long i = next++; i < count; i = next++)
                    {
                        work(i);
                    }
                });
            }
        }
        for (long i = 0; i < count; ++i)
        {
            acc.add(std::span<RecordSample const>(buffer.data() + i * n_records, static_cast<std::size_t>(n_records)));
            result.stats.hops += per_traj[i].hops;
            result.stats.capped_trajectories += per_traj[i].capped_trajectories;
            result.stats.overflowed_trajectories += per_traj[i].overflowed_trajectories;
        }
    }
    result.series = acc.finish();
    return result;
}

TrajectoryResult run_trajectory(RunConfig const& config, long traj_index)
{
    return TrajectoryRunner(config).run_trajectory(traj_index);
}

EnsembleResult run_ensemble(RunConfig const& config, int threads)
{
    return TrajectoryRunner(config).run_ensemble(threads);
}

}  // namespace sstp
