#include "sstp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sstp/adiabatic.hpp"
#include "sstp/engine.hpp"

namespace sstp {

bool ObservableSeries::has_error_bars() const
{
    return std::none_of(stderr_.begin(), stderr_.end(), [](double e) { return std::isnan(e); });
}

SeriesAccumulator::SeriesAccumulator(std::vector<double> times, bool truncate_capped)
    : times_(std::move(times)), moments_(times_.size()), truncate_capped_(truncate_capped)
{
}

void SeriesAccumulator::add(std::span<RecordSample const> records)
{
    if (records.size() != moments_.size())
    {
        throw std::invalid_argument("SeriesAccumulator::add: record count mismatch");
    }
    for (std::size_t k = 0; k < records.size(); ++k)
    {
        auto const& r = records[k];
        if (truncate_capped_ && r.capped)
        {
            continue;
        }
        auto& m = moments_[k];
        ++m.n;
        double const n = static_cast<double>(m.n);
        // Welford updates.
        double const dv = r.value - m.mean_value;
        m.mean_value += dv / n;
        m.m2_value += dv * (r.value - m.mean_value);
        double const dm = r.modulus - m.mean_modulus;
        m.mean_modulus += dm / n;
        m.m2_modulus += dm * (r.modulus - m.mean_modulus);
        m.sum_modulus += r.modulus;
        m.sum_modulus_sq += r.modulus * r.modulus;
        m.max_modulus = std::max(m.max_modulus, r.modulus);
    }
}

ObservableSeries SeriesAccumulator::finish() const
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    ObservableSeries out;
    out.times = times_;
    for (auto const& m : moments_)
    {
        double const n = static_cast<double>(m.n);
        out.mean.push_back(m.n > 0 ? m.mean_value : nan);
        if (m.n >= 2)
        {
            out.stderr_.push_back(std::sqrt(m.m2_value / (n - 1.0) / n));
            out.weight_var.push_back(m.m2_modulus / (n - 1.0));
        }
        else
        {
            out.stderr_.push_back(nan);
            out.weight_var.push_back(nan);
        }
        out.n_effective.push_back(m.sum_modulus_sq > 0.0 ? m.sum_modulus * m.sum_modulus / m.sum_modulus_sq
                                                         : 0.0);
        out.max_weight.push_back(m.max_modulus);
        out.n_samples.push_back(m.n);
    }
    return out;
}

ObservableSeries estimate(std::span<TrajectoryResult const> trajectories,
                          ModelParams const& model,
                          BathSpec const& bath,
                          std::optional<double> truncate_above)
{
    if (trajectories.empty() || trajectories.front().branches.empty())
    {
        throw std::invalid_argument("estimate: no trajectories");
    }
    std::vector<double> times;
    for (auto const& s : trajectories.front().branches.front().samples)
    {
        times.push_back(s.time);
    }
    SeriesAccumulator acc(times, truncate_above.has_value());
    std::vector<RecordSample> records(times.size());
    for (auto const& traj : trajectories)
    {
        std::fill(records.begin(), records.end(), RecordSample{});
        for (auto const& branch : traj.branches)
        {
            if (branch.samples.size() != times.size())
            {
                throw std::invalid_argument("estimate: trajectories do not share a record grid");
            }
            for (std::size_t k = 0; k < times.size(); ++k)
            {
                auto const& s = branch.samples[k];
                double const gamma = system_bath_coordinate(s.point.positions, bath);
                auto const sz = SubsystemGeometry::at(gamma, model.omega_tunnel).sigma_z();
                double const element = sz[index_of(s.pair.ket)][index_of(s.pair.bra)];
                records[k].value += branch.initial_weight * (s.weight.real() * element);
                records[k].modulus += std::abs(s.weight);
                if (truncate_above && std::abs(s.weight) > *truncate_above)
                {
                    records[k].capped = true;
                }
            }
        }
        double const n_branches = static_cast<double>(traj.branches.size());
        for (auto& r : records)
        {
            r.modulus /= n_branches;
        }
        acc.add(records);
    }
    return acc.finish();
}

}  // namespace sstp
