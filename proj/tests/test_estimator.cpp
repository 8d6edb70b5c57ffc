#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sstp/engine.hpp"
#include "sstp/estimator.hpp"

using sstp::RecordSample;
using sstp::SeriesAccumulator;

TEST(SeriesAccumulator, MeanStderrAndWeightDiagnostics)
{
    SeriesAccumulator acc({0.0, 1.0}, false);
    std::vector<double> const values{1.0, 2.0, 4.0, 7.0};
    std::vector<double> const moduli{1.0, 3.0, 1.0, 3.0};
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        std::vector<RecordSample> r{{values[i], moduli[i], false}, {-values[i], 1.0, false}};
        acc.add(r);
    }
    auto const s = acc.finish();
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s.mean[0], 3.5);
    EXPECT_DOUBLE_EQ(s.mean[1], -3.5);
    // Sample variance 7, so stderr = sqrt(7/4).
    EXPECT_DOUBLE_EQ(s.stderr_[0], std::sqrt(7.0 / 4.0));
    EXPECT_DOUBLE_EQ(s.weight_var[0], 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.weight_var[1], 0.0);
    EXPECT_DOUBLE_EQ(s.n_effective[0], 64.0 / 20.0);
    EXPECT_DOUBLE_EQ(s.n_effective[1], 4.0);
    EXPECT_EQ(s.max_weight[0], 3.0);
    EXPECT_EQ(s.n_samples[1], 4);
    EXPECT_TRUE(s.has_error_bars());
}

TEST(SeriesAccumulator, SingleSampleHasNoErrorBar)
{
    SeriesAccumulator acc({0.0}, false);
    std::vector<RecordSample> r{{0.3, 1.0, false}};
    acc.add(r);
    auto const s = acc.finish();
    EXPECT_DOUBLE_EQ(s.mean[0], 0.3);
    EXPECT_TRUE(std::isnan(s.stderr_[0]));
    EXPECT_FALSE(s.has_error_bars());
}

TEST(SeriesAccumulator, TruncationDropsCappedRecords)
{
    SeriesAccumulator kept({0.0}, false);
    SeriesAccumulator dropped({0.0}, true);
    for (auto const& r : std::vector<RecordSample>{{1.0, 1.0, false}, {100.0, 1e9, true}, {3.0, 1.0, false}})
    {
        std::vector<RecordSample> one{r};
        kept.add(one);
        dropped.add(one);
    }
    EXPECT_EQ(kept.finish().n_samples[0], 3);
    EXPECT_EQ(dropped.finish().n_samples[0], 2);
    EXPECT_DOUBLE_EQ(dropped.finish().mean[0], 2.0);
}

TEST(SeriesAccumulator, RejectsWrongRecordCount)
{
    SeriesAccumulator acc({0.0, 1.0}, false);
    std::vector<RecordSample> r(3);
    EXPECT_THROW(acc.add(r), std::invalid_argument);
}

TEST(Estimate, RejectsEmptyInput)
{
    sstp::ModelParams model;
    auto const bath = sstp::discretize_bath(model, 2, 1.0, 3.0);
    std::vector<sstp::TrajectoryResult> none;
    EXPECT_THROW(sstp::estimate(none, model, bath), std::invalid_argument);
}

TEST(Estimate, TruncateAboveDropsHeavyUnits)
{
    sstp::ModelParams model;
    auto const bath = sstp::discretize_bath(model, 2, 1.0, 3.0);
    sstp::PhasePoint const origin{{0.0, 0.0}, {0.0, 0.0}};
    auto unit = [&](double weight) {
        sstp::TrajectoryResult t;
        sstp::SubTrajectory b;
        b.initial_pair = {sstp::Surface::lower, sstp::Surface::lower};
        b.initial_weight = 0.5;
        b.samples.push_back({0.0, b.initial_pair, origin, {weight, 0.0}});
        t.branches.push_back(b);
        return t;
    };
    std::vector<sstp::TrajectoryResult> trajectories{unit(1.0), unit(10.0), unit(3.0)};
    auto const all = sstp::estimate(trajectories, model, bath);
    auto const light = sstp::estimate(trajectories, model, bath, 5.0);
    EXPECT_EQ(all.n_samples[0], 3);
    EXPECT_EQ(light.n_samples[0], 2);
    // sigma_z at gamma = 0 has a zero diagonal.
    EXPECT_EQ(all.mean[0], 0.0);
    EXPECT_DOUBLE_EQ(all.max_weight[0], 10.0);
}
