#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "sstp/config.hpp"
#include "sstp/engine.hpp"
#include "sstp/oracle.hpp"

namespace {

using sstp::JumpRule;
using sstp::SamplingScheme;
using sstp::SchemeVariant;

SamplingScheme const kPrimitive{SchemeVariant::primitive, 0.01, JumpRule::first_order_shift};
SamplingScheme const kFiltered{SchemeVariant::energy_conserving, 0.01, JumpRule::first_order_shift};

sstp::RunConfig oracle_config(SamplingScheme scheme)
{
    auto config = *sstp::preset("oracle-small");
    config.scheme = scheme;
    return config;
}

std::vector<sstp::PhasePoint> probe_points()
{
    return {
        {{0.0, 0.0}, {1.0, 4.0}},
        {{0.3, -0.1}, {-1.0, -4.0}},
        {{-0.5, 0.2}, {2.0, 3.5}},
        {{1.0, 0.05}, {0.5, -5.0}},
        {{0.1, 0.1}, {0.2, 0.7}},
    };
}

}  // namespace

TEST(Oracle, ZeroStepsIsTheObservable)
{
    auto const config = oracle_config(kPrimitive);
    auto const bath = sstp::discretize_bath(config.model, 2, 1.0, 3.0);
    sstp::PhasePoint const x{{0.4, -0.2}, {1.0, 1.0}};
    auto const sz = sstp::sigma_z_adiabatic(x.positions, config.model, bath);
    for (auto const pair : sstp::kAllPairs)
    {
        auto const sum = sstp::enumerate_dyson(x, pair, 0, 0.05, config.model, bath, kPrimitive);
        EXPECT_EQ(sum.n_branches, 1);
        EXPECT_EQ(sum.value, std::complex<double>(sz[sstp::index_of(pair.ket)][sstp::index_of(pair.bra)]));
    }
}

TEST(Oracle, UncoupledCoherenceIsPurePhase)
{
    sstp::ModelParams free{1.0 / 3.0, 0.0, 12.5};
    auto const bath = sstp::discretize_bath(free, 2, 1.0, 3.0);
    sstp::PhasePoint const x{{0.4, -0.2}, {1.0, 1.0}};
    auto const sum = sstp::enumerate_dyson(x, {sstp::Surface::lower, sstp::Surface::upper}, 10, 0.05, free, bath,
                                           kPrimitive);
    EXPECT_EQ(sum.n_branches, 1);
    EXPECT_LT(std::abs(sum.value - std::exp(std::complex<double>(0.0, -2.0 / 3.0 * 0.5))), 1e-12);
}

TEST(Oracle, AnalyticUncoupled)
{
    EXPECT_DOUBLE_EQ(sstp::analytic_uncoupled(0.0, 0.4), 1.0);
    EXPECT_NEAR(sstp::analytic_uncoupled(3.0 * M_PI / 4.0, 1.0 / 3.0), 0.0, 1e-15);
}

// A subsystem operator that does not depend on (R, P) evolves as
// O(tau) = O + i tau [h, O] + O(tau^2) in any basis. Propagating the
// adiabatic frame along R moves sigma_z^{ab}(R) at first order in tau;
// only the correct sign of the transition matrix elements cancels that.
TEST(Oracle, OneStepBranchSumIsSecondOrderAccurate)
{
    auto const config = oracle_config(kPrimitive);
    auto const bath = sstp::discretize_bath(config.model, 2, 1.0, 3.0);
    for (auto const& x : probe_points())
    {
        auto const geo = sstp::SubsystemGeometry::at(sstp::system_bath_coordinate(x.positions, bath),
                                                     config.model.omega_tunnel);
        auto const sz = geo.sigma_z();
        for (auto const pair : sstp::kAllPairs)
        {
            std::vector<double> errors;
            for (double tau : {0.02, 0.01, 0.005})
            {
                auto const sum = sstp::enumerate_dyson(x, pair, 1, tau, config.model, bath, kPrimitive);
                auto const frozen = sz[sstp::index_of(pair.ket)][sstp::index_of(pair.bra)] *
                                    std::exp(std::complex<double>(0.0, geo.frequency(pair) * tau));
                errors.push_back(std::abs(sum.value - frozen));
            }
            EXPECT_GT(errors[0] / errors[1], 3.5) << "pair " << sstp::label_of(pair.ket) << sstp::label_of(pair.bra);
            EXPECT_GT(errors[1] / errors[2], 3.5) << "pair " << sstp::label_of(pair.ket) << sstp::label_of(pair.bra);
        }
    }
}

TEST(Oracle, InfiniteWindowEnumerationEqualsPrimitive)
{
    auto const config = oracle_config(kPrimitive);
    auto const bath = sstp::discretize_bath(config.model, 2, 1.0, 3.0);
    SamplingScheme open = kFiltered;
    open.c_energy = std::numeric_limits<double>::infinity();
    for (auto const& x : probe_points())
    {
        for (auto const pair : sstp::kAllPairs)
        {
            auto const a = sstp::enumerate_dyson(x, pair, 4, 0.05, config.model, bath, kPrimitive);
            auto const b = sstp::enumerate_dyson(x, pair, 4, 0.05, config.model, bath, open);
            EXPECT_EQ(a.value, b.value);
            EXPECT_EQ(a.n_branches, b.n_branches);
        }
    }
}

TEST(Oracle, FilterPrunesBranches)
{
    auto const config = oracle_config(kPrimitive);
    auto const bath = sstp::discretize_bath(config.model, 2, 1.0, 3.0);
    sstp::PhasePoint const slow{{0.1, 0.1}, {0.2, 0.7}};
    auto const full = sstp::enumerate_dyson(slow, {}, 4, 0.05, config.model, bath, kPrimitive);
    auto const filtered = sstp::enumerate_dyson(slow, {}, 4, 0.05, config.model, bath, kFiltered);
    EXPECT_EQ(full.n_branches, 81);
    EXPECT_EQ(filtered.n_branches, 1);
}

TEST(Oracle, RejectsTooManySteps)
{
    auto const config = oracle_config(kPrimitive);
    auto const bath = sstp::discretize_bath(config.model, 2, 1.0, 3.0);
    EXPECT_THROW(sstp::enumerate_dyson({{0, 0}, {0, 0}}, {}, sstp::kMaxEnumeratedSteps + 1, 0.05, config.model, bath,
                                       kPrimitive),
                 std::invalid_argument);
}

// Engine Monte Carlo against the exact branch sum, per start pair.
TEST(Oracle, EngineIsUnbiased)
{
    int const n_samples = 100000;
    for (auto const& scheme : {kPrimitive, kFiltered})
    {
        auto const config = oracle_config(scheme);
        sstp::TrajectoryRunner const runner(config);
        for (auto const& x : probe_points())
        {
            for (auto const pair : sstp::kAllPairs)
            {
                auto const exact = sstp::enumerate_dyson(x, pair, 6, config.tau, config.model, runner.bath(), scheme);
                double sum = 0.0, sum_sq = 0.0;
                for (int i = 0; i < n_samples; ++i)
                {
                    sstp::RandomStream rng(77, static_cast<std::uint64_t>(i), 1);
                    double const v = runner.branch_estimate({x, pair, 0.0}, 6, rng).real();
                    sum += v;
                    sum_sq += v * v;
                }
                double const mean = sum / n_samples;
                double const se = std::sqrt(std::max(0.0, sum_sq / n_samples - mean * mean) / (n_samples - 1.0));
                // 40 comparisons: 4 sigma keeps the family-wise false alarm rate below 0.3%.
                EXPECT_LE(std::abs(mean - exact.value.real()), 4.0 * se + 1e-10)
                    << "pair " << sstp::label_of(pair.ket) << sstp::label_of(pair.bra) << " P = (" << x.momenta[0]
                    << ", " << x.momenta[1] << ")";
            }
        }
    }
}
