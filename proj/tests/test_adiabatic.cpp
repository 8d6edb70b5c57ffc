#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "sstp/adiabatic.hpp"
#include "sstp/bath.hpp"
#include "sstp/random.hpp"

namespace {

using Vec2 = std::array<double, 2>;

sstp::ModelParams const kModel{0.4, 0.09, 12.5};

// Eigenvectors of -Omega sigma_x - gamma sigma_z from the characteristic
// equation, lower level first; sign aligned to a reference pair.
std::array<Vec2, 2> solve_levels(double gamma, double omega, std::array<Vec2, 2> const& reference)
{
    double const g = std::hypot(omega, gamma);
    Vec2 lower = gamma >= 0 ? Vec2{gamma + g, omega} : Vec2{omega, g - gamma};
    Vec2 upper = gamma >= 0 ? Vec2{omega, -(gamma + g)} : Vec2{g - gamma, -omega};
    std::array<Vec2, 2> v{lower, upper};
    for (int a = 0; a < 2; ++a)
    {
        double const norm = std::hypot(v[a][0], v[a][1]);
        double const sign = (v[a][0] * reference[a][0] + v[a][1] * reference[a][1]) < 0 ? -1.0 : 1.0;
        v[a] = {sign * v[a][0] / norm, sign * v[a][1] / norm};
    }
    return v;
}

std::array<Vec2, 2> as_pair(sstp::Matrix2 const& m)
{
    return {Vec2{m[0][0], m[0][1]}, Vec2{m[1][0], m[1][1]}};
}

double relative_error(std::vector<double> const& got, std::vector<double> const& want)
{
    double diff = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < got.size(); ++j)
    {
        diff += (got[j] - want[j]) * (got[j] - want[j]);
        norm += want[j] * want[j];
    }
    return std::sqrt(diff / norm);
}

}  // namespace

TEST(Adiabatic, ForcesAndCouplingMatchFiniteDifferences)
{
    auto const bath = sstp::discretize_bath(kModel, 200, 1.0, 3.0);
    sstp::RandomStream rng(11, 0);
    double const h = 1e-4;
    for (int draw = 0; draw < 100; ++draw)
    {
        auto const x = sstp::sample_wigner(bath, kModel.beta, rng);
        auto const data = sstp::adiabatic_at(x.positions, kModel, bath);
        auto const center = as_pair(sstp::SubsystemGeometry::at(data.gamma, 0.4).eigenvectors());
        std::vector<double> f_low(200), f_high(200), d12(200);
        for (int j = 0; j < 200; ++j)
        {
            auto plus = x.positions;
            auto minus = x.positions;
            // Step relative to the mode's thermal width keeps truncation small.
            double const step = h * std::max(1.0, std::abs(x.positions[j]));
            plus[j] += step;
            minus[j] -= step;
            auto const dp = sstp::adiabatic_at(plus, kModel, bath);
            auto const dm = sstp::adiabatic_at(minus, kModel, bath);
            f_low[j] = -(dp.e_low - dm.e_low) / (2 * step);
            f_high[j] = -(dp.e_high - dm.e_high) / (2 * step);
            auto const vp = solve_levels(dp.gamma, 0.4, center);
            auto const vm = solve_levels(dm.gamma, 0.4, center);
            auto const v0 = solve_levels(data.gamma, 0.4, center);
            d12[j] = (v0[0][0] * (vp[1][0] - vm[1][0]) + v0[0][1] * (vp[1][1] - vm[1][1])) / (2 * step);
        }
        EXPECT_LT(relative_error(data.force_low, f_low), 1e-6) << "draw " << draw;
        EXPECT_LT(relative_error(data.force_high, f_high), 1e-6) << "draw " << draw;
        EXPECT_LT(relative_error(data.coupling, d12), 1e-6) << "draw " << draw;
    }
}

TEST(Adiabatic, EigenvectorsAreOrthonormalAndDiagonalize)
{
    for (double gamma : {-3.0, -0.2, 0.0, 0.3, 5.0})
    {
        auto const geo = sstp::SubsystemGeometry::at(gamma, 0.4);
        auto const v = geo.eigenvectors();
        EXPECT_NEAR(v[0][0] * v[0][0] + v[0][1] * v[0][1], 1.0, 1e-15);
        EXPECT_NEAR(v[1][0] * v[1][0] + v[1][1] * v[1][1], 1.0, 1e-15);
        EXPECT_NEAR(v[0][0] * v[1][0] + v[0][1] * v[1][1], 0.0, 1e-15);
        for (int a = 0; a < 2; ++a)
        {
            // h v = E v with h = [[-gamma, -Omega], [-Omega, gamma]].
            double const e = geo.level(a == 0 ? sstp::Surface::lower : sstp::Surface::upper);
            EXPECT_NEAR(-gamma * v[a][0] - 0.4 * v[a][1], e * v[a][0], 1e-14);
            EXPECT_NEAR(-0.4 * v[a][0] + gamma * v[a][1], e * v[a][1], 1e-14);
        }
    }
}

TEST(Adiabatic, PairFrequency)
{
    auto const geo = sstp::SubsystemGeometry::at(0.3, 0.4);
    EXPECT_DOUBLE_EQ(geo.half_gap, 0.5);
    EXPECT_DOUBLE_EQ(geo.frequency({sstp::Surface::upper, sstp::Surface::lower}), 1.0);
    EXPECT_DOUBLE_EQ(geo.frequency({sstp::Surface::lower, sstp::Surface::upper}), -1.0);
    EXPECT_EQ(geo.frequency({sstp::Surface::upper, sstp::Surface::upper}), 0.0);
}

TEST(Adiabatic, SigmaZLimits)
{
    auto const strong = sstp::SubsystemGeometry::at(1e9, 0.4).sigma_z();
    EXPECT_NEAR(strong[0][0], 1.0, 1e-12);
    EXPECT_NEAR(strong[1][1], -1.0, 1e-12);
    EXPECT_NEAR(strong[0][1], 0.0, 1e-9);
    auto const flat = sstp::SubsystemGeometry::at(0.0, 0.4).sigma_z();
    EXPECT_EQ(flat[0][0], 0.0);
    EXPECT_DOUBLE_EQ(flat[0][1], 1.0);
    EXPECT_DOUBLE_EQ(flat[1][0], 1.0);
}

TEST(Adiabatic, SigmaZIsRotatedDiabaticOperator)
{
    for (double gamma : {-1.5, 0.1, 2.0})
    {
        auto const geo = sstp::SubsystemGeometry::at(gamma, 0.4);
        auto const v = geo.eigenvectors();
        auto const sz = geo.sigma_z();
        for (int a = 0; a < 2; ++a)
        {
            for (int b = 0; b < 2; ++b)
            {
                EXPECT_NEAR(sz[a][b], v[a][0] * v[b][0] - v[a][1] * v[b][1], 1e-14);
            }
        }
    }
}

TEST(Adiabatic, InitialWeightIdentities)
{
    for (double gamma : {-2.0, -0.1, 0.0, 0.7, 4.0})
    {
        auto const geo = sstp::SubsystemGeometry::at(gamma, 0.4);
        auto const w = geo.initial_weights();
        auto const sz = geo.sigma_z();
        // Trace of |up><up| is 1; <sigma_z> in |up> is +1.
        EXPECT_NEAR(w[0][0] + w[1][1], 1.0, 1e-15);
        EXPECT_EQ(w[0][1], w[1][0]);
        double expectation = 0.0;
        for (int a = 0; a < 2; ++a)
        {
            for (int b = 0; b < 2; ++b)
            {
                expectation += w[a][b] * sz[b][a];
            }
        }
        EXPECT_NEAR(expectation, 1.0, 1e-14);
    }
}

TEST(Adiabatic, EnergyAndFrequencyFromPositions)
{
    auto const bath = sstp::discretize_bath(kModel, 8, 1.0, 3.0);
    std::vector<double> r(8, 0.0);
    auto const data = sstp::adiabatic_at(r, kModel, bath);
    EXPECT_DOUBLE_EQ(data.e_low, -0.4);
    EXPECT_DOUBLE_EQ(data.e_high, 0.4);
    EXPECT_DOUBLE_EQ(sstp::adiabatic_frequency(data, {sstp::Surface::upper, sstp::Surface::lower}), 0.8);
    EXPECT_DOUBLE_EQ(sstp::initial_pair_weight(r, {sstp::Surface::lower, sstp::Surface::lower}, kModel, bath), 0.5);
}

TEST(Adiabatic, RejectsZeroTunneling)
{
    auto const bath = sstp::discretize_bath(kModel, 4, 1.0, 3.0);
    sstp::ModelParams flat = kModel;
    flat.omega_tunnel = 0.0;
    std::vector<double> r(4, 0.0);
    EXPECT_THROW(sstp::adiabatic_at(r, flat, bath), std::invalid_argument);
}
