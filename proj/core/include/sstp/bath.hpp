#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace sstp {

/// Spin-boson parameters in scaled units (M = 1, hbar = 1).
///
/// The subsystem Hamiltonian is h(R) = -Omega sigma_x - gamma(R) sigma_z with
/// gamma(R) = sum_j c_j R_j, and the bath is a set of harmonic modes.
struct ModelParams
{
    double omega_tunnel = 0.4;  ///< Tunnel splitting Omega, strictly positive.
    double kondo_xi = 0.09;     ///< Kondo parameter xi of the Ohmic density.
    double beta = 12.5;         ///< Inverse temperature.

    static constexpr double mass = 1.0;
    static constexpr double hbar = 1.0;
};

/// Discretized Ohmic bath: N harmonic modes with their linear couplings.
struct BathSpec
{
    std::vector<double> frequencies;
    std::vector<double> couplings;
    double omega_c = 1.0;
    double omega_max = 3.0;
    /// Density-of-modes spacing (omega_c/N)(1 - exp(-omega_max/omega_c)).
    double omega_0 = 0.0;

    std::size_t n_modes() const noexcept { return frequencies.size(); }
};

/// Bath coordinates R and momenta P.
struct PhasePoint
{
    std::vector<double> positions;
    std::vector<double> momenta;
};

/// Logarithmic discretization of the Ohmic spectral density
/// J(w) = (pi/2) xi w exp(-w/omega_c):
///   w_j = -omega_c ln(1 - j omega_0/omega_c),  c_j = w_j sqrt(xi omega_0).
///
/// Throws std::invalid_argument for nonpositive n_modes, omega_c or omega_max.
BathSpec discretize_bath(ModelParams const& params, int n_modes, double omega_c, double omega_max);

struct WignerWidths
{
    double var_position;
    double var_momentum;
};

/// Variances of the thermal Wigner function of a unit-mass oscillator.
WignerWidths wigner_widths(double omega, double beta);

/// sum_j a_j b_j in a fixed four-lane order.
double lane_dot(double const* a, double const* b, std::size_t n);

/// Draws an uncoupled thermal Wigner phase point.
///
/// Draw order is R_1, P_1, R_2, P_2, ... so a given generator state maps to
/// a unique phase point.
template <std::uniform_random_bit_generator Rng>
PhasePoint sample_wigner(BathSpec const& bath, double beta, Rng& rng)
{
    std::size_t const n = bath.n_modes();
    PhasePoint point{std::vector<double>(n), std::vector<double>(n)};
    std::normal_distribution<double> gauss;
    for (std::size_t j = 0; j < n; ++j)
    {
        auto const widths = wigner_widths(bath.frequencies[j], beta);
        point.positions[j] = std::sqrt(widths.var_position) * gauss(rng);
        point.momenta[j] = std::sqrt(widths.var_momentum) * gauss(rng);
    }
    return point;
}

}  // namespace sstp
