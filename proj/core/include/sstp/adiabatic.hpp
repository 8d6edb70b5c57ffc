#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sstp/bath.hpp"

namespace sstp {

/// Adiabatic level of the two-level subsystem. E_lower <= E_upper.
enum class Surface : std::uint8_t
{
    lower = 0,
    upper = 1,
};

constexpr Surface flipped(Surface s) noexcept
{
    return s == Surface::lower ? Surface::upper : Surface::lower;
}

constexpr int index_of(Surface s) noexcept
{
    return static_cast<int>(s);
}

/// 1-based label used in logs and output (1 = lower, 2 = upper).
constexpr int label_of(Surface s) noexcept
{
    return static_cast<int>(s) + 1;
}

/// Ordered pair (ket, bra) labeling a density-matrix or observable element.
struct SurfacePair
{
    Surface ket = Surface::lower;
    Surface bra = Surface::lower;

    constexpr bool diagonal() const noexcept { return ket == bra; }
    friend constexpr bool operator==(SurfacePair, SurfacePair) = default;
};

inline constexpr std::array<SurfacePair, 4> kAllPairs{{
    {Surface::lower, Surface::lower},
    {Surface::lower, Surface::upper},
    {Surface::upper, Surface::lower},
    {Surface::upper, Surface::upper},
}};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Scalar geometry of h(R) = -Omega sigma_x - gamma sigma_z.
///
/// Everything about the two-level adiabatic problem depends on R only
/// through gamma = sum_j c_j R_j, so the hot path carries this struct
/// instead of N-vectors.
struct SubsystemGeometry
{
    double omega_tunnel;
    double gamma;
    double half_gap;  ///< G = sqrt(Omega^2 + gamma^2)

    static SubsystemGeometry at(double gamma, double omega_tunnel) noexcept;

    /// Subsystem energy (without the bath potential): -G lower, +G upper.
    double level(Surface s) const noexcept { return s == Surface::lower ? -half_gap : half_gap; }

    /// omega_{ket,bra} = (E_ket - E_bra)/hbar.
    double frequency(SurfacePair pair) const noexcept { return level(pair.ket) - level(pair.bra); }

    /// (dE_upper/dgamma - dE_lower/dgamma)/2 = gamma/G.
    double slope() const noexcept { return gamma / half_gap; }

    /// Scalar factor k with d_12 = k c: k = -Omega/(2 G^2).
    double coupling_scale() const noexcept { return -omega_tunnel / (2.0 * half_gap * half_gap); }

    /// Row a holds the (up, down) diabatic components of |a;R>.
    /// Convention: |lower> = (cos phi, sin phi), |upper> = (sin phi, -cos phi)
    /// with phi = atan2(Omega, gamma)/2 in (0, pi/2).
    Matrix2 eigenvectors() const noexcept;

    /// <a;R| sigma_z |b;R>.
    Matrix2 sigma_z() const noexcept;

    /// <bra;R|up><up|ket;R>, indexed [ket][bra].
    Matrix2 initial_weights() const noexcept;
};

/// gamma(R) = sum_j c_j R_j.
double system_bath_coordinate(std::span<double const> positions, BathSpec const& bath);

/// Bath potential sum_j omega_j^2 R_j^2 / 2.
double bath_potential(std::span<double const> positions, BathSpec const& bath);

/// Adiabatic energies, Hellmann-Feynman forces and the coupling vector.
struct AdiabaticData
{
    double e_low = 0.0;
    double e_high = 0.0;
    std::vector<double> force_low;
    std::vector<double> force_high;
    std::vector<double> coupling;  ///< d_12 = <1;R| d/dR |2;R>
    double gap_half = 0.0;
    double gamma = 0.0;

    double energy(Surface s) const noexcept { return s == Surface::lower ? e_low : e_high; }
    std::vector<double> const& force(Surface s) const noexcept
    {
        return s == Surface::lower ? force_low : force_high;
    }
};

AdiabaticData adiabatic_at(std::span<double const> positions, ModelParams const& model, BathSpec const& bath);

double adiabatic_frequency(AdiabaticData const& data, SurfacePair pair);

Matrix2 sigma_z_adiabatic(std::span<double const> positions, ModelParams const& model, BathSpec const& bath);

/// Adiabatic matrix element <bra;R|up><up|ket;R> of the initial subsystem
/// density |up><up|.
double initial_pair_weight(std::span<double const> positions,
                           SurfacePair pair,
                           ModelParams const& model,
                           BathSpec const& bath);

}  // namespace sstp
