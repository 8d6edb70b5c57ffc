#include "sstp/adiabatic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sstp {

SubsystemGeometry SubsystemGeometry::at(double gamma, double omega_tunnel) noexcept
{
    return {omega_tunnel, gamma, std::hypot(omega_tunnel, gamma)};
}

Matrix2 SubsystemGeometry::eigenvectors() const noexcept
{
    // cos(2 phi) = gamma/G, sin(2 phi) = Omega/G; half-angle forms avoid the
    // cancellation in G - gamma when gamma >> Omega.
    double const phi = 0.5 * std::atan2(omega_tunnel, gamma);
    double const c = std::cos(phi);
    double const s = std::sin(phi);
    return {{{c, s}, {s, -c}}};
}

Matrix2 SubsystemGeometry::sigma_z() const noexcept
{
    double const diag = gamma / half_gap;
    double const off = omega_tunnel / half_gap;
    return {{{diag, off}, {off, -diag}}};
}

Matrix2 SubsystemGeometry::initial_weights() const noexcept
{
    // <a|up> is the first diabatic component of |a>.
    double const phi = 0.5 * std::atan2(omega_tunnel, gamma);
    double const up_lower = std::cos(phi);
    double const up_upper = std::sin(phi);
    return {{{up_lower * up_lower, up_lower * up_upper}, {up_upper * up_lower, up_upper * up_upper}}};
}

double system_bath_coordinate(std::span<double const> positions, BathSpec const& bath)
{
    return lane_dot(positions.data(), bath.couplings.data(), positions.size());
}

double bath_potential(std::span<double const> positions, BathSpec const& bath)
{
    double sum = 0.0;
    for (std::size_t j = 0; j < positions.size(); ++j)
    {
        double const w = bath.frequencies[j];
        sum += w * w * positions[j] * positions[j];
    }
    return 0.5 * sum;
}

namespace {

void require_tunnel(ModelParams const& model)
{
    if (!(model.omega_tunnel > 0.0))
    {
        throw std::invalid_argument("adiabatic basis requires omega_tunnel > 0");
    }
}

}  // namespace

AdiabaticData adiabatic_at(std::span<double const> positions, ModelParams const& model, BathSpec const& bath)
{
    require_tunnel(model);
    std::size_t const n = bath.n_modes();
    auto const geo = SubsystemGeometry::at(system_bath_coordinate(positions, bath), model.omega_tunnel);
    double const v_bath = bath_potential(positions, bath);

    AdiabaticData data;
    data.gamma = geo.gamma;
    data.gap_half = geo.half_gap;
    data.e_low = v_bath - geo.half_gap;
    data.e_high = v_bath + geo.half_gap;
    data.force_low.resize(n);
    data.force_high.resize(n);
    data.coupling.resize(n);

    double const slope = geo.slope();
    double const k = geo.coupling_scale();
    for (std::size_t j = 0; j < n; ++j)
    {
        double const w = bath.frequencies[j];
        double const c = bath.couplings[j];
        double const harmonic = -w * w * positions[j];
        data.force_low[j] = harmonic + c * slope;
        data.force_high[j] = harmonic - c * slope;
        data.coupling[j] = k * c;
    }
    return data;
}

double adiabatic_frequency(AdiabaticData const& data, SurfacePair pair)
{
    return (data.energy(pair.ket) - data.energy(pair.bra)) / ModelParams::hbar;
}

Matrix2 sigma_z_adiabatic(std::span<double const> positions, ModelParams const& model, BathSpec const& bath)
{
    require_tunnel(model);
    return SubsystemGeometry::at(system_bath_coordinate(positions, bath), model.omega_tunnel).sigma_z();
}

double initial_pair_weight(std::span<double const> positions,
                           SurfacePair pair,
                           ModelParams const& model,
                           BathSpec const& bath)
{
    require_tunnel(model);
    auto const w = SubsystemGeometry::at(system_bath_coordinate(positions, bath), model.omega_tunnel)
                       .initial_weights();
    return w[index_of(pair.ket)][index_of(pair.bra)];
}

}  // namespace sstp
