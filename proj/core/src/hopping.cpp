#include "sstp/hopping.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sstp {

std::optional<std::vector<double>> HopProposal::shifted_momenta(std::span<double const> momenta,
                                                                std::span<double const> direction) const
{
    if (frustrated)
    {
        return std::nullopt;
    }
    std::vector<double> out(momenta.begin(), momenta.end());
    for (std::size_t j = 0; j < out.size(); ++j)
    {
        out[j] += momentum_shift * direction[j];
    }
    return out;
}

std::optional<double> jumped_projection(double projection, double delta_mean_energy, JumpRule rule)
{
    constexpr double m = ModelParams::mass;
    if (delta_mean_energy == 0.0)
    {
        return projection;
    }
    switch (rule)
    {
    case JumpRule::exact_rescale: {
        double const squared = projection * projection - 2.0 * m * delta_mean_energy;
        if (squared < 0.0)
        {
            return std::nullopt;
        }
        return std::copysign(std::sqrt(squared), projection);
    }
    case JumpRule::first_order_shift:
        if (projection == 0.0)
        {
            return std::nullopt;
        }
        return projection - m * delta_mean_energy / projection;
    }
    return std::nullopt;
}

HopKernel::HopKernel(ModelParams const& model, BathSpec const& bath)
    : omega_tunnel_(model.omega_tunnel), direction_(bath.n_modes(), 0.0)
{
    double sum = 0.0;
    for (double c : bath.couplings)
    {
        sum += c * c;
    }
    norm_c_ = std::sqrt(sum);
    if (norm_c_ > 0.0)
    {
        for (std::size_t j = 0; j < direction_.size(); ++j)
        {
            direction_[j] = -bath.couplings[j] / norm_c_;
        }
    }
}

std::optional<HopProposal> HopKernel::propose(SurfacePair current,
                                              HopSide side,
                                              double gamma,
                                              double c_dot_p,
                                              double tau,
                                              JumpRule rule) const
{
    if (!coupled())
    {
        return std::nullopt;
    }
    auto const geo = SubsystemGeometry::at(gamma, omega_tunnel_);
    Surface const from = (side == HopSide::ket) ? current.ket : current.bra;
    Surface const to = flipped(from);

    // (P/M).d_12 = k (c.P)/M; d_21 = -d_12.
    double const p_dot_d12 = geo.coupling_scale() * c_dot_p / ModelParams::mass;
    double const p_dot_d_target_from = (to == Surface::upper) ? -p_dot_d12 : p_dot_d12;

    HopProposal hop;
    hop.side = side;
    hop.target = to;
    hop.matrix_element = -tau * p_dot_d_target_from;
    hop.rate_x = std::abs(hop.matrix_element);
    hop.delta_mean_energy = 0.5 * (geo.level(to) - geo.level(from));

    double const projection = -c_dot_p / norm_c_;
    auto const jumped = jumped_projection(projection, hop.delta_mean_energy, rule);
    if (!jumped)
    {
        hop.frustrated = true;
        hop.energy_residual = std::numeric_limits<double>::quiet_NaN();
        return hop;
    }
    hop.momentum_shift = *jumped - projection;
    hop.energy_residual =
        (*jumped * *jumped - projection * projection) / (2.0 * ModelParams::mass) + hop.delta_mean_energy;
    return hop;
}

void HopKernel::apply(HopProposal const& proposal, std::vector<double>& momenta) const
{
    if (proposal.frustrated)
    {
        throw std::logic_error("HopKernel::apply: frustrated proposal");
    }
    for (std::size_t j = 0; j < momenta.size(); ++j)
    {
        momenta[j] += proposal.momentum_shift * direction_[j];
    }
}

std::optional<HopProposal> propose_hop(SegmentState const& state,
                                       HopSide side,
                                       double tau,
                                       ModelParams const& model,
                                       BathSpec const& bath,
                                       JumpRule rule)
{
    if (!(tau > 0.0))
    {
        throw std::invalid_argument("propose_hop: tau must be > 0");
    }
    HopKernel const kernel(model, bath);
    double const gamma = system_bath_coordinate(state.point.positions, bath);
    double const c_dot_p = system_bath_coordinate(state.point.momenta, bath);
    return kernel.propose(state.pair, side, gamma, c_dot_p, tau, rule);
}

double energy_residual(std::span<double const> momenta,
                       std::span<double const> shifted_momenta,
                       SurfacePair old_pair,
                       SurfacePair new_pair,
                       std::span<double const> positions,
                       ModelParams const& model,
                       BathSpec const& bath)
{
    double kinetic_old = 0.0;
    double kinetic_new = 0.0;
    for (std::size_t j = 0; j < momenta.size(); ++j)
    {
        kinetic_old += momenta[j] * momenta[j];
        kinetic_new += shifted_momenta[j] * shifted_momenta[j];
    }
    constexpr double two_m = 2.0 * ModelParams::mass;
    auto const geo = SubsystemGeometry::at(system_bath_coordinate(positions, bath), model.omega_tunnel);
    double const mean_new = 0.5 * (geo.level(new_pair.ket) + geo.level(new_pair.bra));
    double const mean_old = 0.5 * (geo.level(old_pair.ket) + geo.level(old_pair.bra));
    // The bath potential is common to both pairs and cancels.
    return kinetic_new / two_m + mean_new - kinetic_old / two_m - mean_old;
}

int energy_weight(double residual, double c_energy)
{
    return std::abs(residual) <= c_energy ? 1 : 0;
}

double hop_probability(HopProposal const& proposal, SamplingScheme const& scheme)
{
    if (proposal.frustrated)
    {
        return 0.0;
    }
    double x = proposal.rate_x;
    if (scheme.variant == SchemeVariant::energy_conserving)
    {
        x *= energy_weight(proposal.energy_residual, scheme.c_energy);
    }
    return x / (1.0 + x);
}

double weight_factor(HopProposal const& proposal, SamplingScheme const& scheme, bool accepted)
{
    double const p = hop_probability(proposal, scheme);
    if (accepted)
    {
        if (!(p > 0.0))
        {
            throw std::logic_error("weight_factor: accepted hop with zero probability");
        }
        return proposal.matrix_element / p;
    }
    return 1.0 / (1.0 - p);
}

}  // namespace sstp
