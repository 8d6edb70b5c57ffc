#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sstp/adiabatic.hpp"
#include "sstp/bath.hpp"
#include "sstp/propagator.hpp"

namespace sstp {

enum class HopSide : std::uint8_t
{
    ket,
    bra,
};

enum class JumpRule : std::uint8_t
{
    exact_rescale,      ///< square-root momentum jump, energy-exact when real
    first_order_shift,  ///< small-gap expansion of the jump, leaves a residual
};

enum class SchemeVariant : std::uint8_t
{
    primitive,
    energy_conserving,
};

struct SamplingScheme
{
    SchemeVariant variant = SchemeVariant::energy_conserving;
    double c_energy = 0.01;  ///< energy window; may be +inf
    JumpRule jump_rule = JumpRule::first_order_shift;
};

/// A candidate nonadiabatic transition on one side of the current pair.
///
/// The jump moves P only along the unit coupling direction d_hat:
/// P' = P + momentum_shift * d_hat.
struct HopProposal
{
    HopSide side = HopSide::ket;
    Surface target = Surface::lower;
    double matrix_element = 0.0;  ///< -tau (P/M).d_{target,current}, signed
    double rate_x = 0.0;          ///< |matrix_element|
    double delta_mean_energy = 0.0;
    double momentum_shift = 0.0;
    double energy_residual = 0.0;
    bool frustrated = false;

    SurfacePair new_pair(SurfacePair current) const noexcept
    {
        return side == HopSide::ket ? SurfacePair{target, current.bra} : SurfacePair{current.ket, target};
    }

    /// P' as an N-vector, or nullopt when frustrated.
    std::optional<std::vector<double>> shifted_momenta(std::span<double const> momenta,
                                                       std::span<double const> direction) const;
};

/// New projection d_hat.P' for a change dE of the mean-surface potential.
/// ExactRescale: (d_hat.P')^2 = (d_hat.P)^2 - 2 M dE with the sign of d_hat.P.
/// FirstOrderShift: d_hat.P' = d_hat.P - M dE/(d_hat.P).
/// nullopt when no real (or finite) solution exists.
std::optional<double> jumped_projection(double projection, double delta_mean_energy, JumpRule rule);

/// Precomputed coupling direction for the spin-boson model.
///
/// d_12(R) = -c Omega/(2 G^2) is always parallel to the coupling vector c,
/// so d_hat = -c/|c| is a property of the bath alone.
class HopKernel
{
  public:
    HopKernel(ModelParams const& model, BathSpec const& bath);

    /// False when c = 0 (xi = 0): no transition can be proposed.
    bool coupled() const noexcept { return norm_c_ > 0.0; }

    std::span<double const> direction() const noexcept { return direction_; }

    /// Scalar proposal from gamma(R) and c.P; nullopt when uncoupled.
    std::optional<HopProposal> propose(SurfacePair current,
                                       HopSide side,
                                       double gamma,
                                       double c_dot_p,
                                       double tau,
                                       JumpRule rule) const;

    /// Applies an accepted, non-frustrated proposal to P.
    void apply(HopProposal const& proposal, std::vector<double>& momenta) const;

  private:
    double omega_tunnel_;
    double norm_c_ = 0.0;
    std::vector<double> direction_;
};

std::optional<HopProposal> propose_hop(SegmentState const& state,
                                       HopSide side,
                                       double tau,
                                       ModelParams const& model,
                                       BathSpec const& bath,
                                       JumpRule rule);

/// P'^2/2M + (E_a + E_a')/2 - P^2/2M - (E_b + E_b')/2 at fixed R, with (a,a')
/// the post-hop pair and (b,b') the pre-hop pair.
double energy_residual(std::span<double const> momenta,
                       std::span<double const> shifted_momenta,
                       SurfacePair old_pair,
                       SurfacePair new_pair,
                       std::span<double const> positions,
                       ModelParams const& model,
                       BathSpec const& bath);

/// Indicator window: 1 if |residual| <= c_energy, else 0.
int energy_weight(double residual, double c_energy);

/// x/(1+x) for the primitive scheme; x w/(1 + x w) with the energy window
/// for the energy-conserving one. Frustrated proposals have probability 0.
double hop_probability(HopProposal const& proposal, SamplingScheme const& scheme);

/// Importance-sampling multiplier: matrix_element/p on an accepted hop,
/// 1/(1 - p) otherwise. The factor is real because d is real.
double weight_factor(HopProposal const& proposal, SamplingScheme const& scheme, bool accepted);

}  // namespace sstp
