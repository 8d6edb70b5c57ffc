#pragma once

#include <complex>
#include <vector>

#include "sstp/adiabatic.hpp"
#include "sstp/bath.hpp"

namespace sstp {

/// Phase point, current surface pair, and the accumulated adiabatic phase
/// angle theta with phase = exp(i theta).
struct SegmentState
{
    PhasePoint point;
    SurfacePair pair;
    double phase_angle = 0.0;

    std::complex<double> phase() const { return std::polar(1.0, phase_angle); }
};

/// Sign s of the subsystem part of the mean force, F_mean = -w^2 R + s c gamma/G.
constexpr double mean_force_sign(SurfacePair pair) noexcept
{
    if (!pair.diagonal())
    {
        return 0.0;
    }
    return pair.ket == Surface::lower ? 1.0 : -1.0;
}

/// Deterministic segment evolution on the mean surface of the current pair.
///
/// The harmonic bath is integrated exactly; the subsystem mean force
/// s c gamma/G enters through kicks. Off-diagonal pairs feel no subsystem
/// force, so their step is the exact harmonic flow plus the phase
/// increment w_{ket,bra}(gamma_mid) tau. Diagonal pairs use the 4th-order
/// triple-jump composition of kick-drift-kick substeps. Every step is
/// symplectic and time-reversible.
class SegmentPropagator
{
  public:
    SegmentPropagator(ModelParams const& model, BathSpec const& bath, double tau);

    double tau() const noexcept { return tau_; }

    /// Advances one step; gamma_start must equal gamma(R) on entry.
    /// Returns gamma(R) after the step.
    double advance(SegmentState& state, double gamma_start) const;

    void advance(SegmentState& state) const;

  private:
    /// Exact harmonic flow over one (sub)step h.
    struct HarmonicFlow
    {
        double h = 0.0;
        std::vector<double> cos_wh;
        std::vector<double> sin_wh_over_w;
        std::vector<double> w_sin_wh;

        HarmonicFlow(std::vector<double> const& frequencies, double h);
    };

    // Applies the pending kick P += kick c, then the flow; returns gamma(R).
    double kick_and_drift(SegmentState& state, double kick, HarmonicFlow const& flow) const;

    double kick_strength(double gamma, double sign, double h) const;

    ModelParams model_;
    std::vector<double> couplings_;
    double tau_;
    HarmonicFlow full_;
    HarmonicFlow outer_;
    HarmonicFlow inner_;
};

/// One propagator step, by value.
SegmentState step_segment(SegmentState state, double tau, ModelParams const& model, BathSpec const& bath);

/// P^2/2M + (E_ket(R) + E_bra(R))/2.
double segment_energy(SegmentState const& state, ModelParams const& model, BathSpec const& bath);

}  // namespace sstp
