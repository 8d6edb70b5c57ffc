#include "sstp/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace sstp {

namespace {

// Triple-jump weights: outer + inner + outer = 1.
double const kCubeRoot2 = std::cbrt(2.0);
double const kOuterWeight = 1.0 / (2.0 - kCubeRoot2);
double const kInnerWeight = -kCubeRoot2 / (2.0 - kCubeRoot2);

double checked_tau(double tau)
{
    if (!(tau > 0.0))
    {
        throw std::invalid_argument("SegmentPropagator: tau must be > 0");
    }
    return tau;
}

}  // namespace

SegmentPropagator::HarmonicFlow::HarmonicFlow(std::vector<double> const& frequencies, double step)
    : h(step), cos_wh(frequencies.size()), sin_wh_over_w(frequencies.size()), w_sin_wh(frequencies.size())
{
    for (std::size_t j = 0; j < frequencies.size(); ++j)
    {
        double const w = frequencies[j];
        cos_wh[j] = std::cos(w * h);
        sin_wh_over_w[j] = (w == 0.0) ? h : std::sin(w * h) / w;
        w_sin_wh[j] = w * std::sin(w * h);
    }
}

SegmentPropagator::SegmentPropagator(ModelParams const& model, BathSpec const& bath, double tau)
    : model_(model)
    , couplings_(bath.couplings)
    , tau_(checked_tau(tau))
    , full_(bath.frequencies, tau)
    , outer_(bath.frequencies, kOuterWeight * tau)
    , inner_(bath.frequencies, kInnerWeight * tau)
{
}

double SegmentPropagator::kick_strength(double gamma, double sign, double h) const
{
    return h * sign * SubsystemGeometry::at(gamma, model_.omega_tunnel).slope();
}

double SegmentPropagator::kick_and_drift(SegmentState& state, double kick, HarmonicFlow const& flow) const
{
    double* __restrict r = state.point.positions.data();
    double* __restrict p = state.point.momenta.data();
    double const* c = couplings_.data();
    double const* cw = flow.cos_wh.data();
    double const* sw = flow.sin_wh_over_w.data();
    double const* ws = flow.w_sin_wh.data();
    std::size_t const n = state.point.positions.size();
    for (std::size_t j = 0; j < n; ++j)
    {
        double const r0 = r[j];
        double const p0 = p[j] + kick * c[j];
        r[j] = cw[j] * r0 + sw[j] * p0;
        p[j] = cw[j] * p0 - ws[j] * r0;
    }
    return lane_dot(c, r, n);
}

double SegmentPropagator::advance(SegmentState& state, double gamma_start) const
{
    double const sign = mean_force_sign(state.pair);
    if (sign == 0.0)
    {
        double const gamma_end = kick_and_drift(state, 0.0, full_);
        // gamma is linear in R, so the midpoint value is the average.
        auto const mid = SubsystemGeometry::at(0.5 * (gamma_start + gamma_end), model_.omega_tunnel);
        state.phase_angle += mid.frequency(state.pair) / ModelParams::hbar * tau_;
        return gamma_end;
    }

    // Adjacent half kicks of consecutive substeps are merged.
    double const h_out = outer_.h;
    double const h_in = inner_.h;
    double gamma = kick_and_drift(state, kick_strength(gamma_start, sign, 0.5 * h_out), outer_);
    gamma = kick_and_drift(state, kick_strength(gamma, sign, 0.5 * (h_out + h_in)), inner_);
    gamma = kick_and_drift(state, kick_strength(gamma, sign, 0.5 * (h_in + h_out)), outer_);
    double const last = kick_strength(gamma, sign, 0.5 * h_out);
    auto& p = state.point.momenta;
    for (std::size_t j = 0; j < p.size(); ++j)
    {
        p[j] += last * couplings_[j];
    }
    return gamma;
}

void SegmentPropagator::advance(SegmentState& state) const
{
    double const gamma = lane_dot(couplings_.data(), state.point.positions.data(), couplings_.size());
    advance(state, gamma);
}

SegmentState step_segment(SegmentState state, double tau, ModelParams const& model, BathSpec const& bath)
{
    SegmentPropagator(model, bath, tau).advance(state);
    return state;
}

double segment_energy(SegmentState const& state, ModelParams const& model, BathSpec const& bath)
{
    auto const& p = state.point.momenta;
    double kinetic = 0.0;
    for (double pj : p)
    {
        kinetic += pj * pj;
    }
    kinetic /= 2.0 * ModelParams::mass;
    auto const geo =
        SubsystemGeometry::at(system_bath_coordinate(state.point.positions, bath), model.omega_tunnel);
    double const mean_level = 0.5 * (geo.level(state.pair.ket) + geo.level(state.pair.bra));
    return kinetic + bath_potential(state.point.positions, bath) + mean_level;
}

}  // namespace sstp
