#include "sstp/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace sstp {

namespace {

class DysonEnumerator
{
  public:
    DysonEnumerator(int n_steps, double tau, ModelParams const& model, BathSpec const& bath, SamplingScheme scheme)
        : n_steps_(n_steps)
        , tau_(tau)
        , model_(model)
        , bath_(bath)
        , scheme_(scheme)
        , propagator_(model, bath, tau)
        , kernel_(model, bath)
    {
    }

    BranchSum run(SegmentState start)
    {
        sum_ = {};
        visit(std::move(start), 1.0, 0);
        return sum_;
    }

  private:
    void visit(SegmentState state, double amplitude, int step)
    {
        if (step == n_steps_)
        {
            auto const sz = sigma_z_adiabatic(state.point.positions, model_, bath_);
            sum_.value += amplitude * state.phase() * sz[index_of(state.pair.ket)][index_of(state.pair.bra)];
            ++sum_.n_branches;
            sum_.max_weight = std::max(sum_.max_weight, std::abs(amplitude));
            return;
        }
        propagator_.advance(state);

        if (kernel_.coupled())
        {
            double const gamma = system_bath_coordinate(state.point.positions, bath_);
            double const c_dot_p = system_bath_coordinate(state.point.momenta, bath_);
            for (auto const side : {HopSide::ket, HopSide::bra})
            {
                auto const hop = kernel_.propose(state.pair, side, gamma, c_dot_p, tau_, scheme_.jump_rule);
                if (!(hop_probability(*hop, scheme_) > 0.0))
                {
                    continue;
                }
                SegmentState jumped = state;
                kernel_.apply(*hop, jumped.point.momenta);
                jumped.pair = hop->new_pair(state.pair);
                visit(std::move(jumped), amplitude * hop->matrix_element, step + 1);
            }
        }
        visit(std::move(state), amplitude, step + 1);
    }

    int n_steps_;
    double tau_;
    ModelParams model_;
    BathSpec const& bath_;
    SamplingScheme scheme_;
    SegmentPropagator propagator_;
    HopKernel kernel_;
    BranchSum sum_;
};

}  // namespace

BranchSum enumerate_dyson(PhasePoint const& x0,
                          SurfacePair pair0,
                          int n_steps,
                          double tau,
                          ModelParams const& model,
                          BathSpec const& bath,
                          SamplingScheme const& scheme)
{
    if (n_steps < 0 || n_steps > kMaxEnumeratedSteps)
    {
        throw std::invalid_argument("enumerate_dyson: n_steps must be in [0, " + std::to_string(kMaxEnumeratedSteps) +
                                    "]");
    }
    DysonEnumerator enumerator(n_steps, tau, model, bath, scheme);
    return enumerator.run(SegmentState{x0, pair0, 0.0});
}

double analytic_uncoupled(double t, double omega_tunnel)
{
    return std::cos(2.0 * omega_tunnel * t);
}

}  // namespace sstp
