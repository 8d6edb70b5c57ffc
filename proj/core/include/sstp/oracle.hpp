#pragma once

#include <complex>

#include "sstp/adiabatic.hpp"
#include "sstp/bath.hpp"
#include "sstp/hopping.hpp"
#include "sstp/propagator.hpp"

namespace sstp {

struct BranchSum
{
    std::complex<double> value;
    long n_branches = 0;
    double max_weight = 0.0;  ///< largest |product of matrix elements| over branches
};

inline constexpr int kMaxEnumeratedSteps = 12;

/// Exact sum over every no-hop / ket-hop / bra-hop sequence of the
/// short-time propagator, started from (X0, pair0).
///
/// Uses the same propagator and hop kernel as the engine but multiplies by
/// the bare matrix elements instead of sampling: the result is the
/// expectation of TrajectoryRunner::branch_estimate for the same scheme.
/// Branches with a closed energy window or a frustrated jump are pruned.
/// Throws std::invalid_argument when n_steps exceeds kMaxEnumeratedSteps.
BranchSum enumerate_dyson(PhasePoint const& x0,
                          SurfacePair pair0,
                          int n_steps,
                          double tau,
                          ModelParams const& model,
                          BathSpec const& bath,
                          SamplingScheme const& scheme);

/// cos(2 Omega t): <sigma_z(t)> of the uncoupled two-level system from |up>.
double analytic_uncoupled(double t, double omega_tunnel);

}  // namespace sstp
