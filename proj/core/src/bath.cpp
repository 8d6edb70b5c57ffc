#include "sstp/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace sstp {

BathSpec discretize_bath(ModelParams const& params, int n_modes, double omega_c, double omega_max)
{
    if (n_modes < 1)
    {
        throw std::invalid_argument("discretize_bath: n_modes must be >= 1");
    }
    if (!(omega_c > 0.0) || !(omega_max > 0.0))
    {
        throw std::invalid_argument("discretize_bath: omega_c and omega_max must be > 0");
    }
    if (!(params.kondo_xi >= 0.0))
    {
        throw std::invalid_argument("discretize_bath: kondo_xi must be >= 0");
    }

    BathSpec bath;
    bath.omega_c = omega_c;
    bath.omega_max = omega_max;
    // -expm1(-x) keeps 1 - exp(-x) accurate for small omega_max/omega_c.
    double const tail = -std::expm1(-omega_max / omega_c);
    bath.omega_0 = omega_c / n_modes * tail;

    double const coupling_scale = std::sqrt(params.kondo_xi * bath.omega_0);
    bath.frequencies.resize(n_modes);
    bath.couplings.resize(n_modes);
    for (int j = 1; j <= n_modes; ++j)
    {
        // j omega_0/omega_c = (j/N) tail; the last mode hits omega_max.
        double const fraction = (j == n_modes) ? tail : static_cast<double>(j) / n_modes * tail;
        double const omega = (j == n_modes) ? omega_max : -omega_c * std::log1p(-fraction);
        bath.frequencies[j - 1] = omega;
        bath.couplings[j - 1] = omega * coupling_scale;
    }
    return bath;
}

WignerWidths wigner_widths(double omega, double beta)
{
    // x/tanh(x) -> 1 as x -> 0 recovers classical equipartition.
    double const x = 0.5 * beta * omega;
    double const coth_factor = (x < 1e-8) ? 1.0 : x / std::tanh(x);
    // Var(P) = (omega/2) coth(x) = coth_factor / beta; Var(R) = Var(P)/omega^2.
    double const var_p = std::isinf(beta) ? 0.5 * omega : coth_factor / beta;
    return {var_p / (omega * omega), var_p};
}

double lane_dot(double const* a, double const* b, std::size_t n)
{
    // Fixed lane order keeps the sum deterministic and vectorizable.
    constexpr std::size_t kLanes = 4;
    double acc[kLanes] = {};
    std::size_t j = 0;
    for (; j + kLanes <= n; j += kLanes)
    {
        for (std::size_t l = 0; l < kLanes; ++l)
        {
            acc[l] += a[j + l] * b[j + l];
        }
    }
    double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (; j < n; ++j)
    {
        sum += a[j] * b[j];
    }
    return sum;
}

}  // namespace sstp
