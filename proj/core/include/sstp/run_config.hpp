#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sstp/bath.hpp"
#include "sstp/hopping.hpp"

namespace sstp {

/// Raised for invalid configuration values or keys.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Everything that determines a run. Results are a pure function of it.
struct RunConfig
{
    ModelParams model;
    int n_modes = 200;
    double omega_c = 1.0;
    double omega_max = 3.0;
    SamplingScheme scheme;
    double tau = 0.01;
    double t_max = 100.0;
    long n_traj = 1000;
    std::uint64_t master_seed = 20100405;
    long record_stride = 100;
    bool enumerate_pairs = true;
    double weight_cap = 1e8;
    bool truncate_capped = false;

    /// t_max/tau; throws ConfigError when it is not a positive integer.
    long n_steps() const;
    long n_records() const { return n_steps() / record_stride + 1; }
    double record_time(long record) const { return static_cast<double>(record * record_stride) * tau; }

    /// Throws ConfigError naming the violated constraint.
    void validate() const;
};

}  // namespace sstp
