#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cirmax/types.hpp"

namespace cirmax {

enum class McScheme { exact_transition, full_truncation_euler };

struct SimConfig {
    std::int64_t n_paths = 100000;
    std::int64_t n_steps = 4096;
    std::uint64_t seed = 0;
    McScheme scheme = McScheme::exact_transition;

    void validate() const {
        if (n_paths < 1 || n_steps < 1)
            throw std::invalid_argument("SimConfig: n_paths and n_steps must be >= 1");
    }
};

struct McEstimate {
    double p_hat;
    double stderr;
    std::int64_t n_hits;
};

// Fraction of simulated paths whose discrete running max reaches p.z.
// exact_transition draws each step from the noncentral chi-square transition
// law (Poisson mixture of gammas); full_truncation_euler clamps the state to
// zero under the square root and in the mean-reversion term. Deterministic
// given cfg.seed, independent of thread count.
McEstimate mc_running_max_tail(const CirParams& p, const SimConfig& cfg);

// Same paths evaluated against several barrier levels at once (p.z ignored).
// Estimates are aligned with z_levels.
std::vector<McEstimate> mc_running_max_tail_multi(const CirParams& p,
                                                  const std::vector<double>& z_levels,
                                                  const SimConfig& cfg);

struct McMoment {
    double mean;
    double stderr;
};

// Sample mean of X_t over the simulated paths (p.z ignored).
McMoment mc_marginal_mean(const CirParams& p, const SimConfig& cfg);

// Log-slope diagnostics of the barrier tail, computed from the numeric
// transform inversion rather than simulation so large z stays reachable.
// The tail should decay like exp(-c z / sigma^2) with
// c = beta*(1 + coth(beta*t/2)) > 0.
struct RateReport {
    double target_slope;
    double ols_slope;
    double pair_slope;
    double ldp_c;
    bool slope_ok;
    bool ldp_ok;
    std::vector<double> z;
    std::vector<double> log_p;
};

RateReport rate_check(const CirParams& p, const std::vector<double>& z_grid);

} // namespace cirmax
