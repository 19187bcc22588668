#pragma once

#include <utility>
#include <vector>

#include "qpm/sieve.hpp"

namespace qpm {

// An exact channel with no backing tables: pool flow in the exact case
// depends only on (n, d) and the coins, so calibration can run label-level.
ShiftChannel synthetic_exact_channel(int n, int d);

struct CalibrateConfig {
    // Sizes whose sieve must succeed. Recovery recurses through every
    // smaller domain, so chains should list the intermediate sizes too.
    std::vector<std::pair<int, int>> sizes;
    int trials_per_size = 30;
    double target = 0.75;
    std::uint64_t k_target = 4;
    std::uint64_t seed = 1;
    double floor = 0.5;       // smallest constant probed
    double ceiling = 1024.0;  // growth cap; beyond this calibration fails
    int bisect_iters = 6;
    int workers = 1;
};

// Default chain covering the shapes this artifact exercises.
std::vector<std::pair<int, int>> default_calibration_sizes(int max_n_d1 = 18, int max_n_d2 = 8);

struct CalibrateResult {
    double pool_constant = 0.0;
    std::vector<std::pair<int, int>> sizes;
    double worst_rate = 0.0;  // success rate of the weakest size at the result
};

// Doubles the constant until every reference size reaches the target
// success rate, then bisects and returns the passing endpoint.
CalibrateResult calibrate_pool_constant(const CalibrateConfig& config);

// Success rate of run_sieve (final list >= k_target) at one size.
double sieve_success_rate(int n, int d, double pool_constant, int trials, std::uint64_t k_target,
                          std::uint64_t seed, int workers);

}  // namespace qpm
