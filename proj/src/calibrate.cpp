#include "qpm/calibrate.hpp"

#include <stdexcept>

#include "qpm/parallel.hpp"

namespace qpm {

ShiftChannel synthetic_exact_channel(int n, int d) {
    ShiftChannel ch;
    ch.n_bits = n;
    ch.dims = d;
    ch.alive = true;
    ch.sealed_shift = PhaseLabel(n, d);
    return ch;
}

std::vector<std::pair<int, int>> default_calibration_sizes(int max_n_d1, int max_n_d2) {
    std::vector<std::pair<int, int>> sizes;
    for (int n = 2; n <= max_n_d1; ++n) sizes.emplace_back(n, 1);
    for (int n = 2; n <= max_n_d2; ++n) sizes.emplace_back(n, 2);
    return sizes;
}

double sieve_success_rate(int n, int d, double pool_constant, int trials, std::uint64_t k_target,
                          std::uint64_t seed, int workers) {
    ShiftChannel ch = synthetic_exact_channel(n, d);
    SieveSchedule sch = make_schedule(n, d, pool_constant);
    Rng root(seed);
    auto results = run_trials<int>(static_cast<size_t>(trials), workers, [&](size_t i) {
        QueryLedger led;
        SieveResult res = run_sieve(ch, sch, k_target, root.fork(i), led);
        return res.success ? 1 : 0;
    });
    int hits = 0;
    for (int r : results) hits += r;
    return static_cast<double>(hits) / static_cast<double>(trials);
}

namespace {

double worst_rate_at(const CalibrateConfig& cfg, double pc) {
    double worst = 1.0;
    for (size_t i = 0; i < cfg.sizes.size(); ++i) {
        auto [n, d] = cfg.sizes[i];
        double rate = sieve_success_rate(n, d, pc, cfg.trials_per_size, cfg.k_target,
                                         cfg.seed ^ (0x517cc1b727220a95ULL * (i + 1)), cfg.workers);
        worst = std::min(worst, rate);
        if (worst < cfg.target) break;  // already failing; no need to finish
    }
    return worst;
}

}  // namespace

CalibrateResult calibrate_pool_constant(const CalibrateConfig& config) {
    if (config.sizes.empty()) throw std::invalid_argument("calibrate: no reference sizes");
    double hi = config.floor;
    double hi_rate = worst_rate_at(config, hi);
    while (hi_rate < config.target) {
        hi *= 2.0;
        if (hi > config.ceiling)
            throw std::runtime_error("calibrate: no pool constant reached the target within the cap");
        hi_rate = worst_rate_at(config, hi);
    }
    double lo = hi / 2.0;
    for (int it = 0; it < config.bisect_iters; ++it) {
        double mid = 0.5 * (lo + hi);
        double rate = worst_rate_at(config, mid);
        if (rate >= config.target) {
            hi = mid;
            hi_rate = rate;
        } else {
            lo = mid;
        }
    }
    return {hi, config.sizes, hi_rate};
}

}  // namespace qpm
