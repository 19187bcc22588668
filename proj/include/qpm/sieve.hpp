#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpm/grid.hpp"
#include "qpm/ledger.hpp"
#include "qpm/rng.hpp"
#include "qpm/vec.hpp"

namespace qpm {

// Label r = (r^(1), ..., r^(d)) of a phase state, componentwise residues in
// Z_{2^n}. The phase itself is never represented: the whole algorithm is a
// stochastic process on these labels plus a final deterministic parity rule.
struct PhaseLabel {
    int n_bits = 0;
    int dims = 0;
    std::array<std::uint64_t, kMaxDims> c{};

    PhaseLabel() = default;
    PhaseLabel(int n, int d) : n_bits(n), dims(d) {
        if (n < 1 || n > 63 || d < 1 || d > kMaxDims)
            throw std::invalid_argument("PhaseLabel: bad shape");
    }
    std::uint64_t mask() const { return (1ULL << n_bits) - 1; }

    PhaseLabel add(const PhaseLabel& o) const;
    PhaseLabel sub(const PhaseLabel& o) const;
    bool low_bits_zero(int count) const;  // low `count` bits of every component

    friend bool operator==(const PhaseLabel& a, const PhaseLabel& b) {
        if (a.n_bits != b.n_bits || a.dims != b.dims) return false;
        for (int i = 0; i < a.dims; ++i)
            if (a.c[i] != b.c[i]) return false;
        return true;
    }
    friend bool operator<(const PhaseLabel& a, const PhaseLabel& b) {
        for (int i = 0; i < a.dims; ++i)
            if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
        return false;
    }
    std::string str() const;
};

// A sieve element. poisoned models the noise event of the trace-distance
// bound: it propagates through every combination and makes the final parity
// a fair coin.
struct PhaseState {
    PhaseLabel label;
    bool poisoned = false;
};

struct SieveSchedule {
    int n_bits = 0;
    int dims = 0;
    int stage_count = 0;
    std::vector<int> bit_widths;       // b_1..b_S, sum = n-1, all >= 0
    std::uint64_t pool_size = 0;       // N (saturated at 2^62 for analytic n)
    std::uint64_t stop_threshold = 0;  // n^2
    double c = 0.0;                    // exponent constant per sqrt(d n)
    double exponent = 0.0;             // c * sqrt(d n)
};

// Builds the stage schedule: S = max(1, round(sqrt(2 log_3 2) sqrt(d n))),
// widths b_i = (c sqrt(n) - log2(3) i)/d rounded to non-negative integers and
// repaired (largest rounding error first) to sum exactly n-1, pool size
// N = ceil(pool_constant * n * 2^(c sqrt(d n))) with the normalized constant
// c = (d sqrt(n)/S + log2(3)(S+1)/(2 sqrt(n))) / sqrt(d)  ->  sqrt(2 log2 3).
SieveSchedule make_schedule(int n, int d, double pool_constant);

// One recursion level of a hidden-shift oracle pair (f, g), reduced to the
// facts the label-level simulation needs: the best shift, the exact set of
// positions where g disagrees with the shifted f, and per-evaluation query
// costs. Positions are stored flat, component 0 most significant.
struct ShiftChannel {
    int n_bits = 0;
    int dims = 0;
    bool alive = true;  // false: no representable shift remains (all mismatch)
    PhaseLabel sealed_shift;
    std::vector<std::uint64_t> mismatch;  // x with g(x) != f(x + shift)
    std::uint64_t f_eval_cost = 1;
    std::uint64_t g_eval_cost = 1;
    Role f_role = Role::text;
    Role g_role = Role::pattern;

    std::uint64_t domain_size() const { return 1ULL << (static_cast<unsigned>(n_bits) * static_cast<unsigned>(dims)); }
    double mismatch_fraction() const {
        if (!alive) return 1.0;
        return static_cast<double>(mismatch.size()) / static_cast<double>(domain_size());
    }
    // Worst-case noise model: each prepared state is independently poisoned
    // with probability min(1, 2 eps), the trace-distance bound as equality.
    double poison_probability() const {
        double p = 2.0 * mismatch_fraction();
        return p > 1.0 ? 1.0 : p;
    }

    std::uint64_t component(std::uint64_t flat, int i) const {
        return (flat >> (static_cast<unsigned>(n_bits) * static_cast<unsigned>(dims - 1 - i))) & ((1ULL << n_bits) - 1);
    }

    // Half-domain rebinding f'(x) = f(2x + a), g'(x) = g(2x + a - beta).
    // beta/a are d-bit masks (bit i = component i). When beta disagrees with
    // the sealed shift's low bits the child pair has no representable shift.
    ShiftChannel restricted(std::uint64_t beta_mask, std::uint64_t a_mask) const;
};

// Hidden-shift problem instance with materialized tables: injective
// f, g : (Z_{2^n})^d -> [q] with g(x) = f(x+s) outside the corrupted set.
// The shift is sealed: only the measurement oracle and test assertions may
// read it (production pattern-matching code never does).
class HiddenShiftInstance {
  public:
    HiddenShiftInstance() = default;
    HiddenShiftInstance(int n, int d, std::uint64_t q, GridString f, GridString g,
                        PhaseLabel shift, std::vector<std::uint64_t> corrupted);

    // Uniform exact instance: f a random injection into [q], g(x) = f(x+s).
    static HiddenShiftInstance plant(int n, int d, std::uint64_t q, Rng rng);

    int n_bits() const { return n_; }
    int dims() const { return d_; }
    std::uint64_t alphabet() const { return q_; }
    const GridString& f_table() const { return f_; }
    const GridString& g_table() const { return g_; }
    const std::vector<std::uint64_t>& corrupted() const { return corrupted_; }
    double noise_fraction() const {
        return static_cast<double>(corrupted_.size()) / static_cast<double>(domain_size());
    }
    std::uint64_t domain_size() const { return 1ULL << (static_cast<unsigned>(n_) * static_cast<unsigned>(d_)); }

    // Oracle/test access only: the sealed planted shift.
    const PhaseLabel& sealed_shift() const { return shift_; }

    // Checks injectivity of both tables and that the mismatch set of the
    // sealed shift is exactly the corrupted set.
    void validate() const;

    ShiftChannel channel() const;

    void save(const std::string& path, const std::string& provenance = "") const;
    static HiddenShiftInstance load(const std::string& path);

  private:
    int n_ = 0, d_ = 0;
    std::uint64_t q_ = 0;
    GridString f_, g_;
    PhaseLabel shift_;
    std::vector<std::uint64_t> corrupted_;
};

// Parity measurement outcome: beta picks a random subset of components, and
// for a clean state parity = beta . s' (mod 2) over the sealed shift's
// lowest-order bits, with certainty.
struct ParitySample {
    std::uint64_t beta_mask = 0;
    int parity = 0;
};

struct StageRecord {
    int stage = 0;
    std::uint64_t bins = 0;
    std::uint64_t input = 0;
    std::uint64_t output = 0;
    std::uint64_t steps = 0;
};

struct SieveResult {
    std::vector<PhaseState> final_states;
    std::vector<StageRecord> stages;
    std::uint64_t prepared = 0;
    std::uint64_t work = 0;  // binned states + combinations, the N log N proxy
    bool success = false;    // final list reached k_target
    bool shortfall = false;  // pool exhausted before the last stage finished
};

class RecoveryError : public std::runtime_error {
  public:
    RecoveryError(const std::string& what, int round) : std::runtime_error(what), round_(round) {}
    int round() const { return round_; }

  private:
    int round_;
};

// Draws one fresh state: uniform label, poisoned with the channel's poison
// probability; charges one oracle query each to f and g (both columns and
// the modeled quantum charge).
PhaseState prepare_state(const ShiftChannel& ch, Rng& rng, QueryLedger& ledger);

// The combination operation: consumes both inputs and yields label a-b on
// success (probability exactly 1/2) or a+b on failure; poison propagates.
std::pair<PhaseState, bool> combine(const PhaseState& a, const PhaseState& b, Rng& coin_rng);

// One stage: bins by the current block of label bits, repeatedly pairs
// within bins (arrival order), routes successes to the output and failures
// to their (possibly new) bin, until at most stop_threshold states remain
// binned or nothing can be paired. Leftover odd states are discarded.
std::vector<PhaseState> run_stage(std::vector<PhaseState> pool, int stage, const SieveSchedule& schedule,
                                  const Rng& run_rng, StageRecord* record, std::uint64_t* work);

// Full sieve: N preparations, stages 1..S, then the final list whose labels
// lie in {0, 2^(n-1)}^d componentwise. n = 1 is a pass-through.
SieveResult run_sieve(const ShiftChannel& ch, const SieveSchedule& schedule, std::uint64_t k_target,
                      const Rng& rng, QueryLedger& ledger);

// Hadamard measurement of a final-form state.
ParitySample measure_final(const PhaseState& state, const ShiftChannel& ch, Rng& rng);

struct RecoverOptions {
    std::uint64_t k_target = 0;  // 0: default 2d + 2
    int sieve_retries = 4;       // extra sieve runs when samples run out
    int votes = 1;               // majority vote count for recover_shift_voted
    bool randomize_offset = false;  // random a per round instead of a = 0
};

// Collects parity samples (re-running the sieve up to the retry cap) until
// the beta vectors span GF(2)^d, then solves for the shift's low bits.
// Returns a d-bit mask. Throws RecoveryError when the cap is exceeded.
std::uint64_t recover_low_bits(const ShiftChannel& ch, double pool_constant, const Rng& rng,
                               QueryLedger& ledger, const RecoverOptions& opts = {});

// Full shift recovery: n rounds of low-bit recovery with domain halving.
PhaseLabel recover_shift(const ShiftChannel& ch, double pool_constant, const Rng& rng,
                         QueryLedger& ledger, const RecoverOptions& opts = {});

// Majority vote over opts.votes independent recoveries (failed votes
// abstain). Empty when no label reaches a strict majority.
std::optional<PhaseLabel> recover_shift_voted(const ShiftChannel& ch, double pool_constant,
                                              const Rng& rng, QueryLedger& ledger,
                                              const RecoverOptions& opts);

// Exhaustive mismatch-count scan used when a channel must be built from
// opaque megacharacter windows: votes via fingerprint matches, then seals
// the argmax shift and its exact mismatch set. All reads are charged as
// simulation work. alive = false when no fingerprint ever matched.
ShiftChannel make_window_channel(const GridString& text, const Vec& text_origin,
                                 const GridString& pattern, std::int64_t block,
                                 std::int64_t window_side, QueryLedger& ledger);

}  // namespace qpm
