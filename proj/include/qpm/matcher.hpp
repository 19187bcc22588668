#pragma once

#include <cstdint>
#include <optional>

#include "qpm/grid.hpp"
#include "qpm/ledger.hpp"
#include "qpm/rng.hpp"
#include "qpm/sieve.hpp"
#include "qpm/vec.hpp"

namespace qpm {

enum class Verdict { found, not_found };

struct MatchOutcome {
    Verdict verdict = Verdict::not_found;
    Vec offset;  // valid when found; 0 <= offset_i <= n - m
    std::uint64_t trials_used = 0;
    QueryLedger ledger;  // per-call snapshot (also merged into the caller's)
};

struct MatchParams {
    std::int64_t nu = 1;        // injectivization block size, <= m/2
    double gamma = 0.25;        // promised mismatch-fraction floor
    double eps_tol = 0.0;       // 0: default 1/(log2^2 m' 2^sqrt((2log2 3) d log2 m')), floored at 1/m'
    std::uint64_t trial_budget = 0;  // 0: default ceil(8 (n/(eps m'))^d ln(1/0.05))
    double pool_constant = 6.0;
    int confirm_reps = 2;      // extra one-sided checks on a claimed offset
    bool full_verify = false;  // exhaustive recount before returning found
    RecoverOptions recover{};
};

// Quantities the offset search derives from (n, m, params).
struct MatchDerived {
    std::int64_t m_prime = 0;       // largest power of two <= m - nu
    double eps = 0.0;               // effective tolerance
    std::int64_t window = 0;        // floor(eps m'), allowed offset excess per axis
    std::int64_t t_range = 0;       // t_i ranges over [0, n - nu - m' + 1]
    std::uint64_t trial_budget = 0;
    std::uint64_t grover_multiplier = 0;  // ceil((n/(eps m'))^(d/2))
};

MatchDerived derive_match_quantities(std::int64_t n, std::int64_t m, int d, const MatchParams& params);

// One-sided equality test under the gamma promise: equal views always
// accept; gamma-far views are rejected with probability >= 1 - e^-3 by
// ceil(3/gamma) uniform samples. The modeled quantum charge is the
// amplitude-amplification cost ceil(3/sqrt(gamma)).
bool check(const SubgridView& a, const SubgridView& b, double gamma, Rng& rng, QueryLedger& ledger);

struct RoughCheckResult {
    bool accepted = false;
    Vec ell;  // recovered relative offset when accepted
};

// Bounded-error verifier for the guess t: recovers the relative shift of the
// injectivized windows (T^nu)_{t,m'} vs (P^nu)_{0,m'} through the sieve,
// rejects when any component exceeds eps m', then confirms with check.
RoughCheckResult rough_check(const GridString& text, const GridString& pattern,
                             const MatchParams& params, const Vec& t, Rng rng, QueryLedger& ledger);

// Globally-injective variant: the final check is a single megacharacter
// comparison T^nu(t + ell) = P^nu(0); requires a unique match.
RoughCheckResult rough_check2(const GridString& text, const GridString& pattern,
                              const MatchParams& params, const Vec& t, Rng rng, QueryLedger& ledger);

// Full offset search: classical rejection-sampling loop over guesses t with
// Grover-model quantum accounting (multiplier x cost of one rough check,
// independent of the loop length). An accepted guess is pinned by one more
// rough check and optionally confirmed before returning found.
MatchOutcome find_match(const GridString& text, const GridString& pattern, const MatchParams& params,
                        Rng rng, QueryLedger& ledger);

// Doubling wrapper: runs find_match with nu = 1, 2, 4, ... up to m/2,
// confirming each claimed match with O(log nu) checks.
MatchOutcome find_match_auto_nu(const GridString& text, const GridString& pattern, double gamma,
                                Rng rng, QueryLedger& ledger,
                                const std::optional<MatchParams>& base = std::nullopt);

// Exploratory gamma estimator (NOT part of the matching contract): samples
// mismatch fractions at random non-matching offsets and returns the observed
// minimum.
double estimate_gamma(const GridString& text, const GridString& pattern, std::uint64_t offsets,
                      std::uint64_t samples_per_offset, Rng rng);

}  // namespace qpm
