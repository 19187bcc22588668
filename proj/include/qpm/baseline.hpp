#pragma once

#include <vector>

#include "qpm/matcher.hpp"

namespace qpm {

// Ground-truth report: every matching offset, by full scan.
struct OracleReport {
    std::vector<Vec> all_matches;  // lexicographically sorted, complete
    QueryLedger queries_used;
};

OracleReport brute_force_match(const GridString& text, const GridString& pattern);

// The classical injective-strings algorithm: reads the k^d corner block of
// the pattern with k = min(ceil(sqrt(n)), m), probes the corner of each of
// the ceil(n/k)^d text blocks, matches the unique colliding symbol against
// the stored block and verifies with ceil(3/gamma) neighbourhood samples.
// Bounded error; requires injective inputs (detected collisions throw).
MatchOutcome classical_injective_match(const GridString& text, const GridString& pattern,
                                       double gamma, Rng rng, QueryLedger& ledger);

// Exhaustive shift scoring for hidden-shift instances: argmax_s of
// |{x : g(x) = f(x+s)}| with lexicographic tie-break. Enforced size cap
// keeps the scan feasible (oracle use only).
PhaseLabel brute_force_shift(const HiddenShiftInstance& inst);

}  // namespace qpm
