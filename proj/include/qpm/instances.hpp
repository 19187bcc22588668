#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qpm/grid.hpp"
#include "qpm/rng.hpp"
#include "qpm/sieve.hpp"

namespace qpm {

enum class GenMode { random_planted, random_unplanted, adversarial, permutation_d0, permutation_d1 };

const char* gen_mode_name(GenMode m);
std::optional<GenMode> gen_mode_from_name(const std::string& name);

// Everything a generator needs; identical specs with identical seeds produce
// byte-identical instances.
struct GenSpec {
    std::int64_t n = 0;
    std::int64_t m = 0;
    int d = 1;
    std::uint64_t q = 2;
    std::uint64_t seed = 0;
    GenMode mode = GenMode::random_planted;
    double gamma = 0.25;      // adversarial mismatch fraction
    bool leave_clean = true;  // adversarial: keep one matching block
    double eps_noise = 0.0;   // hidden-shift noise fraction
};

struct TextPatternInstance {
    GridString text;
    GridString pattern;
    std::optional<Vec> planted_offset;  // present when a match is guaranteed
};

// Uniform text; pattern either copied from a uniform offset of the text
// (planted, offset recorded) or drawn independently (unplanted).
TextPatternInstance gen_random(const GenSpec& spec);

// Lower-bound family: pattern is the coordinate-identity string over the
// alphabet [2m]^d, text is a tiling of pattern blocks with exactly
// ceil(gamma m^d) cells displaced (by +m per component) in every non-clean
// block. Every non-matching block-aligned offset mismatches on exactly that
// fraction. Requires n = m * p.
TextPatternInstance gen_adversarial(std::int64_t n, std::int64_t m, int d, double gamma,
                                    bool leave_clean, std::uint64_t seed);

// Permutation family over alphabet [n^d]: text a uniform permutation;
// pattern either fresh values sampled without replacement then permuted
// (distribution D0, same_source = false) or a uniform sub-block of the text
// (D1, same_source = true).
TextPatternInstance gen_permutation_pair(std::int64_t n, std::int64_t m, int d, bool same_source,
                                         std::uint64_t seed);

struct TailExperimentResult {
    std::int64_t threshold_k = 0;  // ceil((3 d log_q n)^(1/d))
    std::uint64_t hits = 0;        // trials with injectivity length >= threshold
    std::uint64_t trials = 0;
    double frequency = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 1.0;
};

// Monte Carlo estimate of Pr[upsilon(S) >= ceil((3 d log_q n)^(1/d))] over
// uniform strings, with a Wilson confidence interval.
TailExperimentResult injectivity_tail_experiment(std::int64_t n, int d, std::uint64_t q,
                                                 std::uint64_t trials, std::uint64_t seed);

// Partitions both strings into b x ... x b blocks and re-encodes each block
// as one symbol of the alphabet q^(b^d) (canonical row-major digits, first
// cell most significant). Matching at block-aligned offsets is preserved
// exactly. Requires b to divide both sides and the blocked alphabet to fit
// 64 bits.
std::pair<GridString, GridString> megacharacter_blocking(const GridString& text,
                                                         const GridString& pattern, std::int64_t b);

// Rewrites exactly ceil(eps * 2^(nd)) values of g to fresh values outside
// the current image (so g stays injective and every rewritten position is a
// true mismatch), recording the corrupted set.
HiddenShiftInstance inject_noise(const HiddenShiftInstance& inst, double eps_noise, std::uint64_t seed);

// Uniform exact hidden-shift instance; alphabet defaults to 2^(nd+1).
HiddenShiftInstance gen_hidden_shift(int n, int d, std::uint64_t seed, double eps_noise = 0.0,
                                     std::uint64_t q = 0);

std::string gen_spec_json(const GenSpec& spec);

}  // namespace qpm
