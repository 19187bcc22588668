#include <doctest.h>

#include "oracles.hpp"
#include "qpm/baseline.hpp"
#include "qpm/instances.hpp"

using namespace qpm;

TEST_CASE("brute_force_match: self match, constant strings, planted recount") {
    auto t = oracle::random_grid(8, 1, 4, Rng(1));
    auto self = brute_force_match(t, t);
    REQUIRE(self.all_matches.size() == 1);
    CHECK(self.all_matches[0] == Vec::zero(1));

    GridString ct(2, 5, 2), cp(2, 3, 2);
    auto all = brute_force_match(ct, cp);
    CHECK(all.all_matches.size() == 9);  // (5-3+1)^2
    // lexicographic order
    for (size_t i = 1; i < all.all_matches.size(); ++i) CHECK(all.all_matches[i - 1] < all.all_matches[i]);

    GenSpec spec;
    spec.n = 64;
    spec.m = 16;
    spec.d = 1;
    spec.q = 2;
    spec.seed = 5;
    spec.mode = GenMode::random_planted;
    auto inst = gen_random(spec);
    auto rep = brute_force_match(inst.text, inst.pattern);
    bool has_planted = false;
    for (auto& s : rep.all_matches) has_planted = has_planted || s == *inst.planted_offset;
    CHECK(has_planted);
    CHECK(rep.queries_used.classical_work > 0);
}

TEST_CASE("classical_injective_match: ledger scale at n=100, m=10, gamma=1") {
    auto inst = gen_permutation_pair(100, 10, 1, true, 42);
    QueryLedger led;
    auto out = classical_injective_match(inst.text, inst.pattern, 1.0, Rng(1), led);
    REQUIRE(out.verdict == Verdict::found);
    CHECK(out.offset == *inst.planted_offset);
    // k = 10 pattern reads + 10 probes + up to 3 verification sample pairs,
    // plus the probes after the hit never exceed the grid
    std::uint64_t total = led.text_queries + led.pattern_queries;
    CHECK(total >= 20);
    CHECK(total <= 20 + 2 * 3 + 2);
}

TEST_CASE("classical_injective_match agrees with brute force on permutation instances") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        bool planted = seed % 2 == 0;
        auto inst = gen_permutation_pair(64, 8, 1, planted, 9000 + seed);
        QueryLedger led;
        auto out = classical_injective_match(inst.text, inst.pattern, 0.5, Rng(seed), led);
        auto truth = oracle::all_matches(inst.text, inst.pattern);
        if (out.verdict == Verdict::found) {
            bool real = false;
            for (auto& s : truth) real = real || s == out.offset;
            CHECK(real);
        } else {
            CHECK(truth.empty());
        }
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("classical_injective_match: sqrt branch query growth") {
    // m = n: doubling n should multiply queries by about sqrt(2)
    auto queries_at = [](std::int64_t n, std::uint64_t seed) {
        auto inst = gen_permutation_pair(n, n, 1, true, seed);
        QueryLedger led;
        auto out = classical_injective_match(inst.text, inst.pattern, 0.5, Rng(seed), led);
        REQUIRE(out.verdict == Verdict::found);
        return static_cast<double>(led.text_queries + led.pattern_queries);
    };
    double q1 = 0, q2 = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        q1 += queries_at(2048, 100 + s);
        q2 += queries_at(4096, 200 + s);
    }
    double ratio = q2 / q1;
    CHECK(ratio > 1.414 * 0.8);
    CHECK(ratio < 1.414 * 1.2);
}

TEST_CASE("classical_injective_match rejects non-injective corners") {
    GridString t(1, 16, 4);
    Rng rng(3);
    for (int i = 0; i < 16; ++i) t.set_flat(i, rng.below(4));
    GridString p(1, 8, 4);  // constant pattern: corner block collides
    QueryLedger led;
    CHECK_THROWS_AS(classical_injective_match(t, p, 0.5, Rng(1), led), std::runtime_error);
}

TEST_CASE("classical_injective_match in two dimensions") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto inst = gen_permutation_pair(16, 4, 2, true, 700 + seed);
        QueryLedger led;
        auto out = classical_injective_match(inst.text, inst.pattern, 0.5, Rng(seed), led);
        REQUIRE(out.verdict == Verdict::found);
        CHECK(out.offset == *inst.planted_offset);
    }
}
