#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qpm/injectivity.hpp"
#include "qpm/instances.hpp"
#include "qpm/stats.hpp"

using namespace qpm;

TEST_CASE("gen_random: copy semantics, determinism, validation") {
    GenSpec spec;
    spec.n = 32;
    spec.m = 8;
    spec.d = 2;
    spec.q = 4;
    spec.seed = 11;
    spec.mode = GenMode::random_planted;
    auto a = gen_random(spec);
    auto b = gen_random(spec);
    CHECK(a.text == b.text);  // identical seed, identical instance
    CHECK(a.pattern == b.pattern);
    REQUIRE(a.planted_offset.has_value());
    CHECK(*a.planted_offset == *b.planted_offset);

    // pattern is bit-exact the text window at the recorded offset
    Vec z = Vec::zero(2);
    do {
        CHECK(a.pattern.at(z) == a.text.at(*a.planted_offset + z));
    } while (next_point(z, 8));

    spec.mode = GenMode::random_unplanted;
    auto u = gen_random(spec);
    CHECK_FALSE(u.planted_offset.has_value());

    spec.m = 64;  // m > n
    CHECK_THROWS_AS(gen_random(spec), std::invalid_argument);
}

TEST_CASE("gen_random: symbol frequencies are uniform (chi-squared)") {
    GenSpec spec;
    spec.n = 16;
    spec.m = 4;
    spec.d = 2;
    spec.q = 2;
    spec.mode = GenMode::random_unplanted;
    std::vector<std::uint64_t> counts(2, 0);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        spec.seed = seed;
        auto inst = gen_random(spec);
        for (std::int64_t i = 0; i < inst.text.cell_count(); ++i) ++counts[inst.text.at_flat(i)];
    }
    CHECK(stats::chi2_uniform_pvalue(counts) > 0.01);
}

TEST_CASE("unplanted long patterns match nowhere (mismatch floor regime)") {
    // m >= 16 ln n makes accidental matches vanishingly unlikely
    GenSpec spec;
    spec.n = 1024;
    spec.m = 128;
    spec.d = 1;
    spec.q = 2;
    spec.mode = GenMode::random_unplanted;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        spec.seed = 7000 + seed;
        auto inst = gen_random(spec);
        CHECK(oracle::all_matches(inst.text, inst.pattern).empty());
    }
}

TEST_CASE("injectivity tail experiment stays under the union bound") {
    auto res = injectivity_tail_experiment(64, 1, 2, 2000, 5);
    CHECK(res.threshold_k == 18);  // ceil(3 log2 64)
    double bound = 1.0 / 64;
    double sigma = std::sqrt(bound * (1 - bound) / 2000);
    CHECK(res.frequency <= bound + 3 * sigma);
    CHECK(res.wilson_low <= res.frequency);
    CHECK(res.wilson_high >= res.frequency);
}

TEST_CASE("huge alphabets are injective at block size one") {
    const std::int64_t n = 128;
    const std::uint64_t q = static_cast<std::uint64_t>(n) * n * n;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto s = oracle::random_grid(n, 1, q, Rng(seed));
        CHECK(injectivity_length(s) == 1);
    }
}

TEST_CASE("2-d tail: non-injectivity at the threshold block obeys n^2d q^-k^d") {
    // d=2, n=16, q=2: threshold k = 5, bound 16^4 2^-25 ~ 0.00195
    const std::int64_t k = 5;
    const double bound = std::pow(16.0, 4) * std::pow(2.0, -std::pow(5.0, 2));
    int bad = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        auto s = oracle::random_grid(16, 2, 2, Rng(40000 + static_cast<std::uint64_t>(t)));
        if (!derived_injective(s, k)) ++bad;
    }
    double sigma = std::sqrt(bound * (1 - bound) / trials);
    CHECK(static_cast<double>(bad) / trials <= bound + 3 * sigma);
}

TEST_CASE("gen_adversarial: exact displacement counts and block structure") {
    // gamma = 1/m^d: exactly one displaced cell per non-matching block
    auto inst = gen_adversarial(32, 8, 1, 1.0 / 8, true, 3);
    const std::int64_t blocks = 4;
    int clean_blocks = 0;
    for (std::int64_t b = 0; b < blocks; ++b) {
        int displaced = 0;
        for (std::int64_t i = 0; i < 8; ++i)
            displaced += inst.text.at_flat(b * 8 + i) != inst.pattern.at_flat(i);
        if (displaced == 0)
            ++clean_blocks;
        else
            CHECK(displaced == 1);
    }
    CHECK(clean_blocks == 1);
    REQUIRE(inst.planted_offset.has_value());
    auto matches = oracle::all_matches(inst.text, inst.pattern);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0] == *inst.planted_offset);

    // no clean block: brute force finds nothing
    auto none = gen_adversarial(32, 8, 1, 1.0 / 8, false, 4);
    CHECK(oracle::all_matches(none.text, none.pattern).empty());

    CHECK_THROWS_AS(gen_adversarial(30, 8, 1, 0.25, true, 1), std::invalid_argument);
}

TEST_CASE("adversarial instances meet the gamma promise exactly at block offsets") {
    const std::int64_t m = 4;
    const double gamma = 0.25;
    auto inst = gen_adversarial(16, m, 2, gamma, true, 9);
    const std::int64_t mcells = 16;
    const std::int64_t expect = static_cast<std::int64_t>(std::ceil(gamma * mcells));
    for (std::int64_t bx = 0; bx < 4; ++bx) {
        for (std::int64_t by = 0; by < 4; ++by) {
            Vec corner(2);
            corner[0] = bx * m;
            corner[1] = by * m;
            std::int64_t mismatches = 0;
            Vec z = Vec::zero(2);
            do {
                mismatches += inst.text.at(corner + z) != inst.pattern.at(z);
            } while (next_point(z, m));
            if (corner == *inst.planted_offset)
                CHECK(mismatches == 0);
            else
                CHECK(mismatches == expect);  // exactly the ceil(gamma m^d) displaced cells
        }
    }
}

TEST_CASE("gen_permutation_pair: D1 plants a match, D0 almost never matches") {
    auto d1 = gen_permutation_pair(32, 8, 1, true, 21);
    REQUIRE(d1.planted_offset.has_value());
    auto matches = oracle::all_matches(d1.text, d1.pattern);
    REQUIRE(!matches.empty());
    CHECK(matches[0] == *d1.planted_offset);
    CHECK(injectivity_length(d1.text) == 1);  // permutation: all values distinct

    int with_match = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto d0 = gen_permutation_pair(32, 8, 1, false, 500 + seed);
        CHECK_FALSE(d0.planted_offset.has_value());
        with_match += !oracle::all_matches(d0.text, d0.pattern).empty();
    }
    CHECK(with_match == 0);
}

TEST_CASE("megacharacter_blocking: identity at b=1, match preservation, injectivity") {
    auto inst = gen_permutation_pair(16, 8, 1, true, 31);
    auto [t1, p1] = megacharacter_blocking(inst.text, inst.pattern, 1);
    CHECK(t1 == inst.text);
    CHECK(p1 == inst.pattern);

    // block-aligned planted match survives blocking
    GenSpec spec;
    spec.n = 32;
    spec.m = 8;
    spec.d = 1;
    spec.q = 2;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        spec.seed = 900 + seed;
        spec.mode = GenMode::random_unplanted;
        auto r = gen_random(spec);
        // plant a block-aligned copy manually
        const std::int64_t off = 16;
        for (std::int64_t i = 0; i < 8; ++i) r.text.set_flat(off + i, r.pattern.at_flat(i));
        auto before = oracle::all_matches(r.text, r.pattern);
        auto [tb, pb] = megacharacter_blocking(r.text, r.pattern, 4);
        auto after = oracle::all_matches(tb, pb);
        // every block-aligned match maps to a blocked match and back
        bool had_aligned = false;
        for (auto& s : before) had_aligned = had_aligned || (s[0] % 4 == 0);
        REQUIRE(had_aligned);
        bool found_blocked = false;
        for (auto& s : after) found_blocked = found_blocked || (s[0] == off / 4);
        CHECK(found_blocked);
        for (auto& s : after) {
            Vec raw(1);
            raw[0] = s[0] * 4;
            bool matches_raw = true;
            for (std::int64_t i = 0; i < 8 && matches_raw; ++i)
                matches_raw = r.text.at_flat(raw[0] + i) == r.pattern.at_flat(i);
            CHECK(matches_raw);
        }
    }

    // blocking at the tail-threshold size makes random strings injective
    int injective = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto s = oracle::random_grid(32, 1, 2, Rng(2200 + seed));
        auto t = oracle::random_grid(32, 1, 2, Rng(3200 + seed));
        auto [tb, sb] = megacharacter_blocking(t, s, 16);  // >= ceil(3 log2 32) = 15
        injective += injectivity_length(tb) == 1 && injectivity_length(sb) == 1;
    }
    CHECK(injective >= 29);

    CHECK_THROWS_AS(megacharacter_blocking(inst.text, inst.pattern, 3), std::invalid_argument);
}

TEST_CASE("inject_noise: exact corruption counts, injectivity preserved") {
    auto inst = gen_hidden_shift(5, 1, 77);
    auto same = inject_noise(inst, 0.0, 1);
    CHECK(same.corrupted().empty());
    CHECK(same.g_table() == inst.g_table());

    auto noisy = inject_noise(inst, 0.1, 2);
    CHECK(noisy.corrupted().size() == 4);  // ceil(0.1 * 32)
    CHECK(noisy.noise_fraction() == doctest::Approx(4.0 / 32));
    noisy.validate();  // injectivity + corrupted set both rechecked

    auto again = inject_noise(inst, 0.1, 2);
    CHECK(again.g_table() == noisy.g_table());  // seed determinism

    // alphabet exactly the domain: no fresh values available
    auto tight = HiddenShiftInstance::plant(3, 1, 8, Rng(5));
    CHECK_THROWS_AS(inject_noise(tight, 0.2, 1), std::invalid_argument);
}

TEST_CASE("generator mode names round-trip") {
    for (GenMode m : {GenMode::random_planted, GenMode::random_unplanted, GenMode::adversarial,
                      GenMode::permutation_d0, GenMode::permutation_d1}) {
        auto name = gen_mode_name(m);
        auto back = gen_mode_from_name(name);
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(gen_mode_from_name("nope").has_value());
}

TEST_CASE("adversarial gamma promise holds at every offset, exhaustively") {
    const std::int64_t n = 16, m = 4;
    const double gamma = 0.25;
    auto inst = gen_adversarial(n, m, 1, gamma, true, 12);
    for (std::int64_t s = 0; s + m <= n; ++s) {
        std::int64_t mismatches = 0;
        for (std::int64_t x = 0; x < m; ++x)
            mismatches += inst.text.at_flat(s + x) != inst.pattern.at_flat(x);
        bool is_match = mismatches == 0;
        if (!is_match) CHECK(static_cast<double>(mismatches) / m >= gamma);
    }
}
