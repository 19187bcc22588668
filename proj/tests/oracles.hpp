#pragma once

// Test-only brute-force oracles, deliberately independent of the library's
// algorithmic paths (no hashing, no binary search): direct realizations of
// the definitions they check against.

#include <optional>
#include <vector>

#include "qpm/grid.hpp"
#include "qpm/rng.hpp"
#include "qpm/vec.hpp"

namespace oracle {

using qpm::GridString;
using qpm::Vec;

inline std::vector<qpm::Symbol> read_block(const GridString& s, const Vec& origin, std::int64_t k) {
    std::vector<qpm::Symbol> out;
    Vec z = Vec::zero(s.dims());
    do {
        out.push_back(s.at(origin + z));
    } while (qpm::next_point(z, k));
    return out;
}

// All-pairs injectivity of S^{|>k} straight from the definition.
inline bool derived_injective(const GridString& s, std::int64_t k) {
    const std::int64_t ext = s.side() - k + 1;
    std::vector<std::vector<qpm::Symbol>> blocks;
    Vec p = Vec::zero(s.dims());
    do {
        blocks.push_back(read_block(s, p, k));
    } while (qpm::next_point(p, ext));
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = i + 1; j < blocks.size(); ++j)
            if (blocks[i] == blocks[j]) return false;
    return true;
}

inline std::int64_t injectivity_length(const GridString& s) {
    for (std::int64_t k = 1; k <= s.side(); ++k)
        if (derived_injective(s, k)) return k;
    return s.side();
}

// Window-by-window m-injectivity from the definition: every m-box of
// S^{|>k} (when any exists) must be duplicate-free.
inline bool m_window_injective(const GridString& s, std::int64_t k, std::int64_t m) {
    const std::int64_t ext = s.side() - k + 1;
    if (ext < m) return true;
    const std::int64_t wrange = ext - m + 1;
    Vec w = Vec::zero(s.dims());
    do {
        std::vector<std::vector<qpm::Symbol>> blocks;
        Vec z = Vec::zero(s.dims());
        do {
            blocks.push_back(read_block(s, w + z, k));
        } while (qpm::next_point(z, m));
        for (size_t i = 0; i < blocks.size(); ++i)
            for (size_t j = i + 1; j < blocks.size(); ++j)
                if (blocks[i] == blocks[j]) return false;
    } while (qpm::next_point(w, wrange));
    return true;
}

inline std::int64_t m_injectivity_length(const GridString& s, std::int64_t m) {
    for (std::int64_t k = 1; k <= s.side(); ++k)
        if (m_window_injective(s, k, m)) return k;
    return s.side();
}

// Every offset where the pattern matches the text, by definition.
inline std::vector<Vec> all_matches(const GridString& text, const GridString& pattern) {
    std::vector<Vec> out;
    const std::int64_t range = text.side() - pattern.side() + 1;
    Vec s = Vec::zero(text.dims());
    do {
        bool all = true;
        Vec x = Vec::zero(text.dims());
        do {
            if (text.at(s + x) != pattern.at(x)) {
                all = false;
                break;
            }
        } while (qpm::next_point(x, pattern.side()));
        if (all) out.push_back(s);
    } while (qpm::next_point(s, range));
    return out;
}

inline GridString random_grid(std::int64_t side, int d, std::uint64_t q, qpm::Rng rng) {
    GridString g(d, side, q);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) g.set_flat(i, rng.below(q));
    return g;
}

inline GridString grid_from(std::initializer_list<std::uint64_t> cells, int d, std::int64_t side,
                            std::uint64_t q) {
    GridString g(d, side, q);
    std::int64_t i = 0;
    for (auto c : cells) g.set_flat(i++, c);
    return g;
}

}  // namespace oracle
