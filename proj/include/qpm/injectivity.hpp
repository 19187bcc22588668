#pragma once

#include "qpm/grid.hpp"

namespace qpm {

// True when all megacharacters of S^{|>k} are pairwise distinct. Fingerprints
// do the grouping; exact block comparison settles every hash collision.
bool derived_injective(const GridString& s, std::int64_t k);

// upsilon(S): minimal k with S^{|>k} injective. Binary search over k, valid
// because injectivity is monotone in k. Always <= side.
std::int64_t injectivity_length(const GridString& s);

// True when every m x ... x m window of S^{|>k} is injective, i.e. no two
// equal megacharacters lie within l-infinity distance < m. Windows that do
// not exist (side of S^{|>k} smaller than m) make the predicate vacuous.
bool derived_m_window_injective(const GridString& s, std::int64_t k, std::int64_t m);

// upsilon(S, m): minimal k with every m-window of S^{|>k} injective.
// Satisfies upsilon(S, m) <= upsilon(S).
std::int64_t m_injectivity_length(const GridString& s, std::int64_t m);

}  // namespace qpm
