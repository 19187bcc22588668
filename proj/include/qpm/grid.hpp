#pragma once

#include <cstdint>
#include <vector>

#include "qpm/ledger.hpp"
#include "qpm/vec.hpp"

namespace qpm {

using Symbol = std::uint64_t;

// A d-dimensional string S : [side]^d -> [q], stored row-major with the last
// coordinate fastest. Symbols live in the smallest unsigned width that holds
// q-1. Immutable in all algorithm paths; generators fill it once.
class GridString {
  public:
    GridString() = default;
    GridString(int dims, std::int64_t side, std::uint64_t alphabet);

    int dims() const { return dims_; }
    std::int64_t side() const { return side_; }
    std::uint64_t alphabet() const { return q_; }
    std::int64_t cell_count() const { return cells_; }
    int symbol_width() const { return width_; }

    Symbol at_flat(std::int64_t i) const;
    Symbol at(const Vec& x) const { return at_flat(flat_index(x, side_)); }
    void set_flat(std::int64_t i, Symbol s);
    void set(const Vec& x, Symbol s) { set_flat(flat_index(x, side_), s); }

    bool operator==(const GridString& o) const;

  private:
    int dims_ = 0;
    std::int64_t side_ = 0;
    std::uint64_t q_ = 0;
    std::int64_t cells_ = 0;
    int width_ = 1;  // bytes per symbol: 1, 2, 4 or 8
    std::vector<std::uint8_t> bytes_;
};

// Metered read: the algorithm-path access to a string, charging one base
// query to the bound ledger column. Out-of-range coordinates throw.
Symbol read(const GridString& s, const Vec& x, Role role, QueryLedger& ledger);

// Substring view S_{offset,side}: read(z) = base(offset + z).
struct SubgridView {
    const GridString* base = nullptr;
    Vec offset;
    std::int64_t side = 0;
    Role role = Role::text;

    SubgridView() = default;
    SubgridView(const GridString& b, const Vec& off, std::int64_t k, Role r);
    Symbol read(const Vec& z, QueryLedger& ledger) const;
};

// Derived string S^{|>k} over megacharacters: value at s is the k x ... x k
// block of the base at offset s, in canonical row-major order. One logical
// read charges k^d base queries.
struct DerivedView {
    const GridString* base = nullptr;
    std::int64_t block = 1;
    Role role = Role::text;

    DerivedView() = default;
    DerivedView(const GridString& b, std::int64_t k, Role r);
    std::int64_t side() const { return base->side() - block + 1; }
    std::vector<Symbol> megachar(const Vec& s, QueryLedger& ledger) const;
};

// Exact cell-by-cell equality of two k-blocks; unmetered (oracle use).
bool blocks_equal(const GridString& a, const Vec& a_origin,
                  const GridString& b, const Vec& b_origin, std::int64_t k);

// Metered variant charging k^d reads per side (rough-check step 2 uses it).
bool blocks_equal_metered(const GridString& a, const Vec& a_origin, Role a_role,
                          const GridString& b, const Vec& b_origin, Role b_role,
                          std::int64_t k, QueryLedger& ledger);

// 64-bit content fingerprints of every k-block whose origin lies in
// [origin, origin + extent) per dimension, row-major over origins. Computed
// with one rolling pass per axis, so the whole scan reads
// prod_i(extent_i + k - 1) base cells; that count is charged to the ledger
// as simulation work when one is supplied. Equal blocks always hash equal;
// unequal blocks collide with ~2^-64 probability, so callers that need
// certainty verify with blocks_equal.
std::vector<std::uint64_t> block_fingerprints(const GridString& s, std::int64_t k,
                                              const Vec& origin, const Vec& extent,
                                              QueryLedger* ledger = nullptr);

// Fingerprint of a single block, consistent with block_fingerprints.
std::uint64_t block_fingerprint(const GridString& s, const Vec& origin, std::int64_t k);

}  // namespace qpm
