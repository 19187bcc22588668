#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qpm {

// Online Gaussian elimination over GF(2) for small systems (<= 63 unknowns).
// Rows are packed as bit masks with the augmented bit at position `n_vars`.
class Gf2Solver {
  public:
    explicit Gf2Solver(int n_vars) : n_(n_vars), pivot_rows_(static_cast<size_t>(n_vars), 0) {}

    // Feeds one equation sum_{i in coeffs} x_i = rhs. Returns true if the
    // equation increased the rank.
    bool add_equation(std::uint64_t coeffs, bool rhs) {
        std::uint64_t row = coeffs | (static_cast<std::uint64_t>(rhs) << n_);
        for (int i = n_ - 1; i >= 0; --i) {
            if (!(row >> i & 1)) continue;
            if (pivot_rows_[static_cast<size_t>(i)] == 0) {
                pivot_rows_[static_cast<size_t>(i)] = row;
                ++rank_;
                return true;
            }
            row ^= pivot_rows_[static_cast<size_t>(i)];
        }
        return false;  // redundant (or inconsistent: 0 = 1 rows are dropped)
    }

    int rank() const { return rank_; }
    bool full_rank() const { return rank_ == n_; }

    // Back-substituted solution; requires full rank.
    std::optional<std::uint64_t> solve() const {
        if (!full_rank()) return std::nullopt;
        std::uint64_t x = 0;
        for (int i = 0; i < n_; ++i) {
            std::uint64_t row = pivot_rows_[static_cast<size_t>(i)];
            bool v = row >> n_ & 1;
            for (int j = 0; j < i; ++j) {
                if (row >> j & 1) v ^= (x >> j) & 1;
            }
            if (v) x |= 1ULL << i;
        }
        return x;
    }

  private:
    int n_;
    int rank_ = 0;
    std::vector<std::uint64_t> pivot_rows_;  // indexed by pivot position
};

}  // namespace qpm
