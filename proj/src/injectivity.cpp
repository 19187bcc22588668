#include "qpm/injectivity.hpp"

#include <stdexcept>
#include <unordered_map>

namespace qpm {

bool derived_injective(const GridString& s, std::int64_t k) {
    if (k < 1 || k > s.side()) throw std::invalid_argument("derived_injective: k out of range");
    const int d = s.dims();
    const std::int64_t ext = s.side() - k + 1;
    auto hashes = block_fingerprints(s, k, Vec::zero(d), Vec::filled(d, ext));
    std::unordered_map<std::uint64_t, std::vector<std::int64_t>> buckets;
    buckets.reserve(hashes.size() * 2);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(hashes.size()); ++i) {
        auto& bucket = buckets[hashes[static_cast<size_t>(i)]];
        Vec xi = unflatten(i, ext, d);
        for (std::int64_t j : bucket) {
            if (blocks_equal(s, unflatten(j, ext, d), s, xi, k)) return false;
        }
        bucket.push_back(i);
    }
    return true;
}

std::int64_t injectivity_length(const GridString& s) {
    std::int64_t lo = 1, hi = s.side();  // S^{|>side} has one value: injective
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (derived_injective(s, mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

bool derived_m_window_injective(const GridString& s, std::int64_t k, std::int64_t m) {
    if (k < 1 || k > s.side()) throw std::invalid_argument("m_window_injective: k out of range");
    const int d = s.dims();
    const std::int64_t ext = s.side() - k + 1;
    if (ext < m) return true;  // no m-window exists: vacuously injective
    auto hashes = block_fingerprints(s, k, Vec::zero(d), Vec::filled(d, ext));

    struct Bucket {
        std::vector<Vec> pos;
        size_t live = 0;  // entries before live have first coordinate too far back
    };
    std::unordered_map<std::uint64_t, Bucket> buckets;
    buckets.reserve(hashes.size() * 2);
    Vec x = Vec::zero(d);
    std::int64_t i = 0;
    do {
        Bucket& b = buckets[hashes[static_cast<size_t>(i++)]];
        // Row-major arrival keeps first coordinates non-decreasing per bucket.
        while (b.live < b.pos.size() && b.pos[b.live][0] < x[0] - (m - 1)) ++b.live;
        for (size_t j = b.live; j < b.pos.size(); ++j) {
            const Vec& y = b.pos[j];
            bool near = true;
            for (int t = 0; t < d && near; ++t) {
                std::int64_t diff = x[t] - y[t];
                if (diff < 0) diff = -diff;
                near = diff <= m - 1;
            }
            if (near && blocks_equal(s, y, s, x, k)) return false;
        }
        b.pos.push_back(x);
    } while (next_point(x, ext));
    return true;
}

std::int64_t m_injectivity_length(const GridString& s, std::int64_t m) {
    if (m < 1 || m > s.side()) throw std::invalid_argument("m_injectivity_length: m out of range");
    std::int64_t lo = 1, hi = s.side();  // windows vanish near k = side: vacuous
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (derived_m_window_injective(s, mid, m))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

}  // namespace qpm
