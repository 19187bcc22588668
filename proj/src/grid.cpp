#include "qpm/grid.hpp"

#include <cstring>
#include <stdexcept>

#include "qpm/rng.hpp"

namespace qpm {

namespace {

int width_for(std::uint64_t q) {
    std::uint64_t top = q - 1;
    if (top <= 0xffULL) return 1;
    if (top <= 0xffffULL) return 2;
    if (top <= 0xffffffffULL) return 4;
    return 8;
}

}  // namespace

GridString::GridString(int dims, std::int64_t side, std::uint64_t alphabet)
    : dims_(dims), side_(side), q_(alphabet) {
    if (dims < 1 || dims > kMaxDims) throw std::invalid_argument("GridString: dims out of range");
    if (side < 1) throw std::invalid_argument("GridString: side must be positive");
    if (alphabet < 2) throw std::invalid_argument("GridString: alphabet must be >= 2");
    cells_ = ipow(side, dims);
    width_ = width_for(alphabet);
    bytes_.assign(static_cast<size_t>(cells_) * static_cast<size_t>(width_), 0);
}

Symbol GridString::at_flat(std::int64_t i) const {
    if (i < 0 || i >= cells_) throw std::out_of_range("GridString: flat index out of range");
    const std::uint8_t* p = bytes_.data() + static_cast<size_t>(i) * static_cast<size_t>(width_);
    switch (width_) {
        case 1: return *p;
        case 2: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
        case 4: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
        default: { std::uint64_t v; std::memcpy(&v, p, 8); return v; }
    }
}

void GridString::set_flat(std::int64_t i, Symbol s) {
    if (i < 0 || i >= cells_) throw std::out_of_range("GridString: flat index out of range");
    if (s >= q_) throw std::invalid_argument("GridString: symbol out of alphabet");
    std::uint8_t* p = bytes_.data() + static_cast<size_t>(i) * static_cast<size_t>(width_);
    switch (width_) {
        case 1: *p = static_cast<std::uint8_t>(s); break;
        case 2: { std::uint16_t v = static_cast<std::uint16_t>(s); std::memcpy(p, &v, 2); break; }
        case 4: { std::uint32_t v = static_cast<std::uint32_t>(s); std::memcpy(p, &v, 4); break; }
        default: { std::memcpy(p, &s, 8); break; }
    }
}

bool GridString::operator==(const GridString& o) const {
    return dims_ == o.dims_ && side_ == o.side_ && q_ == o.q_ && bytes_ == o.bytes_;
}

Symbol read(const GridString& s, const Vec& x, Role role, QueryLedger& ledger) {
    if (x.dims != s.dims()) throw std::out_of_range("read: coordinate dimension mismatch");
    for (int i = 0; i < x.dims; ++i) {
        if (x[i] < 0 || x[i] >= s.side()) throw std::out_of_range("read: coordinate out of range");
    }
    ledger.charge_read(role, 1);
    return s.at(x);
}

SubgridView::SubgridView(const GridString& b, const Vec& off, std::int64_t k, Role r)
    : base(&b), offset(off), side(k), role(r) {
    if (off.dims != b.dims()) throw std::out_of_range("SubgridView: offset dimension mismatch");
    for (int i = 0; i < off.dims; ++i) {
        if (off[i] < 0 || off[i] + k > b.side()) throw std::out_of_range("SubgridView: window exceeds base");
    }
}

Symbol SubgridView::read(const Vec& z, QueryLedger& ledger) const {
    for (int i = 0; i < z.dims; ++i) {
        if (z[i] < 0 || z[i] >= side) throw std::out_of_range("SubgridView: coordinate out of range");
    }
    return qpm::read(*base, offset + z, role, ledger);
}

DerivedView::DerivedView(const GridString& b, std::int64_t k, Role r)
    : base(&b), block(k), role(r) {
    if (k < 1 || k > b.side()) throw std::out_of_range("DerivedView: block size out of range");
}

std::vector<Symbol> DerivedView::megachar(const Vec& s, QueryLedger& ledger) const {
    const int d = base->dims();
    if (s.dims != d) throw std::out_of_range("megachar: offset dimension mismatch");
    for (int i = 0; i < d; ++i) {
        if (s[i] < 0 || s[i] + block > base->side()) throw std::out_of_range("megachar: offset overruns base");
    }
    std::vector<Symbol> out;
    out.reserve(static_cast<size_t>(ipow(block, d)));
    Vec z = Vec::zero(d);
    do {
        out.push_back(base->at(s + z));
    } while (next_point(z, block));
    ledger.charge_read(role, static_cast<std::uint64_t>(ipow(block, d)));
    return out;
}

bool blocks_equal(const GridString& a, const Vec& a_origin,
                  const GridString& b, const Vec& b_origin, std::int64_t k) {
    Vec z = Vec::zero(a.dims());
    do {
        if (a.at(a_origin + z) != b.at(b_origin + z)) return false;
    } while (next_point(z, k));
    return true;
}

bool blocks_equal_metered(const GridString& a, const Vec& a_origin, Role a_role,
                          const GridString& b, const Vec& b_origin, Role b_role,
                          std::int64_t k, QueryLedger& ledger) {
    std::uint64_t cost = static_cast<std::uint64_t>(ipow(k, a.dims()));
    ledger.charge_read(a_role, cost);
    ledger.charge_read(b_role, cost);
    return blocks_equal(a, a_origin, b, b_origin, k);
}

namespace {

// Fixed odd per-axis bases for the rolling polynomial over 2^64.
constexpr std::uint64_t kAxisBase[kMaxDims] = {
    0x9e3779b97f4a7c15ULL | 1, 0xc2b2ae3d27d4eb4fULL | 1, 0x165667b19e3779f9ULL | 1,
    0x27d4eb2f165667c5ULL | 1, 0x85ebca77c2b2ae63ULL | 1, 0xff51afd7ed558ccdULL | 1,
    0xc4ceb9fe1a85ec53ULL | 1, 0x2545f4914f6cdd1dULL | 1,
};

std::uint64_t pow_u64(std::uint64_t b, std::int64_t e) {
    std::uint64_t r = 1;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace

std::vector<std::uint64_t> block_fingerprints(const GridString& s, std::int64_t k,
                                              const Vec& origin, const Vec& extent,
                                              QueryLedger* ledger) {
    const int d = s.dims();
    if (origin.dims != d || extent.dims != d) throw std::out_of_range("block_fingerprints: dims mismatch");
    if (k < 1) throw std::invalid_argument("block_fingerprints: block size must be positive");
    Vec shape(d);
    std::int64_t volume = 1;
    for (int i = 0; i < d; ++i) {
        if (extent[i] < 1) throw std::invalid_argument("block_fingerprints: empty extent");
        shape.v[i] = extent[i] + k - 1;
        if (origin[i] < 0 || origin[i] + shape[i] > s.side())
            throw std::out_of_range("block_fingerprints: region exceeds base");
        volume *= shape[i];
    }
    if (ledger) ledger->charge_scan(static_cast<std::uint64_t>(volume));

    // Load and pre-mix the region so small alphabets still spread over 64 bits.
    std::vector<std::uint64_t> buf(static_cast<size_t>(volume));
    {
        Vec z = Vec::zero(d);
        std::int64_t i = 0;
        do {
            buf[static_cast<size_t>(i++)] = mix64(s.at(origin + z) ^ 0x5851f42d4c957f2dULL);
        } while (next_point(z, shape));
    }

    // One rolling pass per axis shrinks that axis from extent+k-1 to extent.
    for (int axis = d - 1; axis >= 0; --axis) {
        Vec out_shape = shape;
        out_shape.v[axis] = extent[axis];
        std::int64_t in_stride = 1, out_stride = 1;
        for (int j = axis + 1; j < d; ++j) {
            in_stride *= shape[j];
            out_stride *= out_shape[j];
        }
        std::int64_t out_volume = 1;
        for (int j = 0; j < d; ++j) out_volume *= out_shape[j];
        std::vector<std::uint64_t> next(static_cast<size_t>(out_volume));

        const std::uint64_t base = kAxisBase[axis];
        const std::uint64_t base_k = pow_u64(base, k);
        Vec line = Vec::zero(d);  // iterates with line[axis] == 0
        Vec line_extent = out_shape;
        line_extent.v[axis] = 1;
        do {
            std::int64_t in_pos = 0, out_pos = 0;
            for (int j = 0; j < d; ++j) {
                in_pos = in_pos * shape[j] + line[j];
                out_pos = out_pos * out_shape[j] + line[j];
            }
            std::uint64_t h = 0;
            for (std::int64_t u = 0; u < k; ++u)
                h = h * base + buf[static_cast<size_t>(in_pos + u * in_stride)];
            next[static_cast<size_t>(out_pos)] = h;
            for (std::int64_t t = 1; t < extent[axis]; ++t) {
                h = h * base - buf[static_cast<size_t>(in_pos + (t - 1) * in_stride)] * base_k +
                    buf[static_cast<size_t>(in_pos + (t + k - 1) * in_stride)];
                next[static_cast<size_t>(out_pos + t * out_stride)] = h;
            }
        } while (next_point(line, line_extent));

        buf = std::move(next);
        shape = out_shape;
    }
    return buf;
}

std::uint64_t block_fingerprint(const GridString& s, const Vec& origin, std::int64_t k) {
    return block_fingerprints(s, k, origin, Vec::filled(s.dims(), 1))[0];
}

}  // namespace qpm
