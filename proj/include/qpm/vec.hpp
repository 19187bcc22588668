#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpm {

// Small inline coordinate vector for d-dimensional indices. d is a runtime
// value, capped so that hot loops never allocate.
inline constexpr int kMaxDims = 8;

struct Vec {
    int dims = 0;
    std::array<std::int64_t, kMaxDims> v{};

    Vec() = default;
    explicit Vec(int d) : dims(d) {
        if (d < 1 || d > kMaxDims) throw std::invalid_argument("Vec: dims out of range");
    }
    static Vec zero(int d) { return Vec(d); }
    static Vec filled(int d, std::int64_t x) {
        Vec r(d);
        for (int i = 0; i < d; ++i) r.v[i] = x;
        return r;
    }

    std::int64_t& operator[](int i) { return v[static_cast<size_t>(i)]; }
    std::int64_t operator[](int i) const { return v[static_cast<size_t>(i)]; }

    friend Vec operator+(const Vec& a, const Vec& b) {
        Vec r(a.dims);
        for (int i = 0; i < a.dims; ++i) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    friend Vec operator-(const Vec& a, const Vec& b) {
        Vec r(a.dims);
        for (int i = 0; i < a.dims; ++i) r.v[i] = a.v[i] - b.v[i];
        return r;
    }
    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dims != b.dims) return false;
        for (int i = 0; i < a.dims; ++i)
            if (a.v[i] != b.v[i]) return false;
        return true;
    }
    friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }

    // Lexicographic, for deterministic ordering.
    friend bool operator<(const Vec& a, const Vec& b) {
        for (int i = 0; i < a.dims; ++i) {
            if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
        }
        return false;
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < dims; ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + ")";
    }
};

// Row-major flat index, last coordinate fastest.
inline std::int64_t flat_index(const Vec& x, std::int64_t side) {
    std::int64_t idx = 0;
    for (int i = 0; i < x.dims; ++i) idx = idx * side + x.v[i];
    return idx;
}

inline Vec unflatten(std::int64_t idx, std::int64_t side, int dims) {
    Vec x(dims);
    for (int i = dims - 1; i >= 0; --i) {
        x.v[i] = idx % side;
        idx /= side;
    }
    return x;
}

inline std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Odometer-style iteration over [0, extent)^dims, row-major order (last
// coordinate fastest). Returns false when the sweep wraps back to zero.
inline bool next_point(Vec& x, std::int64_t extent) {
    for (int i = x.dims - 1; i >= 0; --i) {
        if (++x.v[i] < extent) return true;
        x.v[i] = 0;
    }
    return false;
}

inline bool next_point(Vec& x, const Vec& extent) {
    for (int i = x.dims - 1; i >= 0; --i) {
        if (++x.v[i] < extent.v[i]) return true;
        x.v[i] = 0;
    }
    return false;
}

}  // namespace qpm
