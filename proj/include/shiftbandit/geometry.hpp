#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace shiftbandit {

// ============================================================================
// Dyadic geometry on [0,1]^D. Level k has side r = 2^-k; cells are half-open
// boxes, with points on the top face folded into the last cell so that the
// partition covers the closed cube.
// ============================================================================

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxDepthLimit = 40;

inline double level_side(int depth) { return std::ldexp(1.0, -depth); }

struct BinId {
    std::uint32_t depth = 0;
    std::uint32_t dim = 0;
    std::array<std::uint32_t, kMaxDim> coords{};

    bool operator==(const BinId& o) const {
        if (depth != o.depth || dim != o.dim) return false;
        for (std::uint32_t j = 0; j < dim; ++j)
            if (coords[j] != o.coords[j]) return false;
        return true;
    }
};

inline std::uint32_t coord_of(double x, int depth) {
    const double scaled = std::ldexp(x, depth);
    const std::uint32_t top = (1u << depth) - 1u;
    if (scaled >= static_cast<double>(top) + 1.0) return top;
    const double f = std::floor(scaled);
    return f < 0.0 ? 0u : static_cast<std::uint32_t>(f);
}

inline BinId bin_of(std::span<const double> x, int depth) {
    BinId b;
    b.depth = static_cast<std::uint32_t>(depth);
    b.dim = static_cast<std::uint32_t>(x.size());
    for (std::uint32_t j = 0; j < b.dim; ++j) b.coords[j] = coord_of(x[j], depth);
    return b;
}

inline BinId parent_of(const BinId& b) {
    BinId p = b;
    p.depth -= 1;
    for (std::uint32_t j = 0; j < b.dim; ++j) p.coords[j] = b.coords[j] >> 1;
    return p;
}

// Index of the child cell (0 .. 2^D-1) that contains x inside the given bin.
inline int child_index(const BinId& b, std::span<const double> x) {
    int idx = 0;
    const int cd = static_cast<int>(b.depth) + 1;
    for (std::uint32_t j = 0; j < b.dim; ++j) {
        const std::uint32_t c = coord_of(x[j], cd);
        idx |= static_cast<int>(c & 1u) << j;
    }
    return idx;
}

inline BinId child_id(const BinId& b, int child) {
    BinId c = b;
    c.depth += 1;
    for (std::uint32_t j = 0; j < b.dim; ++j)
        c.coords[j] = (b.coords[j] << 1) | ((static_cast<std::uint32_t>(child) >> j) & 1u);
    return c;
}

// Membership test from bin arithmetic alone (used by recount oracles as an
// independent path; the tree never calls this).
inline bool bin_contains(const BinId& b, std::span<const double> x) {
    for (std::uint32_t j = 0; j < b.dim; ++j)
        if (coord_of(x[j], static_cast<int>(b.depth)) != b.coords[j]) return false;
    return true;
}

inline void bin_center(const BinId& b, std::span<double> out) {
    const double r = level_side(static_cast<int>(b.depth));
    for (std::uint32_t j = 0; j < b.dim; ++j)
        out[j] = (static_cast<double>(b.coords[j]) + 0.5) * r;
}

}  // namespace shiftbandit
