#pragma once

// Integer solutions of one-variable quadratics: exact roots and the integer
// interval where a concave quadratic stays non-negative.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "mukai/number.hpp"

namespace mukai {

/// A j^2 + B j + C with rational coefficients.
struct Quadratic {
    Rat a, b, c;
    Rat operator()(const Rat& j) const { return (a * j + b) * j + c; }
    bool is_zero() const { return a == 0 && b == 0 && c == 0; }
};

/// Integer roots in increasing order; nullopt when the polynomial vanishes identically.
inline std::optional<std::vector<Int>> integer_roots(const Quadratic& f) {
    if (f.is_zero()) return std::nullopt;
    std::vector<Int> out;
    if (f.a == 0) {
        if (f.b == 0) return out;
        const Rat j = -f.c / f.b;
        if (is_integer(j)) out.push_back(j.get_num());
        return out;
    }
    const Rat disc = f.b * f.b - 4 * f.a * f.c;
    auto root = rat_sqrt(disc);
    if (!root) return out;
    for (const Rat& sgn : {Rat(-1), Rat(1)}) {
        const Rat j = (-f.b + sgn * *root) / (2 * f.a);
        if (is_integer(j)) {
            const Int ji = j.get_num();
            if (out.empty() || out.back() != ji) out.push_back(ji);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Integers j with f(j) >= 0 for a strictly concave f (a < 0), as [lo, hi];
/// nullopt when there are none.
inline std::optional<std::pair<Int, Int>> concave_interval(const Quadratic& f) {
    if (f.a >= 0) throw Error(ErrorCode::InvalidInput, "concave_interval needs a negative leading coefficient");
    // vertex, then walk outwards; the walk is bounded by the root distance
    const Rat disc = f.b * f.b - 4 * f.a * f.c;
    if (disc < 0) return std::nullopt;
    const Rat vertex = -f.b / (2 * f.a);
    // half-width sqrt(disc) / (2|a|) bounded via the integer square root
    const Rat w2 = disc / (4 * f.a * f.a);
    const Int width = isqrt(ceil_rat(w2)) + 1;
    Int lo = floor_rat(vertex) - width - 1;
    Int hi = ceil_rat(vertex) + width + 1;
    while (lo <= hi && f(Rat(lo)) < 0) ++lo;
    while (hi >= lo && f(Rat(hi)) < 0) --hi;
    if (lo > hi) return std::nullopt;
    return std::pair{lo, hi};
}

}  // namespace mukai
