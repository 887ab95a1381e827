#pragma once

// Classification data for involutions built from the rotation O_d and
// spherical twists: matrix-power sweeps, the twist involution condition,
// Vieta jumping, Fibonacci families and the O'Grady-type lattice check.

#include <optional>
#include <utility>
#include <vector>

#include "mukai/binary_form.hpp"
#include "mukai/charge.hpp"
#include "mukai/parallel.hpp"

namespace mukai {

inline IntMatrix rotation_matrix(const Int& d) { return rotation(SurfaceParams(d)).exact_matrix(); }

/// O_d^{2n} = I.
inline bool rotation_power_identity(const Int& d, unsigned n) {
    if (n < 1) throw Error(ErrorCode::InvalidInput, "n must be >= 1");
    return rotation_matrix(d).power(2 * n) == IntMatrix::identity(3);
}

inline std::vector<std::pair<Int, unsigned>> classify_rotation_involutions(unsigned d_max, unsigned n_max) {
    if (d_max < 1 || n_max < 1) throw Error(ErrorCode::InvalidInput, "d_max and n_max must be >= 1");
    auto per_d = parallel_map<std::vector<std::pair<Int, unsigned>>>(d_max, [&](std::size_t i) {
        const Int d = static_cast<unsigned long>(i + 1);
        const IntMatrix sq = rotation_matrix(d).power(2);
        std::vector<std::pair<Int, unsigned>> hits;
        IntMatrix acc = sq;
        for (unsigned n = 1; n <= n_max; ++n) {
            if (acc == IntMatrix::identity(3)) hits.emplace_back(d, n);
            acc = acc * sq;
        }
        return hits;
    });
    std::vector<std::pair<Int, unsigned>> out;
    for (auto& v : per_d) out.insert(out.end(), v.begin(), v.end());
    return out;
}

/// (a + b) b d + a^2 + 1 = 0.
inline bool twist_involution_condition(const Int& a, const Int& b, const Int& d) { return (a + b) * b * d + a * a + 1 == 0; }

struct TwistTriple {
    Int a, b, c, d;

    TwistTriple(Int a_, Int b_, Int c_, Int d_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
        if (a < 1 || d < 1) throw Error(ErrorCode::InvalidInput, "twist triple needs a >= 1 and d >= 1");
        if (b * b * d - a * c != -1) throw Error(ErrorCode::NotSpherical, "(a, bH, c) is not spherical");
    }
    friend bool operator==(const TwistTriple&, const TwistTriple&) = default;
};

/// The involution attached to the triple: minus the twist after the rotation.
inline LatticeIsometry twist_involution(const TwistTriple& t) { return negate(tau_U(t.a, t.b, t.c, SurfaceParams(t.d))); }

inline bool is_twist_involution(const TwistTriple& t) {
    return twist_involution(t).exact_matrix().power(2) == IntMatrix::identity(3);
}

/// x^2 + y^2 + 1 = t x y with x >= y >= 1 and x <= bound. Every solution
/// descends by (x, y) -> (y, t y - x) to one with x = y, which forces
/// x^2 (t - 2) = 1, so t = 3 and the chain starts at (1, 1).
inline std::vector<std::pair<Int, Int>> vieta_solve(const Int& t, const Int& bound) {
    if (bound < 1) throw Error(ErrorCode::InvalidInput, "bound must be >= 1");
    std::vector<std::pair<Int, Int>> out;
    std::vector<std::pair<Int, Int>> roots;
    const Int tm2 = t - 2;
    if (tm2 > 0 && mpz_divisible_p(Int(1).get_mpz_t(), tm2.get_mpz_t()) && is_square(Int(1) / tm2)) {
        const Int x = isqrt(Int(1) / tm2);
        if (x >= 1) roots.emplace_back(x, x);
    }
    for (auto [x, y] : roots) {
        while (x <= bound) {
            out.emplace_back(x, y);
            const Int nx = t * x - y;
            y = x;
            x = nx;
        }
    }
    return out;
}

/// F_n = 1 for n <= 1, F_{n+2} = F_{n+1} + F_n.
inline Int fibonacci(long n) {
    if (n <= 1) return 1;
    Int a = 1, b = 1;
    for (long i = 2; i <= n; ++i) {
        Int c = a + b;
        a = b;
        b = c;
    }
    return b;
}

/// For even n <= n_max: (F_n + F_{n-2}, -F_n, F_{n+2} + F_n) and its mirror, d = 5.
inline std::vector<TwistTriple> fibonacci_solutions(unsigned n_max) {
    if (n_max % 2 != 0) throw Error(ErrorCode::InvalidInput, "n_max must be even");
    std::vector<TwistTriple> out;
    for (long n = 0; n <= static_cast<long>(n_max); n += 2) {
        const Int small = fibonacci(n) + fibonacci(n - 2);
        const Int large = fibonacci(n + 2) + fibonacci(n);
        out.emplace_back(small, -fibonacci(n), large, Int(5));
        out.emplace_back(large, -fibonacci(n), small, Int(5));
    }
    return out;
}

/// The triple whose involution fixes fixed_pair_family(n).
inline TwistTriple fibonacci_triple(unsigned n) {
    if (n % 2 != 0) throw Error(ErrorCode::InvalidInput, "n must be even");
    const long m = static_cast<long>(n);
    return {fibonacci(m + 2) + fibonacci(m), -fibonacci(m), fibonacci(m) + fibonacci(m - 2), Int(5)};
}

/// (x, y) = (1/(5 F_n), -(4 F_n - F_{n+2})/(5 F_n)).
inline ChargeParams fixed_pair_family(unsigned n) {
    if (n % 2 != 0) throw Error(ErrorCode::InvalidInput, "n must be even");
    const Int f = fibonacci(n), f2 = fibonacci(static_cast<long>(n) + 2);
    return ChargeParams(make_rat(1, 5 * f), make_rat(-(4 * f - f2), 5 * f));
}

struct Og10Report {
    IntMatrix ambient_gram;  // basis theta(H), B, E
    IntMatrix classes;       // rows: 2B - theta(H), E
    IntMatrix gram;
    IntMatrix target;
    std::optional<IntMatrix> witness;
    bool pass = false;
};

inline Og10Report og10_check() {
    Og10Report rep;
    rep.ambient_gram = IntMatrix{{4, 0, 0}, {0, -2, 3}, {0, 3, -6}};
    rep.classes = IntMatrix{{-1, 2, 0}, {0, 0, 1}};
    rep.gram = rep.classes * rep.ambient_gram * rep.classes.transpose();
    rep.target = IntMatrix{{2, 0}, {0, -6}};
    rep.witness = binary_form_equivalent(rep.gram, rep.target);
    rep.pass = rep.witness.has_value() && rep.witness->transpose() * rep.gram * *rep.witness == rep.target;
    return rep;
}

}  // namespace mukai
