#pragma once

// GL2(Z)-equivalence of integral binary quadratic forms given by symmetric
// 2x2 Gram matrices. Definite forms go through Gauss reduction, indefinite
// anisotropic forms through the cycle of reduced forms, isotropic and
// degenerate forms through a normal form attached to their isotropic lines.

#include <optional>
#include <utility>
#include <vector>

#include "mukai/matrix.hpp"
#include "mukai/mukai_core.hpp"

namespace mukai {

namespace detail {

/// Gram [[a, b], [b, c]], i.e. the form a x^2 + 2b xy + c y^2.
struct Gram2 {
    Int a, b, c;
    friend bool operator==(const Gram2&, const Gram2&) = default;
};

inline Gram2 gram2_of(const IntMatrix& g) {
    if (g.rows() != 2 || g.cols() != 2) throw Error(ErrorCode::RankMismatch, "binary form needs a 2x2 Gram matrix");
    if (g(0, 1) != g(1, 0)) throw Error(ErrorCode::InvalidInput, "Gram matrix must be symmetric");
    return {g(0, 0), g(0, 1), g(1, 1)};
}

inline IntMatrix matrix_of(const Gram2& f) { return IntMatrix{{f.a, f.b}, {f.b, f.c}}; }

inline Gram2 transform(const Gram2& f, const IntMatrix& p) {
    return gram2_of(p.transpose() * matrix_of(f) * p);
}

inline IntMatrix inverse_unimodular(const IntMatrix& p) {
    const Int det = p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0);
    if (det != 1 && det != -1) throw Error(ErrorCode::InvalidInput, "matrix is not unimodular");
    return IntMatrix{{det * p(1, 1), -det * p(0, 1)}, {-det * p(1, 0), det * p(0, 0)}};
}

struct Reduced {
    Gram2 form;
    IntMatrix p;  // form = p^T f p
};

/// Gauss reduction of a positive definite form to |2b| <= a <= c, b >= 0.
inline Reduced reduce_definite(const Gram2& f) {
    IntMatrix p = IntMatrix::identity(2);
    Gram2 g = f;
    while (true) {
        if (g.a > g.c) {
            const IntMatrix swap{{0, 1}, {1, 0}};
            p = p * swap;
            g = transform(f, p);
            continue;
        }
        // e2 -> e2 - k e1 with k the nearest integer to b / a
        const Int k = floor_div(2 * g.b + g.a, 2 * g.a);
        if (k != 0) {
            const IntMatrix shear{{1, -k}, {0, 1}};
            p = p * shear;
            g = transform(f, p);
            continue;
        }
        break;
    }
    if (g.b < 0) {
        const IntMatrix flip{{1, 0}, {0, -1}};
        p = p * flip;
        g = transform(f, p);
    }
    return {g, p};
}

/// Form (A, B, C) = A x^2 + B xy + C y^2 for the indefinite cycle machinery.
struct Abc {
    Int a, b, c;
    friend bool operator==(const Abc&, const Abc&) = default;
};

inline Abc abc_of(const Gram2& g) { return {g.a, 2 * g.b, g.c}; }

class IndefiniteCycle {
public:
    explicit IndefiniteCycle(Int disc) : disc_(std::move(disc)), root_floor_(isqrt(disc_)) {}

    bool is_reduced(const Abc& f) const {
        const Int two_a = 2 * abs(f.a);
        return f.b > 0 && f.b <= root_floor_ && two_a >= root_floor_ - f.b + 1 && two_a <= root_floor_ + f.b;
    }

    /// One normalisation-reduction step; returns the new form and the step matrix.
    std::pair<Abc, IntMatrix> rho(const Abc& f) const {
        const Int abs_c = abs(f.c);
        const Int two_c = 2 * abs_c;
        Int lo;
        if (f.c * f.c > disc_) lo = -abs_c + 1;  // -|c| < B' <= |c|
        else lo = root_floor_ - two_c + 1;       // sqrt(D) - 2|c| < B' < sqrt(D)
        // B' = -B (mod 2|c|), B' in [lo, lo + 2|c| - 1]
        const Int bp = lo + mod_pos(-f.b - lo, two_c);
        const Int k = (bp + f.b) / (2 * f.c);
        const Abc next{f.c, bp, (bp * bp - disc_) / (4 * f.c)};
        return {next, IntMatrix{{0, -1}, {1, k}}};
    }

private:
    Int disc_;
    Int root_floor_;
};

inline Abc apply_abc(const Abc& f, const IntMatrix& p) {
    // via the Gram of 2f which is integral
    const IntMatrix g2{{2 * f.a, f.b}, {f.b, 2 * f.c}};
    const IntMatrix t = p.transpose() * g2 * p;
    return {t(0, 0) / 2, t(0, 1) * 2 / 2, t(1, 1) / 2};
}

inline std::optional<IntMatrix> equivalence_indefinite_anisotropic(const Gram2& f1, const Gram2& f2) {
    const Abc g1 = abc_of(f1);
    const Abc g2 = abc_of(f2);
    const Int disc = g1.b * g1.b - 4 * g1.a * g1.c;
    const IndefiniteCycle cyc(disc);

    auto reduce = [&](const Abc& start) {
        Abc f = start;
        IntMatrix p = IntMatrix::identity(2);
        while (!cyc.is_reduced(f)) {
            auto [next, step] = cyc.rho(f);
            f = next;
            p = p * step;
        }
        return std::pair{f, p};
    };

    auto [r1, p1] = reduce(g1);
    std::vector<std::pair<Abc, IntMatrix>> cycle;
    {
        Abc f = r1;
        IntMatrix p = p1;
        do {
            cycle.emplace_back(f, p);
            auto [next, step] = cyc.rho(f);
            f = next;
            p = p * step;
        } while (!(f == r1));
    }
    const IntMatrix mirror{{1, 0}, {0, -1}};
    for (const IntMatrix& pre : {IntMatrix::identity(2), mirror}) {
        const Abc start = apply_abc(g2, pre);
        auto [r2, p2] = reduce(start);
        const IntMatrix q2 = pre * p2;  // r2 = q2^T g2 q2
        for (const auto& [form, q1] : cycle) {
            if (form == r2) return q1 * inverse_unimodular(q2);
        }
    }
    return std::nullopt;
}

/// Unimodular completion: columns (u, w) with det 1, u primitive.
inline IntMatrix complete_basis(const Int& u1, const Int& u2) {
    const Bezout bz = ext_gcd(u1, u2);
    if (bz.g != 1) throw Error(ErrorCode::NonPrimitive, "vector is not primitive");
    // u1 * x + u2 * y = 1  ->  w = (-y, x)
    return IntMatrix{{u1, -bz.y}, {u2, bz.x}};
}

/// Normal forms (0, n, c mod 2n) attached to each isotropic line.
inline std::vector<Reduced> isotropic_normal_forms(const Gram2& f, const Int& n) {
    std::vector<std::pair<Int, Int>> lines;
    if (f.a == 0) {
        lines.emplace_back(1, 0);
        lines.emplace_back(f.c, -2 * f.b);
    } else {
        lines.emplace_back(-f.b + n, f.a);
        lines.emplace_back(-f.b - n, f.a);
    }
    std::vector<Reduced> out;
    for (auto [x, y] : lines) {
        const Int g = gcd(x, y);
        x /= g;
        y /= g;
        IntMatrix p = complete_basis(x, y);
        Gram2 r = transform(f, p);
        if (r.b < 0) {
            p = p * IntMatrix{{1, 0}, {0, -1}};
            r = transform(f, p);
        }
        // w -> w + m u shifts c by 2 m b
        const Int m = -floor_div(r.c, 2 * r.b);
        if (m != 0) {
            p = p * IntMatrix{{1, m}, {0, 1}};
            r = transform(f, p);
        }
        out.push_back({r, p});
    }
    return out;
}

inline Reduced degenerate_normal_form(const Gram2& f) {
    // kernel vector k, completion e; in basis (e, k) the Gram is [[f(e), 0], [0, 0]]
    Int kx, ky;
    if (f.a == 0 && f.b == 0) {
        kx = 1;
        ky = 0;
    } else {
        kx = -f.b;
        ky = f.a;
        const Int g = gcd(kx, ky);
        kx /= g;
        ky /= g;
    }
    IntMatrix base = complete_basis(kx, ky);  // columns (k, e)
    IntMatrix p{{base(0, 1), base(0, 0)}, {base(1, 1), base(1, 0)}};
    return {transform(f, p), p};
}

/// Small-entry search, preferred for its readable witnesses.
inline std::optional<IntMatrix> small_witness(const Gram2& f1, const Gram2& f2) {
    static const int order[] = {0, 1, -1, 2, -2};
    std::optional<IntMatrix> det_minus;
    for (int p00 : order)
        for (int p01 : order)
            for (int p10 : order)
                for (int p11 : order) {
                    const int det = p00 * p11 - p01 * p10;
                    if (det != 1 && det != -1) continue;
                    IntMatrix p{{p00, p01}, {p10, p11}};
                    if (transform(f1, p) == f2) {
                        if (det == 1) return p;
                        if (!det_minus) det_minus = p;
                    }
                }
    return det_minus;
}

}  // namespace detail

/// Returns P in GL2(Z) with P^T g1 P = g2, or nullopt when the forms are
/// inequivalent. Complete for every pair of integral symmetric 2x2 matrices.
inline std::optional<IntMatrix> binary_form_equivalent(const IntMatrix& g1, const IntMatrix& g2) {
    using namespace detail;
    Gram2 f1 = gram2_of(g1);
    Gram2 f2 = gram2_of(g2);
    const Int det1 = f1.a * f1.c - f1.b * f1.b;
    const Int det2 = f2.a * f2.c - f2.b * f2.b;
    if (det1 != det2) return std::nullopt;
    if (gcd(gcd(f1.a, f1.b), f1.c) != gcd(gcd(f2.a, f2.b), f2.c)) return std::nullopt;

    std::optional<IntMatrix> result = small_witness(f1, f2);
    if (!result) {
        if (det1 > 0) {
            Int sign = f1.a > 0 ? Int(1) : Int(-1);
            if ((f2.a > 0) != (f1.a > 0)) return std::nullopt;
            const Gram2 n1{sign * f1.a, sign * f1.b, sign * f1.c};
            const Gram2 n2{sign * f2.a, sign * f2.b, sign * f2.c};
            const Reduced r1 = reduce_definite(n1);
            const Reduced r2 = reduce_definite(n2);
            if (!(r1.form == r2.form)) return std::nullopt;
            result = r1.p * inverse_unimodular(r2.p);
        } else if (det1 == 0) {
            if (f1 == Gram2{0, 0, 0} || f2 == Gram2{0, 0, 0}) {
                if (!(f1 == f2)) return std::nullopt;
                result = IntMatrix::identity(2);
            } else {
                const Reduced r1 = degenerate_normal_form(f1);
                const Reduced r2 = degenerate_normal_form(f2);
                if (!(r1.form == r2.form)) return std::nullopt;
                result = r1.p * inverse_unimodular(r2.p);
            }
        } else {
            const Int disc_quarter = -det1;
            if (is_square(disc_quarter)) {
                const Int n = isqrt(disc_quarter);
                const auto forms1 = isotropic_normal_forms(f1, n);
                const auto forms2 = isotropic_normal_forms(f2, n);
                for (const auto& r1 : forms1)
                    for (const auto& r2 : forms2)
                        if (!result && r1.form == r2.form) result = r1.p * inverse_unimodular(r2.p);
                if (!result) return std::nullopt;
            } else {
                result = equivalence_indefinite_anisotropic(f1, f2);
                if (!result) return std::nullopt;
            }
        }
    }
    if (!(result->transpose() * g1 * *result == g2))
        throw Error(ErrorCode::InvalidInput, "internal: binary form witness failed verification");
    return result;
}

inline std::optional<IntMatrix> binary_form_equivalent(const GramLattice& g1, const GramLattice& g2) {
    if (g1.rank() != 2 || g2.rank() != 2) throw Error(ErrorCode::RankMismatch, "binary forms need rank 2 lattices");
    return binary_form_equivalent(g1.gram, g2.gram);
}

}  // namespace mukai
