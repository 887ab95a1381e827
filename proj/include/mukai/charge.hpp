#pragma once

// Central charges Z_{xH, yH} on the algebraic lattice, the solver for
// isometry-invariant parameters, and one-parameter families of the form
// omega(t) = sqrt(k t + c) x0 H with beta fixed.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mukai/isometry.hpp"

namespace mukai {

struct ChargeParams {
    Rat x;  // omega = x H
    Rat y;  // beta = y H

    ChargeParams() : x(1), y(0) {}
    ChargeParams(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {
        x.canonicalize();
        y.canonicalize();
        if (x <= 0) throw Error(ErrorCode::InvalidInput, "omega multiple x must be positive");
    }
    friend bool operator==(const ChargeParams&, const ChargeParams&) = default;
};

struct ChargeValue {
    Rat re, im;
    friend bool operator==(const ChargeValue&, const ChargeValue&) = default;
};

inline ChargeValue eval(const ChargeParams& p, const MukaiVector& v, const SurfaceParams& sp) {
    const Rat h(v.hdeg(sp));
    const Rat r(v.r);
    const Rat d(sp.d);
    ChargeValue out;
    out.re = p.y * h - Rat(v.s) + r * d * (p.x * p.x - p.y * p.y);
    out.im = p.x * (h - 2 * d * r * p.y);
    return out;
}

enum class FixedPairStatus { Unique, None, Underdetermined };

inline std::string to_string(FixedPairStatus s) {
    switch (s) {
        case FixedPairStatus::Unique: return "unique";
        case FixedPairStatus::None: return "none";
        case FixedPairStatus::Underdetermined: return "underdetermined";
    }
    return "?";
}

struct FixedPair {
    FixedPairStatus status = FixedPairStatus::None;
    std::optional<ChargeParams> params;
    std::string note;
};

namespace detail {

/// Solves sum_j (alpha_j * z + beta_j) = 0 for every j: returns
/// {consistent, value or nullopt when z is unconstrained}.
inline std::pair<bool, std::optional<Rat>> solve_linear_family(const std::vector<std::pair<Rat, Rat>>& eqs) {
    std::optional<Rat> value;
    for (const auto& [alpha, beta] : eqs) {
        if (alpha == 0) {
            if (beta != 0) return {false, std::nullopt};
            continue;
        }
        Rat z = -beta / alpha;
        if (value && *value != z) return {false, std::nullopt};
        value = z;
    }
    if (value) {
        for (const auto& [alpha, beta] : eqs)
            if (alpha * *value + beta != 0) return {false, std::nullopt};
    }
    return {true, value};
}

}  // namespace detail

/// Parameters (x, y) with Z_{x,y} = Z_{x,y} o T. The imaginary parts are
/// linear in y after dividing by x > 0; the real parts are then linear in
/// u = x^2 - y^2.
inline FixedPair fixed_pair(const LatticeIsometry& t) {
    const SurfaceParams& sp = t.surface();
    const Rat d(sp.d);
    RatMatrix m = t.rhs_matrix() - RatMatrix::identity(3);
    // Im functional x*(-2d y, 1, 0); Re functional (d u, y, -1) on (r, hdeg, s).
    std::vector<std::pair<Rat, Rat>> im_eqs;
    for (std::size_t j = 0; j < 3; ++j) im_eqs.emplace_back(-2 * d * m(0, j), m(1, j));
    auto [im_ok, y_val] = detail::solve_linear_family(im_eqs);
    FixedPair out;
    if (!im_ok) {
        out.note = "imaginary parts cannot agree";
        return out;
    }
    auto finish = [&](const Rat& u, const Rat& y) {
        const Rat x2 = u + y * y;
        if (x2 <= 0) {
            out.note = "invariance forces x^2 = " + x2.get_str() + " <= 0";
            return out;
        }
        auto x = rat_sqrt(x2);
        if (!x) {
            out.note = "invariance forces x^2 = " + x2.get_str() + ", not a rational square";
            return out;
        }
        out.status = FixedPairStatus::Unique;
        out.params = ChargeParams(*x, y);
        return out;
    };
    if (y_val) {
        const Rat& y = *y_val;
        std::vector<std::pair<Rat, Rat>> re_eqs;
        for (std::size_t j = 0; j < 3; ++j) re_eqs.emplace_back(d * m(0, j), y * m(1, j) - m(2, j));
        auto [re_ok, u_val] = detail::solve_linear_family(re_eqs);
        if (!re_ok) {
            out.note = "real parts cannot agree";
            return out;
        }
        if (!u_val) {
            out.status = FixedPairStatus::Underdetermined;
            out.note = "y = " + y.get_str() + ", x unconstrained";
            return out;
        }
        return finish(*u_val, y);
    }
    // y free: d*m0j*u + m1j*y - m2j = 0, linear in (u, y)
    RatMatrix sys(3, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        sys(j, 0) = d * m(0, j);
        sys(j, 1) = m(1, j);
        sys(j, 2) = -m(2, j);
    }
    // rank analysis by elimination
    std::size_t rank_a = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < 2 && rank_a < 3; ++c) {
        std::size_t p = rank_a;
        while (p < 3 && sys(p, c) == 0) ++p;
        if (p == 3) continue;
        for (std::size_t k = 0; k < 3; ++k) std::swap(sys(p, k), sys(rank_a, k));
        const Rat piv = sys(rank_a, c);
        for (std::size_t k = 0; k < 3; ++k) sys(rank_a, k) /= piv;
        for (std::size_t i = 0; i < 3; ++i) {
            if (i == rank_a || sys(i, c) == 0) continue;
            const Rat f = sys(i, c);
            for (std::size_t k = 0; k < 3; ++k) sys(i, k) -= f * sys(rank_a, k);
        }
        pivots.push_back(c);
        ++rank_a;
    }
    for (std::size_t i = rank_a; i < 3; ++i)
        if (sys(i, 2) != 0) {
            out.note = "real parts cannot agree";
            return out;
        }
    if (rank_a < 2) {
        out.status = FixedPairStatus::Underdetermined;
        out.note = "solution set is positive-dimensional";
        return out;
    }
    return finish(sys(0, 2), sys(1, 2));
}

/// The unique spherical candidate on the ray Im = 0, r > 0 is found in
/// closed form: with y = p/q in lowest terms, Im = 0 and square = -2 force
/// (r, a) = (q, p) and s = (d p^2 + 1)/q.
struct SphericalObstruction {
    std::vector<MukaiVector> hits;  // within the box
    bool certified = false;         // the box result is the complete answer
    std::optional<MukaiVector> candidate;
};

inline SphericalObstruction spherical_obstruction(const ChargeParams& p, const SurfaceParams& sp, const Int& box) {
    if (box < 1) throw Error(ErrorCode::InvalidInput, "search box must be >= 1");
    SphericalObstruction out;
    // brute force over the box, using a = r y on the Im = 0 line
    for (Int r = 1; r <= box; ++r) {
        const Rat a_rat = Rat(r) * p.y;
        if (!is_integer(a_rat)) continue;
        const Int a = a_rat.get_num();
        if (abs(a) > box) continue;
        for (Int s = -box; s <= box; ++s) {
            const MukaiVector w = MukaiVector::exact(r, a, s);
            if (!is_spherical(w, sp)) continue;
            const ChargeValue z = eval(p, w, sp);
            if (z.im == 0 && z.re <= 0) out.hits.push_back(w);
        }
    }
    const Int q = p.y.get_den();
    const Int pn = p.y.get_num();
    const Int num = sp.d * pn * pn + 1;
    bool candidate_hits = false;
    if (mpz_divisible_p(num.get_mpz_t(), q.get_mpz_t())) {
        const MukaiVector w = MukaiVector::exact(q, pn, num / q);
        out.candidate = w;
        candidate_hits = eval(p, w, sp).re <= 0;
    }
    if (!candidate_hits) {
        out.certified = out.hits.empty();
    } else {
        const MukaiVector& w = *out.candidate;
        const bool inside = w.r <= box && abs(w.a()) <= box && abs(w.s) <= box;
        out.certified = inside;
    }
    return out;
}

struct CharteredFamily {
    Rat y;
    Rat x0;
    Rat k;
    Rat c;

    CharteredFamily() : y(0), x0(1), k(0), c(1) {}
    CharteredFamily(Rat y_, Rat x0_, Rat k_, Rat c_) : y(std::move(y_)), x0(std::move(x0_)), k(std::move(k_)), c(std::move(c_)) {
        for (Rat* q : {&y, &x0, &k, &c}) q->canonicalize();
        if (x0 <= 0) throw Error(ErrorCode::InvalidInput, "x0 must be positive");
        if (k < 0) throw Error(ErrorCode::InvalidInput, "k must be non-negative");
        if (c <= 0) throw Error(ErrorCode::InvalidInput, "c must be positive");
    }

    bool in_domain(const Rat& t) const { return t >= 0 && k * t + c > 0; }

    /// omega(t) = x H with x^2 = x0^2 (k t + c); nullopt when x is irrational.
    std::optional<ChargeParams> at(const Rat& t) const {
        auto x = rat_sqrt(x0 * x0 * (k * t + c));
        if (!x) return std::nullopt;
        return ChargeParams(*x, y);
    }

    friend bool operator==(const CharteredFamily&, const CharteredFamily&) = default;
};

inline CharteredFamily quartic_family() { return {Rat(-1, 2), Rat(1, 2), 2, 1}; }
inline CharteredFamily gm_family_1() { return {Rat(-2, 5), Rat(1, 5), 5, 1}; }
inline CharteredFamily gm_family_2() { return {Rat(-3, 5), Rat(1, 5), 5, 1}; }

inline CharteredFamily named_family(const std::string& name) {
    if (name == "quartic") return quartic_family();
    if (name == "gm1") return gm_family_1();
    if (name == "gm2") return gm_family_2();
    throw Error(ErrorCode::InvalidInput, "unknown family '" + name + "'");
}

/// Re(t) = re0 + re1 t; im is Im Z_t divided by the positive factor x0 sqrt(k t + c).
struct FamilyValue {
    Rat re0, re1, im;
    Rat re_at(const Rat& t) const { return re0 + re1 * t; }
    friend bool operator==(const FamilyValue&, const FamilyValue&) = default;
};

inline FamilyValue family_eval(const CharteredFamily& f, const MukaiVector& v, const SurfaceParams& sp) {
    const Rat h(v.hdeg(sp));
    const Rat r(v.r);
    const Rat d(sp.d);
    FamilyValue out;
    out.re0 = f.y * h - Rat(v.s) + r * d * (f.x0 * f.x0 * f.c - f.y * f.y);
    out.re1 = r * d * f.x0 * f.x0 * f.k;
    out.im = h - 2 * d * r * f.y;
    return out;
}

/// Linear scale of omega(t) relative to omega(0): sqrt((k t + c)/c).
inline QuadSurd t_linear(const CharteredFamily& f, const Rat& t) { return QuadSurd::sqrt_of((f.k * t + f.c) / f.c); }

}  // namespace mukai
