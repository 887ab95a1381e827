#pragma once

// Rank two numerical Grothendieck groups of Kuznetsov components with the
// forgetful and inflation maps to the Mukai lattice of the covering K3.

#include <random>
#include <string>
#include <vector>

#include "mukai/isometry.hpp"
#include "mukai/walls.hpp"

namespace mukai {

enum class KuName { QDS, GM1, GM2 };

struct KuClass {
    Int a = 0, b = 0;
    friend bool operator==(const KuClass&, const KuClass&) = default;
};

inline KuClass operator+(const KuClass& x, const KuClass& y) { return {x.a + y.a, x.b + y.b}; }
inline KuClass operator*(const Int& k, const KuClass& x) { return {k * x.a, k * x.b}; }

class KuLattice {
public:
    explicit KuLattice(KuName name) : name_(name) {
        if (name == KuName::QDS) euler_ = IntMatrix{{-1, -1}, {-1, -2}};
        else euler_ = IntMatrix{{-1, 0}, {0, -1}};
    }

    static KuLattice from_name(const std::string& s) {
        if (s == "qds") return KuLattice(KuName::QDS);
        if (s == "gm1") return KuLattice(KuName::GM1);
        if (s == "gm2") return KuLattice(KuName::GM2);
        throw Error(ErrorCode::InvalidInput, "unknown Kuznetsov lattice '" + s + "'");
    }

    KuName name() const { return name_; }
    std::string id() const { return name_ == KuName::QDS ? "qds" : name_ == KuName::GM1 ? "gm1" : "gm2"; }
    std::string basis() const { return name_ == KuName::QDS ? "mu" : name_ == KuName::GM1 ? "kappa" : "kappa-prime"; }
    SurfaceParams surface() const { return SurfaceParams(Int(name_ == KuName::QDS ? 2 : 5)); }
    const IntMatrix& euler_matrix() const { return euler_; }

    /// The involution with inf o forg = id + tau.
    LatticeIsometry involution() const {
        switch (name_) {
            case KuName::QDS: return tau_q();
            case KuName::GM1: return tau_1();
            case KuName::GM2: return tau_2();
        }
        return tau_q();
    }

    /// forg as two linear forms on (r, D.H, s).
    IntMatrix forg_matrix() const {
        switch (name_) {
            case KuName::QDS: return IntMatrix{{0, 1, 2}, {-1, -1, -1}};
            case KuName::GM1: return IntMatrix{{-1, 0, 1}, {2, 1, 2}};
            case KuName::GM2: return IntMatrix{{4, 1, 1}, {-2, -1, -2}};
        }
        return {};
    }

    /// Images of the two basis classes under inf.
    std::pair<MukaiVector, MukaiVector> inf_images() const {
        switch (name_) {
            case KuName::QDS:  // -(a+b) u1 + b u2
                return {MukaiVector::exact(-1, 0, 1), MukaiVector::exact(0, -1, 2)};
            case KuName::GM1:  // -a w1 - b w2
                return {MukaiVector::exact(-1, 0, 1), MukaiVector::exact(-2, 1, -2)};
            case KuName::GM2:  // -a w'1 - b w'2
                return {MukaiVector::exact(-1, 1, -4), MukaiVector::exact(2, -1, 2)};
        }
        return {};
    }

private:
    KuName name_;
    IntMatrix euler_;
};

inline void require_degree(const KuLattice& ku, const SurfaceParams& sp) {
    if (!(sp == ku.surface()))
        throw Error(ErrorCode::DegreeMismatch, ku.id() + " needs d=" + ku.surface().d.get_str() + ", got d=" + sp.d.get_str());
}

inline KuClass forg(const KuLattice& ku, const MukaiVector& v, const SurfaceParams& sp) {
    require_degree(ku, sp);
    const IntMatrix f = ku.forg_matrix();
    const IntVector x = f * IntVector{v.r, v.hdeg(sp), v.s};
    return {x[0], x[1]};
}

inline MukaiVector inf(const KuLattice& ku, const KuClass& c) {
    const auto [e1, e2] = ku.inf_images();
    return c.a * e1 + c.b * e2;
}

inline Int euler(const KuLattice& ku, const KuClass& x, const KuClass& y) {
    const IntMatrix& e = ku.euler_matrix();
    return x.a * (e(0, 0) * y.a + e(0, 1) * y.b) + x.b * (e(1, 0) * y.a + e(1, 1) * y.b);
}

struct IdentityReport {
    bool forg_inf_doubles = true;
    bool inf_forg_is_id_plus_tau = true;
    bool adjunction = true;
    int adjunction_sign = -1;  // chi(forg u, forg v) = sign * <u, inf forg v>
    std::size_t samples = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline IdentityReport verify_identities(const KuLattice& ku, std::size_t samples, std::uint64_t seed = 20240611,
                                        long coord_bound = 50) {
    if (samples < 1) throw Error(ErrorCode::InvalidInput, "samples must be >= 1");
    const SurfaceParams sp = ku.surface();
    IdentityReport rep;
    rep.samples = samples;
    for (const KuClass& c : {KuClass{1, 0}, KuClass{0, 1}}) {
        if (!(forg(ku, inf(ku, c), sp) == 2 * c)) {
            rep.forg_inf_doubles = false;
            rep.violations.push_back("forg(inf(" + c.a.get_str() + "," + c.b.get_str() + ")) != 2c");
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-coord_bound, coord_bound);
    auto random_vector = [&] { return MukaiVector::exact(dist(rng), dist(rng), dist(rng)); };
    const LatticeIsometry tau = ku.involution();
    for (std::size_t i = 0; i < samples; ++i) {
        const MukaiVector u = random_vector(), v = random_vector();
        const MukaiVector back = inf(ku, forg(ku, v, sp));
        if (!(back == v + tau.apply(v))) {
            rep.inf_forg_is_id_plus_tau = false;
            rep.violations.push_back("inf(forg" + v.str() + ") != v + tau(v)");
        }
        const Int lhs = euler(ku, forg(ku, u, sp), forg(ku, v, sp));
        const Int rhs = rep.adjunction_sign * pair(u, back, sp);
        if (lhs != rhs) {
            rep.adjunction = false;
            rep.violations.push_back("adjunction fails on " + u.str() + ", " + v.str());
        }
    }
    return rep;
}

enum class FiberMode { Exact, Abstract };

/// Classes v with forg(v) = target and square(v) >= square_min. Exact mode
/// works on (r, a, s), abstract mode on (r, D.H, s) with D^2 ranging over
/// the even values allowed by the Hodge bound.
inline std::vector<MukaiVector> fiber(const KuLattice& ku, const KuClass& target, const SurfaceParams& sp, FiberMode mode,
                                      const Int& square_min = -2) {
    require_degree(ku, sp);
    IntMatrix e = ku.forg_matrix();
    const Int two_d = sp.h_squared();
    if (mode == FiberMode::Exact)
        for (std::size_t i = 0; i < 2; ++i) e(i, 1) *= two_d;
    auto sol = detail::solve_affine(e, {target.a, target.b});
    if (!sol) return {};
    if (sol->kernel.rows() != 1) throw Error(ErrorCode::RankMismatch, "forg does not have rank 2");
    const IntVector x0 = sol->x0, k = sol->kernel.row(0);
    // upper bound for square(x0 + j k) as a quadratic in j
    Quadratic bound;
    if (mode == FiberMode::Exact) {
        bound.a = Rat(two_d * k[1] * k[1] - 2 * k[0] * k[2]);
        bound.b = Rat(2 * two_d * x0[1] * k[1] - 2 * (x0[0] * k[2] + k[0] * x0[2]));
        bound.c = Rat(two_d * x0[1] * x0[1] - 2 * x0[0] * x0[2]);
    } else {
        bound.a = make_rat(k[1] * k[1], two_d) - Rat(2 * k[0] * k[2]);
        bound.b = make_rat(2 * x0[1] * k[1], two_d) - Rat(2 * (x0[0] * k[2] + k[0] * x0[2]));
        bound.c = make_rat(x0[1] * x0[1], two_d) - Rat(2 * x0[0] * x0[2]);
    }
    if (bound.a >= 0) throw Error(ErrorCode::InvalidInput, "fiber is not bounded by the square condition");
    bound.c -= Rat(square_min);
    auto range = concave_interval(bound);
    std::vector<MukaiVector> out;
    if (!range) return out;
    for (Int j = range->first; j <= range->second; ++j) {
        const Int r = x0[0] + j * k[0], m = x0[1] + j * k[1], s = x0[2] + j * k[2];
        if (mode == FiberMode::Exact) {
            const MukaiVector v = MukaiVector::exact(r, m, s);
            if (square(v, sp) >= square_min) out.push_back(v);
            continue;
        }
        Int sq_hi = floor_div(m * m, two_d);
        if (mod_pos(sq_hi, 2) != 0) sq_hi -= 1;
        Int sq_lo = square_min + 2 * r * s;
        if (mod_pos(sq_lo, 2) != 0) sq_lo += 1;
        for (Int sq = sq_lo; sq <= sq_hi; sq += 2) {
            if (!hodge_feasible(DivisorClass::abstract(m, sq), sp)) continue;
            out.push_back(MukaiVector::abstract(r, m, sq, s).normalized(sp));
        }
    }
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) { return lex_less(x, y, sp); });
    return out;
}

}  // namespace mukai
