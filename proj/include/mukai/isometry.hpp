#pragma once

// Isometries of the algebraic Mukai lattice. An isometry is stored as a sign
// eps on the divisor direction together with three rational linear forms in
// (r, D.H, s) giving r', l and s', where D' = eps*D + l*H. This acts on
// abstract divisor classes as well as on exact ones.

#include <optional>
#include <string>

#include "mukai/matrix.hpp"
#include "mukai/mukai_core.hpp"

namespace mukai {

class LatticeIsometry {
public:
    LatticeIsometry() : LatticeIsometry(SurfaceParams{}, 1, RatMatrix{{1, 0, 0}, {0, 0, 0}, {0, 0, 1}}) {}

    /// forms: rows are the r', l, s' functionals on (r, hdeg, s).
    LatticeIsometry(SurfaceParams sp, int eps, RatMatrix forms) : sp_(std::move(sp)), eps_(eps), forms_(std::move(forms)) {
        if (eps_ != 1 && eps_ != -1) throw Error(ErrorCode::InvalidInput, "eps must be +1 or -1");
        if (forms_.rows() != 3 || forms_.cols() != 3) throw Error(ErrorCode::InvalidInput, "isometry forms must be 3x3");
        exact_ = compute_exact();
        const Int det = determinant(exact_);
        if (det != 1 && det != -1) throw Error(ErrorCode::InvalidInput, "exact-mode matrix is not unimodular");
        const IntMatrix g = mukai_gram(sp_);
        if (!(exact_.transpose() * g * exact_ == g))
            throw Error(ErrorCode::InvalidInput, "linear map does not preserve the Mukai pairing");
    }

    /// From the action on (r, hdeg, s) coordinates.
    static LatticeIsometry from_rhs_matrix(const SurfaceParams& sp, int eps, const RatMatrix& m) {
        RatMatrix forms = m;
        const Rat two_d = Rat(sp.h_squared());
        for (std::size_t j = 0; j < 3; ++j) {
            Rat row = m(1, j) - (j == 1 ? Rat(eps) : Rat(0));
            forms(1, j) = row / two_d;
        }
        return LatticeIsometry(sp, eps, forms);
    }

    static LatticeIsometry identity(const SurfaceParams& sp) {
        return LatticeIsometry(sp, 1, RatMatrix{{1, 0, 0}, {0, 0, 0}, {0, 0, 1}});
    }

    const SurfaceParams& surface() const { return sp_; }
    int eps() const { return eps_; }
    const RatMatrix& forms() const { return forms_; }

    /// Matrix on (r, a, s) acting on column vectors.
    const IntMatrix& exact_matrix() const { return exact_; }

    /// Matrix on (r, hdeg, s) acting on column vectors.
    RatMatrix rhs_matrix() const {
        RatMatrix m = forms_;
        const Rat two_d = Rat(sp_.h_squared());
        for (std::size_t j = 0; j < 3; ++j) m(1, j) = two_d * forms_(1, j) + (j == 1 ? Rat(eps_) : Rat(0));
        return m;
    }

    MukaiVector apply(const MukaiVector& v) const {
        const Int h = v.hdeg(sp_);
        auto eval = [&](std::size_t i) -> Rat {
            return forms_(i, 0) * Rat(v.r) + forms_(i, 1) * Rat(h) + forms_(i, 2) * Rat(v.s);
        };
        const Rat r = eval(0), l = eval(1), s = eval(2);
        if (!is_integer(r) || !is_integer(l) || !is_integer(s))
            throw Error(ErrorCode::NonIntegral, "isometry image of " + v.str() + " is not integral");
        const Int li = l.get_num();
        if (v.is_exact()) return MukaiVector::exact(r.get_num(), eps_ * v.a() + li, s.get_num());
        const auto& ab = v.div.as_abstract();
        const Int hdeg = eps_ * ab.hdeg + sp_.h_squared() * li;
        const Int sq = ab.sq + 2 * eps_ * li * ab.hdeg + sp_.h_squared() * li * li;
        return MukaiVector::abstract(r.get_num(), hdeg, sq, s.get_num()).normalized(sp_);
    }

    MukaiVector operator()(const MukaiVector& v) const { return apply(v); }

    friend bool operator==(const LatticeIsometry& a, const LatticeIsometry& b) {
        return a.sp_ == b.sp_ && a.eps_ == b.eps_ && a.forms_ == b.forms_;
    }

private:
    IntMatrix compute_exact() const {
        const Rat two_d = Rat(sp_.h_squared());
        RatMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            m(i, 0) = forms_(i, 0);
            m(i, 1) = forms_(i, 1) * two_d;
            m(i, 2) = forms_(i, 2);
        }
        m(1, 1) += eps_;
        auto out = to_int_matrix(m);
        if (!out) throw Error(ErrorCode::NonIntegral, "exact-mode matrix has non-integral entries");
        return *out;
    }

    SurfaceParams sp_;
    int eps_;
    RatMatrix forms_;
    IntMatrix exact_;
};

inline std::ostream& operator<<(std::ostream& os, const LatticeIsometry& t) {
    return os << "{eps=" << t.eps() << ", forms=" << t.forms() << "}";
}

/// t1 first, then t2.
inline LatticeIsometry compose(const LatticeIsometry& t1, const LatticeIsometry& t2) {
    if (!(t1.surface() == t2.surface())) throw Error(ErrorCode::DegreeMismatch, "composing isometries of different degrees");
    return LatticeIsometry::from_rhs_matrix(t1.surface(), t1.eps() * t2.eps(), t2.rhs_matrix() * t1.rhs_matrix());
}

inline LatticeIsometry negate(const LatticeIsometry& t) {
    return LatticeIsometry::from_rhs_matrix(t.surface(), -t.eps(), -t.rhs_matrix());
}

inline LatticeIsometry inverse(const LatticeIsometry& t) {
    auto inv = inverse(t.rhs_matrix());
    if (!inv) throw Error(ErrorCode::InvalidInput, "isometry is not invertible");
    return LatticeIsometry::from_rhs_matrix(t.surface(), t.eps(), *inv);
}

inline LatticeIsometry power(const LatticeIsometry& t, unsigned n) {
    LatticeIsometry out = LatticeIsometry::identity(t.surface());
    for (unsigned i = 0; i < n; ++i) out = compose(out, t);
    return out;
}

/// Least n <= n_max with t^n = id (as an operator on abstract classes too).
inline std::optional<unsigned> order(const LatticeIsometry& t, unsigned n_max) {
    if (n_max < 1) throw Error(ErrorCode::InvalidInput, "order needs n_max >= 1");
    const LatticeIsometry id = LatticeIsometry::identity(t.surface());
    LatticeIsometry acc = t;
    for (unsigned n = 1; n <= n_max; ++n) {
        if (acc == id) return n;
        acc = compose(acc, t);
    }
    return std::nullopt;
}

inline LatticeIsometry shift(const SurfaceParams& sp) {
    return LatticeIsometry(sp, -1, RatMatrix{{-1, 0, 0}, {0, 0, 0}, {0, 0, -1}});
}

/// (r, D, s) -> (r, D + rH, s + D.H + r d).
inline LatticeIsometry tensor_H(const SurfaceParams& sp) {
    return LatticeIsometry(sp, 1, RatMatrix{{1, 0, 0}, {1, 0, 0}, {Rat(sp.d), 1, 1}});
}

/// Reflection w -> w + <w,u> u in a spherical exact class u.
inline LatticeIsometry twist(const MukaiVector& u, const SurfaceParams& sp) {
    if (!u.is_exact()) throw Error(ErrorCode::InvalidInput, "twist needs an exact spherical class");
    if (!is_spherical(u, sp)) throw Error(ErrorCode::NotSpherical, u.str() + " is not spherical");
    // <w,u> = a_u*hdeg - s_u*r - r_u*s
    const Rat pr = -Rat(u.s), ph = Rat(u.a()), ps = -Rat(u.r);
    RatMatrix forms{{1 + Rat(u.r) * pr, Rat(u.r) * ph, Rat(u.r) * ps},
                    {Rat(u.a()) * pr, Rat(u.a()) * ph, Rat(u.a()) * ps},
                    {Rat(u.s) * pr, Rat(u.s) * ph, 1 + Rat(u.s) * ps}};
    return LatticeIsometry(sp, 1, forms);
}

/// Tensor by O(H) followed by the twist in O_S.
inline LatticeIsometry rotation(const SurfaceParams& sp) {
    return compose(tensor_H(sp), twist(MukaiVector::exact(1, 0, 1), sp));
}

/// (r, D, s) -> (-r-2s-D.H, (r+s+D.H)H - D, -2r-s-D.H), degree 4.
inline LatticeIsometry tau_q() {
    return LatticeIsometry(SurfaceParams(Int(2)), -1, RatMatrix{{-1, -1, -2}, {1, 1, 1}, {-2, -1, -1}});
}

/// (r, D, s) -> (-4r-5s-2D.H, (2r+2s+D.H)H - D, -5r-4s-2D.H), degree 10.
inline LatticeIsometry tau_1() {
    return LatticeIsometry(SurfaceParams(Int(5)), -1, RatMatrix{{-4, -2, -5}, {2, 1, 2}, {-5, -2, -4}});
}

/// (r, D, s) -> (-9r-5s-3D.H, (6r+3s+2D.H)H - D, -20r-9s-6D.H), degree 10.
inline LatticeIsometry tau_2() {
    return LatticeIsometry(SurfaceParams(Int(5)), -1, RatMatrix{{-9, -3, -5}, {6, 2, 3}, {-20, -6, -9}});
}

/// (r, D, s) -> (-5r-s-D.H, rH + D, -r), degree 10.
inline LatticeIsometry o_gm() {
    return LatticeIsometry(SurfaceParams(Int(5)), 1, RatMatrix{{-5, -1, -1}, {1, 0, 0}, {-1, 0, 0}});
}

/// Rotation followed by the twist in (a, bH, c); the involution attached to
/// the appendix functor is the negative of this.
inline LatticeIsometry tau_U(const Int& a, const Int& b, const Int& c, const SurfaceParams& sp) {
    return compose(rotation(sp), twist(MukaiVector::exact(a, b, c), sp));
}

/// Saturated fixed sublattice, basis as Hermite-reduced rows in (r, a, s).
inline IntMatrix fixed_lattice(const LatticeIsometry& t) {
    return integer_kernel(t.exact_matrix() - IntMatrix::identity(3));
}

struct PerpRestriction {
    GramLattice perp;  // basis of v^perp
    IntMatrix matrix;  // column j = coordinates of T(b_j)
};

inline PerpRestriction restrict_to_perp(const LatticeIsometry& t, const MukaiVector& v) {
    if (!(t.apply(v) == v)) throw Error(ErrorCode::NotInvariant, "isometry does not fix " + v.str());
    PerpRestriction out{perp(v, t.surface()), IntMatrix(2, 2)};
    for (std::size_t j = 0; j < 2; ++j) {
        const MukaiVector image = t.apply(out.perp.basis_vector(j));
        const auto coords = out.perp.coordinates_of(image);
        if (!coords) throw Error(ErrorCode::VectorNotInLattice, "image leaves the orthogonal complement");
        for (std::size_t i = 0; i < 2; ++i) out.matrix(i, j) = (*coords)[i];
    }
    return out;
}

/// Named constructors understood by the CLI and the config loader.
inline LatticeIsometry named_isometry(const std::string& name, const SurfaceParams& sp) {
    auto need = [&](int d) {
        if (sp.d != d) throw Error(ErrorCode::DegreeMismatch, name + " lives in degree d=" + std::to_string(d));
    };
    if (name == "identity") return LatticeIsometry::identity(sp);
    if (name == "shift") return shift(sp);
    if (name == "tensor_H") return tensor_H(sp);
    if (name == "rotation") return rotation(sp);
    if (name == "tau_q") return need(2), tau_q();
    if (name == "tau_1") return need(5), tau_1();
    if (name == "tau_2") return need(5), tau_2();
    if (name == "o_gm") return need(5), o_gm();
    throw Error(ErrorCode::InvalidInput, "unknown isometry '" + name + "'");
}

}  // namespace mukai
