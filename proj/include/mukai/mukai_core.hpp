#pragma once

// The algebraic Mukai lattice Z + Z.H + Z of a polarized K3 surface of
// degree 2d with Picard rank one. Divisor parts are either multiples of the
// polarization or abstract curve classes carried by (D.H, D^2).

#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "mukai/matrix.hpp"
#include "mukai/number.hpp"

namespace mukai {

struct SurfaceParams {
    Int d = 1;  // H^2 = 2d

    SurfaceParams() = default;
    explicit SurfaceParams(Int degree_half) : d(std::move(degree_half)) {
        if (d < 1) throw Error(ErrorCode::InvalidInput, "surface parameter d must be >= 1");
    }
    Int h_squared() const { return 2 * d; }
    friend bool operator==(const SurfaceParams&, const SurfaceParams&) = default;
};

/// Delta = a*H.
struct ExactDivisor {
    Int a = 0;
    friend bool operator==(const ExactDivisor&, const ExactDivisor&) = default;
};

/// A curve class known only through Delta.H and Delta^2.
struct AbstractDivisor {
    Int hdeg = 0;
    Int sq = 0;
    friend bool operator==(const AbstractDivisor&, const AbstractDivisor&) = default;
};

class DivisorClass {
public:
    DivisorClass() : value_(ExactDivisor{}) {}
    DivisorClass(ExactDivisor e) : value_(std::move(e)) {}
    DivisorClass(AbstractDivisor a) : value_(std::move(a)) {}

    static DivisorClass exact(Int a) { return ExactDivisor{std::move(a)}; }
    static DivisorClass abstract(Int hdeg, Int sq) { return AbstractDivisor{std::move(hdeg), std::move(sq)}; }

    bool is_exact() const { return std::holds_alternative<ExactDivisor>(value_); }
    const ExactDivisor& as_exact() const { return std::get<ExactDivisor>(value_); }
    const AbstractDivisor& as_abstract() const { return std::get<AbstractDivisor>(value_); }

    Int hdeg(const SurfaceParams& s) const { return is_exact() ? s.h_squared() * as_exact().a : as_abstract().hdeg; }
    Int sq(const SurfaceParams& s) const {
        return is_exact() ? s.h_squared() * as_exact().a * as_exact().a : as_abstract().sq;
    }

    friend bool operator==(const DivisorClass&, const DivisorClass&) = default;

private:
    std::variant<ExactDivisor, AbstractDivisor> value_;
};

/// Hodge index feasibility with the strict inequality away from the
/// proportional case.
inline bool hodge_feasible(const DivisorClass& div, const SurfaceParams& s) {
    if (div.is_exact()) return true;
    const auto& ab = div.as_abstract();
    if (mpz_odd_p(ab.sq.get_mpz_t())) return false;
    const Int lhs = s.h_squared() * ab.sq;
    const Int rhs = ab.hdeg * ab.hdeg;
    if (lhs < rhs) return true;
    return lhs == rhs && mod_pos(ab.hdeg, s.h_squared()) == 0;
}

struct MukaiVector {
    Int r = 0;
    DivisorClass div;
    Int s = 0;

    MukaiVector() = default;
    MukaiVector(Int rank, DivisorClass divisor, Int deg) : r(std::move(rank)), div(std::move(divisor)), s(std::move(deg)) {}

    static MukaiVector exact(Int r, Int a, Int s) { return {std::move(r), DivisorClass::exact(std::move(a)), std::move(s)}; }
    static MukaiVector abstract(Int r, Int hdeg, Int sq, Int s) {
        return {std::move(r), DivisorClass::abstract(std::move(hdeg), std::move(sq)), std::move(s)};
    }
    static MukaiVector from_coords(const IntVector& c) { return exact(c.at(0), c.at(1), c.at(2)); }

    bool is_exact() const { return div.is_exact(); }
    const Int& a() const { return div.as_exact().a; }
    Int hdeg(const SurfaceParams& sp) const { return div.hdeg(sp); }

    /// (r, a, s) for an exact vector.
    IntVector coords() const {
        if (!is_exact()) throw Error(ErrorCode::InvalidInput, "coordinates requested for an abstract class");
        return {r, a(), s};
    }

    /// An abstract class that happens to be proportional to H, rewritten exactly.
    MukaiVector normalized(const SurfaceParams& sp) const {
        if (is_exact()) return *this;
        const auto& ab = div.as_abstract();
        if (mod_pos(ab.hdeg, sp.h_squared()) == 0) {
            Int a = ab.hdeg / sp.h_squared();
            if (sp.h_squared() * a * a == ab.sq) return exact(r, a, s);
        }
        return *this;
    }

    std::string str() const {
        std::string mid;
        if (is_exact()) {
            const Int& x = a();
            if (x == 0) mid = "0";
            else if (x == 1) mid = "H";
            else if (x == -1) mid = "-H";
            else mid = x.get_str() + "H";
        } else {
            mid = "D[" + div.as_abstract().hdeg.get_str() + "," + div.as_abstract().sq.get_str() + "]";
        }
        return "(" + r.get_str() + "," + mid + "," + s.get_str() + ")";
    }

    friend bool operator==(const MukaiVector&, const MukaiVector&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const MukaiVector& v) { return os << v.str(); }

/// Lexicographic order on exact coordinates (abstract classes by (r, hdeg, sq, s)).
inline bool lex_less(const MukaiVector& x, const MukaiVector& y, const SurfaceParams& sp) {
    auto key = [&](const MukaiVector& v) {
        return std::vector<Int>{v.r, v.hdeg(sp), v.div.sq(sp), v.s};
    };
    return key(x) < key(y);
}

inline MukaiVector operator+(const MukaiVector& v, const MukaiVector& w) {
    if (!v.is_exact() || !w.is_exact())
        throw Error(ErrorCode::InvalidInput, "sum of abstract classes needs the surface degree; use add()");
    return MukaiVector::exact(v.r + w.r, v.a() + w.a(), v.s + w.s);
}
inline MukaiVector operator-(const MukaiVector& v) {
    if (v.is_exact()) return MukaiVector::exact(-v.r, -v.a(), -v.s);
    return MukaiVector::abstract(-v.r, -v.div.as_abstract().hdeg, v.div.as_abstract().sq, -v.s);
}
inline MukaiVector operator*(const Int& k, const MukaiVector& v) {
    if (!v.is_exact()) throw Error(ErrorCode::InvalidInput, "scalar multiple of an abstract class");
    return MukaiVector::exact(k * v.r, k * v.a(), k * v.s);
}

/// Cross term Delta1.Delta2; defined unless both parts are distinct abstract classes.
inline Int divisor_product(const DivisorClass& x, const DivisorClass& y, const SurfaceParams& sp) {
    if (x.is_exact() && y.is_exact()) return sp.h_squared() * x.as_exact().a * y.as_exact().a;
    if (x.is_exact()) return x.as_exact().a * y.as_abstract().hdeg;
    if (y.is_exact()) return y.as_exact().a * x.as_abstract().hdeg;
    if (x == y) return x.as_abstract().sq;
    throw Error(ErrorCode::UndefinedCrossTerm, "pairing of two distinct abstract divisor classes");
}

/// Mukai pairing <v,w> = Delta1.Delta2 - r1 s2 - r2 s1.
inline Int pair(const MukaiVector& v, const MukaiVector& w, const SurfaceParams& sp) {
    return divisor_product(v.div, w.div, sp) - v.r * w.s - w.r * v.s;
}

inline Int square(const MukaiVector& v, const SurfaceParams& sp) { return v.div.sq(sp) - 2 * v.r * v.s; }
inline bool is_spherical(const MukaiVector& v, const SurfaceParams& sp) { return square(v, sp) == -2; }
inline bool is_isotropic(const MukaiVector& v, const SurfaceParams& sp) { return square(v, sp) == 0; }
inline bool hodge_feasible(const MukaiVector& v, const SurfaceParams& sp) { return hodge_feasible(v.div, sp); }

/// v + w where at least one side is exact (Delta of the sum stays describable).
inline MukaiVector add(const MukaiVector& v, const MukaiVector& w, const SurfaceParams& sp) {
    if (v.is_exact() && w.is_exact()) return v + w;
    if (!v.is_exact() && !w.is_exact()) {
        throw Error(ErrorCode::UndefinedCrossTerm, "sum of two abstract classes");
    }
    const MukaiVector& ex = v.is_exact() ? v : w;
    const MukaiVector& ab = v.is_exact() ? w : v;
    const Int hdeg = ex.hdeg(sp) + ab.hdeg(sp);
    const Int sq = ex.div.sq(sp) + 2 * ex.a() * ab.hdeg(sp) + ab.div.sq(sp);
    return MukaiVector::abstract(v.r + w.r, hdeg, sq, v.s + w.s).normalized(sp);
}

inline MukaiVector subtract(const MukaiVector& v, const MukaiVector& w, const SurfaceParams& sp) {
    return add(v, -w, sp);
}

/// Gram matrix of the Mukai pairing in exact coordinates (r, a, s).
inline IntMatrix mukai_gram(const SurfaceParams& sp) {
    return IntMatrix{{0, 0, -1}, {0, sp.h_squared(), 0}, {-1, 0, 0}};
}

/// A lattice given by its Gram matrix, optionally embedded in the exact
/// Mukai lattice by basis vectors (rows of `embedding`, in (r, a, s)).
struct GramLattice {
    IntMatrix gram;
    std::optional<IntMatrix> embedding;
    std::vector<std::string> labels;

    std::size_t rank() const { return gram.rows(); }

    static GramLattice from_gram(IntMatrix g) {
        if (!g.is_square()) throw Error(ErrorCode::InvalidInput, "Gram matrix must be square");
        if (!(g == g.transpose())) throw Error(ErrorCode::InvalidInput, "Gram matrix must be symmetric");
        GramLattice out;
        out.gram = std::move(g);
        return out;
    }

    /// Sublattice of the Mukai lattice spanned by the rows of `basis`.
    static GramLattice from_basis(const IntMatrix& basis, const SurfaceParams& sp) {
        GramLattice out;
        out.gram = basis * mukai_gram(sp) * basis.transpose();
        out.embedding = basis;
        return out;
    }

    MukaiVector basis_vector(std::size_t i) const {
        if (!embedding) throw Error(ErrorCode::InvalidInput, "lattice has no embedding");
        return MukaiVector::from_coords(embedding->row(i));
    }

    Int form(const IntVector& x, const IntVector& y) const {
        Int acc = 0;
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j) acc += x.at(i) * gram(i, j) * y.at(j);
        return acc;
    }

    /// Ambient vector for lattice coordinates x.
    MukaiVector to_ambient(const IntVector& x) const {
        if (!embedding) throw Error(ErrorCode::InvalidInput, "lattice has no embedding");
        IntVector c(embedding->cols(), Int(0));
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) c[j] += x.at(i) * (*embedding)(i, j);
        return MukaiVector::from_coords(c);
    }

    /// Lattice coordinates of an ambient exact vector, if it lies in the lattice.
    std::optional<IntVector> coordinates_of(const MukaiVector& v) const {
        if (!embedding) throw Error(ErrorCode::InvalidInput, "lattice has no embedding");
        if (!v.is_exact()) return std::nullopt;
        return row_coordinates(*embedding, v.coords());
    }

    bool contains(const MukaiVector& v) const { return coordinates_of(v).has_value(); }
};

/// Orthogonal complement of a primitive exact vector.
inline GramLattice perp(const MukaiVector& v, const SurfaceParams& sp) {
    if (!v.is_exact()) throw Error(ErrorCode::InvalidInput, "perp needs an exact vector");
    const IntVector c = v.coords();
    if (!is_primitive(c)) throw Error(ErrorCode::NonPrimitive, "perp of non-primitive vector " + v.str());
    IntMatrix row(1, 3);
    const IntVector g = mukai_gram(sp) * c;
    for (std::size_t j = 0; j < 3; ++j) row(0, j) = g[j];
    return GramLattice::from_basis(integer_kernel(row), sp);
}

}  // namespace mukai
