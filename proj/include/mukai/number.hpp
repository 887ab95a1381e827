#pragma once

// Exact integer / rational scalars and the quadratic surd type used for
// converted wall parameters. Everything is GMP-backed; there is no floating
// point in the library.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mukai/error.hpp"

namespace mukai {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den = 1) {
    if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int to_int(const Rat& q) {
    if (!is_integer(q)) throw Error(ErrorCode::InvalidInput, "expected an integer, got " + q.get_str());
    return q.get_num();
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int floor_rat(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }
inline Int ceil_rat(const Rat& q) { return ceil_div(q.get_num(), q.get_den()); }

/// Non-negative remainder of a modulo |m|.
inline Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int isqrt(const Int& n) {
    if (n < 0) throw Error(ErrorCode::InvalidInput, "isqrt of a negative number");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// Exact rational square root when one exists.
inline std::optional<Rat> rat_sqrt(const Rat& q) {
    if (q < 0) return std::nullopt;
    if (!is_square(q.get_num()) || !is_square(q.get_den())) return std::nullopt;
    return make_rat(isqrt(q.get_num()), isqrt(q.get_den()));
}

/// Extended gcd: returns g = gcd(a,b) >= 0 and x, y with a*x + b*y = g.
struct Bezout {
    Int g, x, y;
};

inline Bezout ext_gcd(const Int& a, const Int& b) {
    Bezout out;
    mpz_gcdext(out.g.get_mpz_t(), out.x.get_mpz_t(), out.y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

/// All positive divisors of |n| (n != 0), ascending. Trial division; the
/// callers only factor small constants coming out of divisibility reductions.
inline std::vector<Int> positive_divisors(const Int& n) {
    Int m = abs(n);
    if (m == 0) throw Error(ErrorCode::InvalidInput, "divisors of zero");
    std::vector<Int> small, large;
    for (Int i = 1; i * i <= m; ++i) {
        if (mpz_divisible_p(m.get_mpz_t(), i.get_mpz_t())) {
            small.push_back(i);
            Int other = m / i;
            if (other != i) large.push_back(other);
        }
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

inline std::string to_string(const Int& n) { return n.get_str(); }
inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Rat parse_rat(const std::string& text) {
    Rat q;
    if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0)
        throw Error(ErrorCode::InvalidInput, "not a rational number: '" + text + "'");
    q.canonicalize();
    return q;
}

inline Int parse_int(const std::string& text) {
    Int n;
    if (text.empty() || n.set_str(text, 10) != 0)
        throw Error(ErrorCode::InvalidInput, "not an integer: '" + text + "'");
    return n;
}

/// p + q*sqrt(n) with n a squarefree positive integer; n == 1 means q is
/// folded into p and the value is rational.
class QuadSurd {
public:
    QuadSurd() = default;
    explicit QuadSurd(Rat p) : p_(std::move(p)) {}

    /// sqrt of a non-negative rational, simplified.
    static QuadSurd sqrt_of(const Rat& value) {
        if (value < 0) throw Error(ErrorCode::InvalidInput, "square root of a negative rational");
        if (value == 0) return QuadSurd();
        // sqrt(u/v) = sqrt(u*v)/v, then pull squares out of u*v.
        Int radicand = value.get_num() * value.get_den();
        Int outside = 1;
        Int rest = radicand;
        for (Int f = 2; f * f <= rest; ++f) {
            Int f2 = f * f;
            while (mpz_divisible_p(rest.get_mpz_t(), f2.get_mpz_t())) {
                rest /= f2;
                outside *= f;
            }
        }
        QuadSurd out;
        Rat coeff = make_rat(outside, value.get_den());
        if (rest == 1) {
            out.p_ = coeff;
        } else {
            out.q_ = coeff;
            out.n_ = rest;
        }
        return out;
    }

    const Rat& p() const { return p_; }
    const Rat& q() const { return q_; }
    const Int& n() const { return n_; }
    bool is_rational() const { return q_ == 0; }

    friend bool operator==(const QuadSurd& a, const QuadSurd& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && (a.q_ == 0 || a.n_ == b.n_);
    }

    std::string str() const {
        if (q_ == 0) return p_.get_str();
        std::string s;
        if (p_ != 0) s = p_.get_str() + (q_ > 0 ? "+" : "");
        if (q_ == -1) s += "-";
        else if (q_ != 1) s += q_.get_str() + "*";
        return s + "sqrt(" + n_.get_str() + ")";
    }

private:
    Rat p_ = 0;
    Rat q_ = 0;
    Int n_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const QuadSurd& s) { return os << s.str(); }

}  // namespace mukai
