#pragma once

// Numerical walls for a target class along a one-parameter family, the rank
// two lattice attached to a wall, its divisorial/flopping classification and
// the search for classes cut out by affine conditions plus a square.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mukai/charge.hpp"
#include "mukai/parallel.hpp"
#include "mukai/quadratic.hpp"

namespace mukai {

enum class WallKind { Divisorial, Flopping, FakeOrUnknown };

inline std::string to_string(WallKind k) {
    switch (k) {
        case WallKind::Divisorial: return "divisorial";
        case WallKind::Flopping: return "flopping";
        case WallKind::FakeOrUnknown: return "fake-or-unknown";
    }
    return "?";
}

struct WallClass {
    WallKind kind = WallKind::FakeOrUnknown;
    std::string reason;
    std::optional<MukaiVector> witness;
};

enum class Effectivity {
    PhaseAligned,  // Z(w) a positive multiple of Z(v) on the wall, i.e. im(w) > 0
    RankPositive,  // r > 0, or r = 0 and D.H > 0
};

inline std::string to_string(Effectivity e) {
    return e == Effectivity::PhaseAligned ? "phase-aligned" : "rank-positive";
}

struct TotallySemistable {
    bool verdict = false;
    std::optional<MukaiVector> witness;
    bool certified = false;
    Int pairing_bound = 0;  // |<w,v>| searched
    Effectivity policy = Effectivity::PhaseAligned;
};

struct WallReport {
    Rat t;
    QuadSurd t_linear;
    MukaiVector destabilizer;
    MukaiVector quotient;
    std::optional<GramLattice> hw;
    WallClass classification;
    std::optional<TotallySemistable> totally_semistable;
    bool certified = false;
    std::optional<Int> search_bound;
    bool requires_geometric_input = false;
};

enum class WallMode { Exact, Abstract };

namespace detail {

inline Int lcm_of_denominators(const std::vector<Rat>& xs) {
    Int l = 1;
    for (const auto& x : xs) {
        const Int den = x.get_den();
        l = l / gcd(l, den) * den;
    }
    return l;
}

/// Points of hw (in lattice coordinates) with <w, v> = k and w^2 = target.
inline std::optional<std::vector<IntVector>> solve_on_line(const GramLattice& hw, const IntVector& v_coords, const Int& k,
                                                           const Int& target) {
    const IntVector gv = hw.gram * v_coords;
    const Int c1 = gv[0], c2 = gv[1];
    if (c1 == 0 && c2 == 0) {
        if (k != 0) return std::vector<IntVector>{};
        return std::nullopt;
    }
    const Bezout bz = ext_gcd(c1, c2);
    if (mod_pos(k, bz.g) != 0) return std::vector<IntVector>{};
    const Int x0 = bz.x * (k / bz.g), y0 = bz.y * (k / bz.g);
    const Int dx = c2 / bz.g, dy = -c1 / bz.g;
    // q(x0 + dx j, y0 + dy j) - target
    const IntVector p0{x0, y0}, dir{dx, dy};
    Quadratic f{Rat(hw.form(dir, dir)), Rat(2 * hw.form(p0, dir)), Rat(hw.form(p0, p0) - target)};
    auto roots = integer_roots(f);
    if (!roots) return std::nullopt;
    std::vector<IntVector> out;
    for (const Int& j : *roots) out.push_back({x0 + dx * j, y0 + dy * j});
    return out;
}

/// Ambient witness with the requested square and pairing, if one exists.
inline std::optional<MukaiVector> find_class(const GramLattice& hw, const IntVector& v_coords, const Int& k,
                                             const Int& target) {
    auto pts = solve_on_line(hw, v_coords, k, target);
    if (!pts) {
        // the whole line qualifies; any point is a witness
        const IntVector gv = hw.gram * v_coords;
        const Bezout bz = ext_gcd(gv[0], gv[1]);
        if (bz.g == 0) return hw.to_ambient({0, 0});
        return hw.to_ambient({bz.x * (k / bz.g), bz.y * (k / bz.g)});
    }
    if (pts->empty()) return std::nullopt;
    std::vector<MukaiVector> ws;
    for (const auto& p : *pts) ws.push_back(hw.to_ambient(p));
    return ws.front();
}

}  // namespace detail

/// {w : Im(Z_t0(w) / Z_t0(v)) = 0}, saturated.
inline GramLattice hyperbolic_lattice(const CharteredFamily& f, const MukaiVector& v, const SurfaceParams& sp,
                                      const Rat& t0) {
    if (!f.in_domain(t0)) throw Error(ErrorCode::InvalidInput, "t0 outside the family domain");
    const FamilyValue fv = family_eval(f, v, sp);
    const Rat re_v = fv.re_at(t0), im_v = fv.im;
    const Rat d(sp.d);
    const Rat k_t = d * (f.x0 * f.x0 * (f.k * t0 + f.c) - f.y * f.y);
    // Re_w(t0) = 2d y a - s + r k_t ; im_w = 2d a - 2d y r
    std::vector<Rat> row{k_t * im_v + re_v * 2 * d * f.y, 2 * d * f.y * im_v - re_v * 2 * d, -im_v};
    const Int scale = detail::lcm_of_denominators(row);
    IntMatrix m(1, 3);
    for (std::size_t j = 0; j < 3; ++j) m(0, j) = Rat(row[j] * Rat(scale)).get_num();
    const IntMatrix basis = integer_kernel(m);
    if (basis.rows() != 2) throw Error(ErrorCode::RankMismatch, "wall lattice does not have rank 2");
    GramLattice hw = GramLattice::from_basis(basis, sp);
    if (square(v, sp) > 0 && determinant(hw.gram) >= 0)
        throw Error(ErrorCode::RankMismatch, "wall lattice is not hyperbolic");
    return hw;
}

/// Divisorial/flopping test on the wall lattice. Primitive v with
/// 2 <= v^2 <= 4 use the standard criterion; v = 2 v0 with v0^2 = 2 uses
/// the pairings 2 (isotropic), 0 or 2 (spherical) for divisorial and a
/// spherical class with 0 < <w,v> <= v^2/2 for flopping.
inline WallClass classify_wall(const GramLattice& hw, const MukaiVector& v, const SurfaceParams& sp) {
    if (!v.is_exact()) throw Error(ErrorCode::InvalidInput, "classification needs an exact class");
    auto coords = hw.coordinates_of(v);
    if (!coords) throw Error(ErrorCode::VectorNotInLattice, v.str() + " is not in the wall lattice");
    const Int vv = square(v, sp);
    const Int c = content(v.coords());
    WallClass out;
    auto certificate = [&](const Int& target, const Int& k) { return detail::find_class(hw, *coords, k, target); };
    std::vector<std::pair<Int, Int>> divisorial;  // (square, pairing)
    if (c == 1 && vv >= 2 && vv <= 4) {
        divisorial = {{-2, 0}, {0, 1}, {0, 2}};
    } else if (c == 2 && vv == 8) {
        divisorial = {{0, 2}, {-2, 0}, {-2, 2}};
    } else {
        out.reason = "criterion implemented for primitive v with 2 <= v^2 <= 4 and for twice a (+2)-class; v^2 = " +
                     vv.get_str() + ", divisibility " + c.get_str();
        return out;
    }
    for (const auto& [sq, k] : divisorial) {
        if (auto w = certificate(sq, k)) {
            out.kind = WallKind::Divisorial;
            out.witness = w;
            out.reason = (sq == 0 ? "isotropic" : "spherical") + std::string(" class with <w,v> = ") + k.get_str();
            return out;
        }
    }
    for (Int k = 1; 2 * k <= vv; ++k) {
        if (auto w = certificate(-2, k)) {
            out.kind = WallKind::Flopping;
            out.witness = w;
            out.reason = "spherical class with <w,v> = " + k.get_str();
            return out;
        }
    }
    out.reason = "no spherical or isotropic certificate in the wall lattice";
    return out;
}

/// Spherical classes w in hw with <w,v> < 0 passing the effectivity policy.
/// For PhaseAligned the im-condition bounds |<w,v>| whenever
/// im_v^2 |e^2| > v^2 im_e^2 for e spanning v^perp in hw; otherwise the
/// search stops at `fallback_bound` and the verdict is not certified.
inline TotallySemistable totally_semistable(const GramLattice& hw, const MukaiVector& v, const SurfaceParams& sp,
                                            Effectivity policy, const Rat& beta_y = 0, const Int& fallback_bound = 64) {
    if (!v.is_exact()) throw Error(ErrorCode::InvalidInput, "totally_semistable needs an exact class");
    auto coords = hw.coordinates_of(v);
    if (!coords) throw Error(ErrorCode::VectorNotInLattice, v.str() + " is not in the wall lattice");
    auto im = [&](const MukaiVector& w) -> Rat { return Rat(w.hdeg(sp)) - 2 * Rat(sp.d) * Rat(w.r) * beta_y; };
    auto effective = [&](const MukaiVector& w) {
        if (policy == Effectivity::PhaseAligned) return im(w) > 0;
        return w.r > 0 || (w.r == 0 && w.hdeg(sp) > 0);
    };
    TotallySemistable out;
    out.policy = policy;
    out.pairing_bound = fallback_bound;
    const Int vv = square(v, sp);
    if (policy == Effectivity::PhaseAligned && vv > 0) {
        const IntVector gv = hw.gram * *coords;
        const Int g = gcd(gv[0], gv[1]);
        const MukaiVector e = hw.to_ambient({gv[1] / g, -gv[0] / g});
        const Rat e2(square(e, sp)), ime = im(e), imv = im(v);
        const Rat kk = imv * imv * abs(e2) - Rat(vv) * ime * ime;
        if (e2 < 0 && kk > 0) {
            // alpha^2 < 2 im_e^2 / kk with alpha = <w,v>/v^2
            const Rat bound2 = 2 * ime * ime * Rat(vv) * Rat(vv) / kk;
            out.pairing_bound = isqrt(ceil_rat(bound2)) + 1;
            out.certified = true;
        }
    }
    for (Int k = -1; k >= -out.pairing_bound; --k) {
        auto pts = detail::solve_on_line(hw, *coords, k, -2);
        if (!pts) {
            out.certified = false;
            continue;
        }
        for (const auto& p : *pts) {
            const MukaiVector w = hw.to_ambient(p);
            if (effective(w)) {
                out.verdict = true;
                out.witness = w;
                return out;
            }
        }
    }
    return out;
}

namespace detail {

struct LineContext {
    const CharteredFamily* fam;
    const SurfaceParams* sp;
    MukaiVector v;
    FamilyValue fv;
    Rat t_lo, t_hi;
    Int fallback_bound;
    WallMode mode;
};

struct Candidate {
    Rat t;
    MukaiVector w;
    bool certified;
    std::optional<Int> bound;
};

/// s = P + Q t on the line, both affine in j.
struct SlopeSolution {
    Rat p0, p1, q0, q1;
};

/// Walks the candidate j's on one integer line. `make` builds (r, hdeg) from
/// j, `sq_max` bounds square(w) for given (j, s); `emit` receives admissible
/// (j, s, t) triples.
template <typename Line>
void scan_line(const LineContext& ctx, const Line& line, std::vector<Candidate>& out) {
    const SlopeSolution& sol = line.slope;
    // f(j, t) = sq_bound(w(j, t)) + 2 is affine in t for fixed j and
    // quadratic in j for fixed t.
    auto f_at = [&](const Rat& t) -> Quadratic {
        // s(j) = (p0 + q0 t) + (p1 + q1 t) j
        const Rat s0 = sol.p0 + sol.q0 * t, s1 = sol.p1 + sol.q1 * t;
        return line.square_bound(s0, s1);
    };
    const Quadratic lo_f = f_at(ctx.t_lo), hi_f = f_at(ctx.t_hi);
    std::vector<std::pair<Int, Int>> ranges;
    bool certified = lo_f.a < 0 && hi_f.a < 0;
    std::optional<Int> bound;
    if (certified) {
        for (const Quadratic& f : {lo_f, hi_f}) {
            Quadratic shifted = f;
            shifted.c += 2;
            if (auto r = concave_interval(shifted)) ranges.push_back(*r);
        }
    } else {
        bound = ctx.fallback_bound;
        ranges.push_back(line.fallback_range(ctx.fallback_bound));
    }
    std::set<Int> seen;
    for (const auto& [lo, hi] : ranges) {
        for (Int j = lo; j <= hi; ++j) {
            if (!seen.insert(j).second) continue;
            const Rat p = sol.p0 + sol.p1 * Rat(j);
            const Rat q = sol.q0 + sol.q1 * Rat(j);
            if (q == 0) continue;  // same phase for every t: not a wall
            Rat s_lo = p + q * ctx.t_lo, s_hi = p + q * ctx.t_hi;
            if (s_lo > s_hi) std::swap(s_lo, s_hi);
            Int s_first = ceil_rat(s_lo), s_last = floor_rat(s_hi);
            line.clip(j, s_first, s_last);
            for (Int s = s_first; s <= s_last; ++s) {
                const Rat t = (Rat(s) - p) / q;
                line.emit(j, s, t, certified, bound, out);
            }
        }
    }
}

}  // namespace detail

/// Numerical walls for v along the family over [t_lo, t_hi].
inline std::vector<WallReport> find_walls(const CharteredFamily& fam, const MukaiVector& v, const SurfaceParams& sp,
                                          WallMode mode, const Rat& t_lo, const Rat& t_hi,
                                          std::optional<Int> bound_override = std::nullopt) {
    if (t_lo > t_hi) throw Error(ErrorCode::EmptyRange, "empty parameter range");
    if (!fam.in_domain(t_lo) || !fam.in_domain(t_hi)) throw Error(ErrorCode::InvalidInput, "range outside the family domain");
    if (v.is_exact() && v.coords() == IntVector{0, 0, 0}) throw Error(ErrorCode::InvalidInput, "target must be nonzero");
    if (mode == WallMode::Abstract && !v.is_exact())
        throw Error(ErrorCode::UndefinedCrossTerm, "abstract-mode search needs an exact target");
    detail::LineContext ctx{&fam, &sp, v, family_eval(fam, v, sp), t_lo, t_hi, bound_override.value_or(Int(64)), mode};
    const Rat im_v = ctx.fv.im;
    if (im_v <= 0) throw Error(ErrorCode::NonPositiveIm, "im(v) must be positive, got " + im_v.get_str());

    const Rat d(sp.d);
    const Int p = fam.y.get_num(), q = fam.y.get_den();
    const Rat k0 = d * (fam.x0 * fam.x0 * fam.c - fam.y * fam.y);
    const Rat k1 = d * fam.x0 * fam.x0 * fam.k;

    // Lines: exact mode uses L = q a - p r with im = 2d L / q; abstract mode
    // uses M = q h - 2d p r with im = M / q.
    const Rat unit = mode == WallMode::Exact ? Rat(2 * d / Rat(q)) : Rat(Rat(1) / Rat(q));
    const Rat top = im_v / unit;  // 0 < value < top
    std::vector<Int> values;
    for (Int m = 1; Rat(m) < top; ++m) values.push_back(m);

    auto check_pair = [&](const MukaiVector& w) {
        const MukaiVector rest = subtract(v, w, sp);
        return square(w, sp) >= -2 && square(rest, sp) >= -2 && hodge_feasible(rest, sp);
    };

    auto run_line = [&](std::size_t idx) {
        std::vector<detail::Candidate> found;
        const Int m = values[idx];
        const Rat im_w = unit * Rat(m);
        const Rat rho = im_w / im_v;
        if (mode == WallMode::Exact) {
            // q a - p r = m: (r, a) = (r0 + q j, a0 + p j)
            const Bezout bz = ext_gcd(q, p);
            const Int a0 = bz.x * m, r0 = -bz.y * m;
            struct Line {
                detail::SlopeSolution slope;
                Int a0, r0, p, q;
                Rat two_d;
                const SurfaceParams* sp;
                MukaiVector v;
                std::function<bool(const MukaiVector&)> check;
                Quadratic square_bound(const Rat& s0, const Rat& s1) const {
                    // 2d (a0 + p j)^2 - 2 (r0 + q j)(s0 + s1 j)
                    Quadratic f;
                    f.a = two_d * Rat(p * p) - 2 * Rat(q) * s1;
                    f.b = 2 * two_d * Rat(a0 * p) - 2 * (Rat(r0) * s1 + Rat(q) * s0);
                    f.c = two_d * Rat(a0 * a0) - 2 * Rat(r0) * s0;
                    return f;
                }
                std::pair<Int, Int> fallback_range(const Int& b) const {
                    // |a| <= b, or |r| <= b when a is constant on the line
                    if (p != 0) {
                        const Int pa = abs(p);
                        Int lo = ceil_div(-b - a0, pa), hi = floor_div(b - a0, pa);
                        if (p < 0) {
                            lo = ceil_div(a0 - b, pa);
                            hi = floor_div(a0 + b, pa);
                        }
                        return {lo, hi};
                    }
                    return {ceil_div(-b - r0, q), floor_div(b - r0, q)};
                }
                // square(w) >= -2 and square(v - w) >= -2 are linear in s once (r, a) is fixed
                void clip(const Int& j, Int& lo, Int& hi) const {
                    if (!v.is_exact()) return;
                    const Int r = r0 + q * j, a = a0 + p * j;
                    const Int c1 = sp->d * a * a + 1;  // r s <= c1
                    if (r > 0) hi = std::min(hi, floor_div(c1, r));
                    if (r < 0) lo = std::max(lo, ceil_div(c1, r));
                    const Int rho = v.r - r, da = v.a() - a;
                    const Int c2 = sp->d * da * da + 1;  // rho (S - s) <= c2
                    if (rho > 0) lo = std::max(lo, Int(v.s - floor_div(c2, rho)));
                    if (rho < 0) hi = std::min(hi, Int(v.s - ceil_div(c2, rho)));
                }
                void emit(const Int& j, const Int& s, const Rat& t, bool cert, const std::optional<Int>& bound,
                          std::vector<detail::Candidate>& out) const {
                    const MukaiVector w = MukaiVector::exact(r0 + q * j, a0 + p * j, s);
                    if (check(w)) out.push_back({t, w, cert, bound});
                }
            };
            Line line;
            line.a0 = a0;
            line.r0 = r0;
            line.p = p;
            line.q = q;
            line.two_d = 2 * d;
            line.sp = &sp;
            line.v = v;
            line.check = check_pair;
            // s = y h + r k0 - rho re0_v + t (r k1 - rho re1_v), h = 2d a
            const Rat y = fam.y;
            line.slope.p0 = y * 2 * d * Rat(a0) + Rat(r0) * k0 - rho * ctx.fv.re0;
            line.slope.p1 = y * 2 * d * Rat(p) + Rat(q) * k0;
            line.slope.q0 = Rat(r0) * k1 - rho * ctx.fv.re1;
            line.slope.q1 = Rat(q) * k1;
            detail::scan_line(ctx, line, found);
        } else {
            // q h - 2d p r = m
            const Int two_dp = 2 * sp.d * p;
            const Int g = gcd(q, two_dp);
            if (mod_pos(m, g) != 0) return found;
            const Bezout bz = ext_gcd(q, -two_dp);
            const Int h0 = bz.x * (m / g), r0 = bz.y * (m / g);
            const Int dh = two_dp / g, dr = q / g;
            struct Line {
                detail::SlopeSolution slope;
                Int h0, r0, dh, dr;
                const SurfaceParams* sp;
                const MukaiVector* v;
                std::function<bool(const MukaiVector&)> check;
                Quadratic square_bound(const Rat& s0, const Rat& s1) const {
                    // h^2 / 2d - 2 r s with the Hodge bound for D^2
                    const Rat two_d(sp->h_squared());
                    Quadratic f;
                    f.a = Rat(dh * dh) / two_d - 2 * Rat(dr) * s1;
                    f.b = 2 * Rat(h0 * dh) / two_d - 2 * (Rat(r0) * s1 + Rat(dr) * s0);
                    f.c = Rat(h0 * h0) / two_d - 2 * Rat(r0) * s0;
                    return f;
                }
                void clip(const Int&, Int&, Int&) const {}
                std::pair<Int, Int> fallback_range(const Int& b) const {
                    if (dr != 0) return {ceil_div(-b - r0, dr), floor_div(b - r0, dr)};
                    return {-b, b};
                }
                void emit(const Int& j, const Int& s, const Rat& t, bool cert, const std::optional<Int>& bound,
                          std::vector<detail::Candidate>& out) const {
                    const Int r = r0 + dr * j, h = h0 + dh * j;
                    const Int two_d = sp->h_squared();
                    // even sq below the Hodge bound; square(w) >= -2 gives sq >= 2rs - 2
                    Int sq_hi = floor_div(h * h, two_d);
                    if (mod_pos(sq_hi, 2) != 0) sq_hi -= 1;
                    Int sq_lo = 2 * r * s - 2;
                    if (mod_pos(sq_lo, 2) != 0) sq_lo += 1;
                    for (Int sq = sq_lo; sq <= sq_hi; sq += 2) {
                        if (!hodge_feasible(DivisorClass::abstract(h, sq), *sp)) continue;
                        const MukaiVector w = MukaiVector::abstract(r, h, sq, s).normalized(*sp);
                        if (check(w)) out.push_back({t, w, cert, bound});
                    }
                }
            };
            Line line;
            line.h0 = h0;
            line.r0 = r0;
            line.dh = dh;
            line.dr = dr;
            line.sp = &sp;
            line.v = &v;
            line.check = check_pair;
            const Rat y = fam.y;
            line.slope.p0 = y * Rat(h0) + Rat(r0) * k0 - rho * ctx.fv.re0;
            line.slope.p1 = y * Rat(dh) + Rat(dr) * k0;
            line.slope.q0 = Rat(r0) * k1 - rho * ctx.fv.re1;
            line.slope.q1 = Rat(dr) * k1;
            detail::scan_line(ctx, line, found);
        }
        return found;
    };

    const auto per_line = parallel_map<std::vector<detail::Candidate>>(values.size(), run_line);

    // normalise: destabilizer has the smaller im, ties go to the lexicographically larger class
    std::map<std::pair<std::string, std::string>, WallReport> unique;
    std::vector<std::pair<std::pair<Rat, std::vector<Int>>, std::pair<std::string, std::string>>> order_keys;
    for (const auto& cands : per_line) {
        for (const auto& cand : cands) {
            MukaiVector a = cand.w, b = subtract(v, cand.w, sp);
            const Rat im_a = family_eval(fam, a, sp).im, im_b = family_eval(fam, b, sp).im;
            if (im_b < im_a || (im_b == im_a && lex_less(a, b, sp))) std::swap(a, b);
            const auto key = std::pair{cand.t.get_str(), a.str()};
            auto [it, inserted] = unique.try_emplace(key);
            WallReport& rep = it->second;
            if (!inserted) {
                rep.certified = rep.certified && cand.certified;
                continue;
            }
            rep.t = cand.t;
            rep.t_linear = t_linear(fam, cand.t);
            rep.destabilizer = a;
            rep.quotient = b;
            rep.certified = cand.certified;
            rep.search_bound = cand.bound;
            order_keys.push_back({{cand.t, {a.r, a.hdeg(sp), a.div.sq(sp), a.s}}, key});
        }
    }
    std::sort(order_keys.begin(), order_keys.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<WallReport> out;
    for (const auto& [_, key] : order_keys) {
        WallReport rep = unique.at(key);
        if (rep.destabilizer.is_exact() && rep.quotient.is_exact() && v.is_exact()) {
            rep.hw = hyperbolic_lattice(fam, v, sp, rep.t);
            rep.classification = classify_wall(*rep.hw, v, sp);
            rep.totally_semistable = totally_semistable(*rep.hw, v, sp, Effectivity::PhaseAligned, fam.y);
        } else {
            rep.requires_geometric_input = true;
            rep.classification.reason = "non-proportional divisor class; requires geometric input";
        }
        out.push_back(std::move(rep));
    }
    return out;
}

/// Affine condition coeffs . (r, a, s) (relation) rhs.
struct AffineConstraint {
    enum class Rel { Eq, Ge, Le };
    IntVector coeffs;
    Rel rel = Rel::Eq;
    Int rhs = 0;

    bool holds(const IntVector& x) const {
        Int lhs = 0;
        for (std::size_t i = 0; i < 3; ++i) lhs += coeffs.at(i) * x.at(i);
        switch (rel) {
            case Rel::Eq: return lhs == rhs;
            case Rel::Ge: return lhs >= rhs;
            case Rel::Le: return lhs <= rhs;
        }
        return false;
    }
};

struct ConstrainedResult {
    std::vector<MukaiVector> vectors;
    bool complete = false;
};

namespace detail {

/// Integer solutions of E x = b as x0 + span(kernel rows), or nullopt.
struct AffineSolution {
    IntVector x0;
    IntMatrix kernel;  // rows
};

inline std::optional<AffineSolution> solve_affine(const IntMatrix& e, const IntVector& b) {
    const std::size_t n = e.cols();
    if (e.rows() == 0) return AffineSolution{IntVector(n, Int(0)), IntMatrix::identity(n)};
    const HermiteResult hr = hermite_normal_form(e.transpose());
    // E U^T = H^T; x = U^T z
    IntVector z(n, Int(0));
    for (std::size_t i = 0; i < hr.rank; ++i) {
        std::size_t piv = 0;
        while (hr.h(i, piv) == 0) ++piv;
        Int acc = b.at(piv);
        for (std::size_t l = 0; l < i; ++l) acc -= hr.h(l, piv) * z[l];
        if (mod_pos(acc, hr.h(i, piv)) != 0) return std::nullopt;
        z[i] = acc / hr.h(i, piv);
    }
    IntVector x0(n, Int(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) x0[j] += hr.u(i, j) * z[i];
    if (!(e * x0 == b)) return std::nullopt;
    IntMatrix kernel(n - hr.rank, n);
    for (std::size_t i = hr.rank; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) kernel(i - hr.rank, j) = hr.u(i, j);
    return AffineSolution{x0, kernel};
}

/// Integer points of A z1^2 + B z1 z2 + C z2^2 + D z1 + E z2 + F = 0 when
/// finitely many can be certified; nullopt otherwise.
inline std::optional<std::vector<std::pair<Int, Int>>> binary_quadratic_points(const Int& A, const Int& B, const Int& C,
                                                                               const Int& D, const Int& E, const Int& F) {
    std::vector<std::pair<Int, Int>> out;
    const Int disc = B * B - 4 * A * C;
    if (disc < 0) {
        // (2A z1 + B z2 + D)^2 = disc z2^2 + (2BD - 4AE) z2 + D^2 - 4AF
        Quadratic rhs{Rat(disc), Rat(2 * B * D - 4 * A * E), Rat(D * D - 4 * A * F)};
        auto range = concave_interval(rhs);
        if (!range) return out;
        for (Int z2 = range->first; z2 <= range->second; ++z2) {
            auto roots = integer_roots({Rat(A), Rat(B * z2 + D), Rat(C * z2 * z2 + E * z2 + F)});
            if (!roots) return std::nullopt;
            for (const Int& z1 : *roots) out.emplace_back(z1, z2);
        }
        return out;
    }
    if (C == 0 && B != 0) {
        // u = B z1 + E divides N; B^2 z2 u = -(A u^2 + (DB - 2AE) u + N)
        const Int N = A * E * E - D * B * E + F * B * B;
        if (N == 0) return std::nullopt;
        for (const Int& dpos : positive_divisors(N)) {
            for (const Int& u : {dpos, Int(-dpos)}) {
                if (mod_pos(u - E, B) != 0) continue;
                const Int z1 = (u - E) / B;
                const Int num = -(A * u * u + (D * B - 2 * A * E) * u + N);
                const Int den = B * B * u;
                if (mod_pos(num, den) != 0) continue;
                out.emplace_back(z1, num / den);
            }
        }
        return out;
    }
    if (A == 0 && B != 0) {
        auto swapped = binary_quadratic_points(C, B, A, E, D, F);
        if (!swapped) return std::nullopt;
        for (const auto& [x, y] : *swapped) out.emplace_back(y, x);
        return out;
    }
    return std::nullopt;
}

}  // namespace detail

/// Exact classes of the given square satisfying every constraint. Equalities
/// are solved over Z first; the remaining quadratic in at most two variables
/// is solved exactly when finiteness can be certified, otherwise the ambient
/// box |r|, |a|, |s| <= box is searched and the result is marked incomplete.
inline ConstrainedResult enumerate_constrained(const SurfaceParams& sp, const Int& target_square,
                                               const std::vector<AffineConstraint>& constraints, const Int& box) {
    ConstrainedResult out;
    std::vector<const AffineConstraint*> eqs;
    for (const auto& c : constraints) {
        if (c.coeffs.size() != 3) throw Error(ErrorCode::InvalidInput, "constraints need three coefficients");
        if (c.rel == AffineConstraint::Rel::Eq) eqs.push_back(&c);
    }
    IntMatrix e(eqs.size(), 3);
    IntVector b(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) e(i, j) = eqs[i]->coeffs[j];
        b[i] = eqs[i]->rhs;
    }
    auto accept = [&](const IntVector& x) {
        if (square(MukaiVector::from_coords(x), sp) != target_square) return false;
        return std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) { return c.holds(x); });
    };
    auto finish = [&](std::vector<IntVector> pts, bool complete) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        for (const auto& x : pts)
            if (accept(x)) out.vectors.push_back(MukaiVector::from_coords(x));
        out.complete = complete;
        return out;
    };
    auto box_search = [&]() {
        std::vector<IntVector> pts;
        for (Int r = -box; r <= box; ++r)
            for (Int a = -box; a <= box; ++a)
                for (Int s = -box; s <= box; ++s) {
                    IntVector x{r, a, s};
                    if (accept(x)) pts.push_back(x);
                }
        return finish(pts, false);
    };

    auto sol = detail::solve_affine(e, b);
    if (!sol) return finish({}, true);
    const IntMatrix g = mukai_gram(sp);
    IntMatrix kern = sol->kernel;
    const std::size_t free_dims = kern.rows();
    auto point = [&](const std::vector<Int>& z) {
        IntVector x = sol->x0;
        for (std::size_t i = 0; i < free_dims; ++i)
            for (std::size_t j = 0; j < 3; ++j) x[j] += z[i] * kern(i, j);
        return x;
    };
    auto bil = [&](const IntVector& x, const IntVector& y) {
        Int acc = 0;
        const IntVector gy = g * y;
        for (std::size_t j = 0; j < 3; ++j) acc += x[j] * gy[j];
        return acc;
    };
    const IntVector& x0 = sol->x0;
    const Int base = bil(x0, x0) - target_square;

    if (free_dims == 0) return finish({x0}, true);
    if (free_dims == 1) {
        const IntVector k = kern.row(0);
        auto roots = integer_roots({Rat(bil(k, k)), Rat(2 * bil(k, x0)), Rat(base)});
        if (!roots) return box_search();
        std::vector<IntVector> pts;
        for (const Int& j : *roots) pts.push_back(point({j}));
        return finish(pts, true);
    }
    if (free_dims == 2) {
        IntVector k1 = kern.row(0), k2 = kern.row(1);
        // put an isotropic direction of the quadratic part second when one is rational
        const Int qa = bil(k1, k1), qb = 2 * bil(k1, k2), qc = bil(k2, k2);
        const Int disc = qb * qb - 4 * qa * qc;
        if (disc >= 0 && is_square(disc) && qc != 0) {
            Int u1, u2;
            if (qa == 0) {
                u1 = 1;
                u2 = 0;
            } else {
                u1 = -qb + isqrt(disc);
                u2 = 2 * qa;
            }
            const Int gg = gcd(u1, u2);
            u1 /= gg;
            u2 /= gg;
            const Bezout bz = ext_gcd(u1, u2);
            // new basis (w, u) with w = (-bz.y, bz.x) in z-coordinates
            IntVector nk1(3), nk2(3);
            for (std::size_t j = 0; j < 3; ++j) {
                nk1[j] = -bz.y * k1[j] + bz.x * k2[j];
                nk2[j] = u1 * k1[j] + u2 * k2[j];
            }
            k1 = nk1;
            k2 = nk2;
            for (std::size_t j = 0; j < 3; ++j) {
                kern(0, j) = k1[j];
                kern(1, j) = k2[j];
            }
        }
        auto pts2 = detail::binary_quadratic_points(bil(k1, k1), 2 * bil(k1, k2), bil(k2, k2), 2 * bil(k1, x0),
                                                    2 * bil(k2, x0), base);
        if (!pts2) return box_search();
        std::vector<IntVector> pts;
        for (const auto& [z1, z2] : *pts2) pts.push_back(point({z1, z2}));
        return finish(pts, true);
    }
    return box_search();
}

}  // namespace mukai
