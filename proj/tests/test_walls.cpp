#include <gtest/gtest.h>

#include <set>

#include "mukai/walls.hpp"

using namespace mukai;

namespace {

MukaiVector V(long r, long a, long s) { return MukaiVector::exact(r, a, s); }

// Walls by exhaustive search: w in a box with 0 < im(w) < im(v), both
// pieces of square >= -2, and the phases of Z_t(w), Z_t(v) agreeing.
std::set<Rat> brute_wall_times(const CharteredFamily& f, const MukaiVector& v, const SurfaceParams& sp, long box, const Rat& t_hi) {
    const FamilyValue fv = family_eval(f, v, sp);
    std::set<Rat> out;
    for (long r = -box; r <= box; ++r)
        for (long a = -box; a <= box; ++a)
            for (long s = -box; s <= box; ++s) {
                const MukaiVector w = V(r, a, s);
                const FamilyValue fw = family_eval(f, w, sp);
                if (!(fw.im > 0 && fw.im < fv.im)) continue;
                if (square(w, sp) < -2 || square(v + (-w), sp) < -2) continue;
                // (re0_w + re1_w t) im_v = (re0_v + re1_v t) im_w
                const Rat den = fw.re1 * fv.im - fv.re1 * fw.im;
                const Rat num = fv.re0 * fw.im - fw.re0 * fv.im;
                if (den == 0) continue;
                const Rat t = num / den;
                if (t >= 0 && t <= t_hi && f.in_domain(t)) out.insert(t);
            }
    return out;
}

// Re-derive each reported wall from the definitions.
void reverify(const WallReport& w, const CharteredFamily& f, const MukaiVector& v, const SurfaceParams& sp) {
    EXPECT_EQ(w.destabilizer + w.quotient, v);
    const FamilyValue fv = family_eval(f, v, sp), fw = family_eval(f, w.destabilizer, sp);
    EXPECT_EQ(fw.re_at(w.t) * fv.im, fv.re_at(w.t) * fw.im);
    EXPECT_GT(fw.im, 0);
    EXPECT_LT(fw.im, fv.im);
    EXPECT_GE(square(w.destabilizer, sp), -2);
    EXPECT_GE(square(w.quotient, sp), -2);
    EXPECT_EQ(w.t_linear, t_linear(f, w.t));
    if (w.hw) {
        EXPECT_TRUE(w.hw->contains(v));
        EXPECT_TRUE(w.hw->contains(w.destabilizer));
        EXPECT_LT(determinant(w.hw->gram), 0);
    }
}

std::set<Rat> times(const std::vector<WallReport>& ws) {
    std::set<Rat> out;
    for (const auto& w : ws) out.insert(w.t);
    return out;
}

}  // namespace

TEST(Walls, U1HasNoWalls) {
    const SurfaceParams sp{Int(2)};
    EXPECT_TRUE(find_walls(quartic_family(), V(1, 0, -1), sp, WallMode::Exact, 0, 10).empty());
    EXPECT_TRUE(brute_wall_times(quartic_family(), V(1, 0, -1), sp, 12, 10).empty());
}

TEST(Walls, TwiceU1) {
    const SurfaceParams sp{Int(2)};
    const MukaiVector v = V(2, 0, -2);
    const auto ws = find_walls(quartic_family(), v, sp, WallMode::Exact, 0, 10);
    ASSERT_EQ(ws.size(), 1u);
    const WallReport& w = ws[0];
    EXPECT_EQ(w.t, 0);
    const std::set<MukaiVector, bool (*)(const MukaiVector&, const MukaiVector&)> pieces(
        {w.destabilizer, w.quotient}, [](const MukaiVector& x, const MukaiVector& y) { return x.coords() < y.coords(); });
    EXPECT_EQ(pieces.count(V(3, -1, 1)), 1u);
    EXPECT_EQ(pieces.count(V(-1, 1, -3)), 1u);
    EXPECT_EQ(w.classification.kind, WallKind::Flopping);
    ASSERT_TRUE(w.totally_semistable);
    EXPECT_FALSE(w.totally_semistable->verdict);
    EXPECT_TRUE(w.totally_semistable->certified);
    EXPECT_TRUE(w.certified);
    reverify(w, quartic_family(), v, sp);
    EXPECT_EQ(times(ws), brute_wall_times(quartic_family(), v, sp, 12, 10));
}

TEST(Walls, ZeroHMinusTwo) {
    const SurfaceParams sp{Int(2)};
    const MukaiVector v = V(0, 1, -2);
    const auto ws = find_walls(quartic_family(), v, sp, WallMode::Exact, 0, 10);
    ASSERT_EQ(ws.size(), 2u);
    EXPECT_EQ(ws[0].t, 0);
    EXPECT_EQ(ws[0].destabilizer, V(1, 0, 0));
    EXPECT_EQ(ws[0].quotient, V(-1, 1, -2));
    EXPECT_EQ(ws[0].classification.kind, WallKind::Divisorial);
    EXPECT_EQ(ws[1].t, 1);
    EXPECT_EQ(ws[1].t_linear.str(), "sqrt(3)");
    EXPECT_EQ(ws[1].destabilizer, V(1, 0, 1));
    EXPECT_EQ(ws[1].quotient, V(-1, 1, -3));
    EXPECT_EQ(ws[1].classification.kind, WallKind::Flopping);
    for (const auto& w : ws) reverify(w, quartic_family(), v, sp);
    EXPECT_EQ(times(ws), brute_wall_times(quartic_family(), v, sp, 12, 10));
}

TEST(Walls, DegreeTenFamily) {
    const SurfaceParams sp{Int(5)};
    const auto ws = find_walls(gm_family_2(), V(1, 0, -2), sp, WallMode::Exact, 0, 10);
    ASSERT_EQ(ws.size(), 1u);
    EXPECT_EQ(ws[0].t, Rat(1, 5));
    EXPECT_EQ(ws[0].t_linear.str(), "sqrt(2)");
    EXPECT_EQ(ws[0].destabilizer, V(2, -1, 3));
    EXPECT_EQ(ws[0].quotient, V(-1, 1, -5));
    EXPECT_EQ(ws[0].classification.kind, WallKind::Flopping);
    reverify(ws[0], gm_family_2(), V(1, 0, -2), sp);
    EXPECT_EQ(times(ws), brute_wall_times(gm_family_2(), V(1, 0, -2), sp, 12, 10));

    EXPECT_TRUE(find_walls(gm_family_2(), V(2, -1, 2), sp, WallMode::Exact, 0, 10).empty());
    EXPECT_TRUE(brute_wall_times(gm_family_2(), V(2, -1, 2), sp, 12, 10).empty());
}

TEST(Walls, BruteForceAgreementOnSmallClasses) {
    // every primitive class of small positive square along the quartic family
    const SurfaceParams sp{Int(2)};
    int compared = 0;
    for (long r = 0; r <= 2; ++r)
        for (long a = -1; a <= 2; ++a)
            for (long s = -3; s <= 1; ++s) {
                const MukaiVector v = V(r, a, s);
                if (!is_primitive(v.coords())) continue;
                if (square(v, sp) < 2 || family_eval(quartic_family(), v, sp).im <= 0) continue;
                const auto ws = find_walls(quartic_family(), v, sp, WallMode::Exact, 0, 6);
                for (const auto& w : ws) reverify(w, quartic_family(), v, sp);
                EXPECT_EQ(times(ws), brute_wall_times(quartic_family(), v, sp, 10, 6)) << v;
                ++compared;
            }
    EXPECT_GT(compared, 5);
}

TEST(Walls, AbstractModeFlagsGeometricInput) {
    const SurfaceParams sp{Int(2)};
    const auto ws = find_walls(quartic_family(), V(1, 0, -1), sp, WallMode::Abstract, 0, 10);
    EXPECT_EQ(ws.size(), 4u);
    for (const auto& w : ws) {
        EXPECT_TRUE(w.requires_geometric_input);
        EXPECT_FALSE(w.destabilizer.is_exact() && w.quotient.is_exact());
        EXPECT_TRUE(hodge_feasible(w.destabilizer, sp));
    }
}

TEST(Walls, TotallySemistableAlongTheWallLattice) {
    const SurfaceParams sp{Int(2)};
    const MukaiVector v = V(2, 0, -2);
    for (long k = 0; k <= 10; ++k) {
        const GramLattice hw = hyperbolic_lattice(quartic_family(), v, sp, make_rat(k, 3));
        const TotallySemistable ts = totally_semistable(hw, v, sp, Effectivity::PhaseAligned, quartic_family().y);
        EXPECT_FALSE(ts.verdict) << k;
        EXPECT_TRUE(ts.certified) << k;
    }
    const GramLattice hw0 = hyperbolic_lattice(quartic_family(), v, sp, 0);
    EXPECT_EQ(hw0.gram, (IntMatrix{{2, 4}, {4, 4}}));
}

TEST(Walls, ClassificationRules) {
    const SurfaceParams sp{Int(2)};
    const MukaiVector v = V(0, 1, -2);
    const WallClass c0 = classify_wall(hyperbolic_lattice(quartic_family(), v, sp, 0), v, sp);
    EXPECT_EQ(c0.kind, WallKind::Divisorial);
    const WallClass c1 = classify_wall(hyperbolic_lattice(quartic_family(), v, sp, 1), v, sp);
    EXPECT_EQ(c1.kind, WallKind::Flopping);
    ASSERT_TRUE(c1.witness);
    EXPECT_TRUE(is_spherical(*c1.witness, sp));
}

TEST(Walls, InputErrors) {
    const SurfaceParams sp{Int(2)};
    EXPECT_THROW(find_walls(quartic_family(), V(1, 0, -1), sp, WallMode::Exact, 3, 1), Error);
    EXPECT_THROW(find_walls(quartic_family(), V(1, 0, -1), sp, WallMode::Exact, -1, 1), Error);
    EXPECT_THROW(find_walls(quartic_family(), V(0, 0, 0), sp, WallMode::Exact, 0, 1), Error);
}

TEST(Enumerate, IsotropicOnALine) {
    const SurfaceParams sp{Int(2)};
    const auto res = enumerate_constrained(sp, 0, {{{1, 2, 0}, AffineConstraint::Rel::Eq, 1}}, 5);
    EXPECT_TRUE(res.complete);
    ASSERT_EQ(res.vectors.size(), 2u);
    // brute force in a much larger box finds nothing more
    std::size_t count = 0;
    for (long r = -40; r <= 40; ++r)
        for (long a = -40; a <= 40; ++a)
            for (long s = -40; s <= 40; ++s)
                if (r + 2 * a == 1 && is_isotropic(V(r, a, s), sp)) ++count;
    EXPECT_EQ(count, 2u);
}

TEST(Enumerate, BoxSearchIsMarkedIncomplete) {
    const SurfaceParams sp{Int(2)};
    const auto res = enumerate_constrained(sp, -2, {}, 2);
    EXPECT_FALSE(res.complete);
    std::size_t count = 0;
    for (long r = -2; r <= 2; ++r)
        for (long a = -2; a <= 2; ++a)
            for (long s = -2; s <= 2; ++s)
                if (is_spherical(V(r, a, s), sp)) ++count;
    EXPECT_EQ(res.vectors.size(), count);
}
