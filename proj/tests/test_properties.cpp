#include <gtest/gtest.h>

#include "random_objects.hpp"

using namespace mukai;
using namespace mukai::testing;

constexpr int kCases = 1000;

TEST(Properties, IsometriesPreserveThePairing) {
    Rng rng(101);
    for (int i = 0; i < kCases; ++i) {
        const SurfaceParams sp{Int(uniform(rng, 1, 7))};
        std::string word;
        const LatticeIsometry t = random_isometry(rng, sp, 4, &word);
        const MukaiVector v = random_exact(rng, 25), w = random_exact(rng, 25);
        ASSERT_EQ(pair(t.apply(v), t.apply(w), sp), pair(v, w, sp)) << word;
        const Int det = determinant(t.exact_matrix());
        ASSERT_TRUE(det == 1 || det == -1) << word;
    }
}

TEST(Properties, NamedIsometriesPreserveThePairing) {
    Rng rng(102);
    const std::vector<LatticeIsometry> named{tau_q(), tau_1(), tau_2(), o_gm(), rotation(SurfaceParams{Int(2)})};
    for (int i = 0; i < kCases; ++i) {
        const LatticeIsometry& t = named[static_cast<std::size_t>(i) % named.size()];
        const MukaiVector v = random_exact(rng, 60), w = random_exact(rng, 60);
        ASSERT_EQ(pair(t.apply(v), t.apply(w), t.surface()), pair(v, w, t.surface()));
    }
}

TEST(Properties, SquaresAreEven) {
    Rng rng(103);
    for (int i = 0; i < kCases; ++i) {
        const SurfaceParams sp{Int(uniform(rng, 1, 12))};
        const MukaiVector v = (i % 2 == 0) ? random_exact(rng, 1000) : random_abstract(rng, sp, 200);
        ASSERT_TRUE(mpz_even_p(square(v, sp).get_mpz_t())) << v;
    }
}

TEST(Properties, HodgeFeasibilityIsPreserved) {
    Rng rng(104);
    for (int i = 0; i < kCases; ++i) {
        const SurfaceParams sp{Int(uniform(rng, 1, 7))};
        const LatticeIsometry t = random_isometry(rng, sp, 3);
        const MukaiVector v = random_abstract(rng, sp, 30);
        ASSERT_TRUE(hodge_feasible(v, sp));
        const MukaiVector image = t.apply(v);
        ASSERT_TRUE(hodge_feasible(image, sp)) << v << " -> " << image;
        ASSERT_EQ(square(image, sp), square(v, sp));
    }
}

TEST(Properties, WallReportsReverify) {
    Rng rng(105);
    const std::vector<std::pair<CharteredFamily, long>> families{{quartic_family(), 2}, {gm_family_1(), 5}, {gm_family_2(), 5}};
    int walls_seen = 0, done = 0;
    while (done < kCases) {
        const auto& [f, d] = families[static_cast<std::size_t>(done) % families.size()];
        const SurfaceParams sp{Int(d)};
        const MukaiVector v = random_exact(rng, 4);
        if (v.coords() == IntVector{0, 0, 0} || square(v, sp) < 0 || family_eval(f, v, sp).im <= 0) continue;
        const auto ws = find_walls(f, v, sp, WallMode::Exact, 0, 4);
        const std::string bad = reverify_walls(ws, f, v, sp, 0, 4);
        ASSERT_TRUE(bad.empty()) << bad;
        walls_seen += static_cast<int>(ws.size());
        ++done;
    }
    EXPECT_GT(walls_seen, 100);
}
