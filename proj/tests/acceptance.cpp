// One line per acceptance criterion; nonzero exit if any fails.
#include <algorithm>
#include <functional>
#include <iostream>
#include <set>

#include "mukai/mukai.hpp"
#include "random_objects.hpp"

using namespace mukai;

namespace {

MukaiVector V(long r, long a, long s) { return MukaiVector::exact(r, a, s); }

struct Check {
    bool ok = true;
    std::string why;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    }
};

std::vector<IntVector> sorted_coords(std::vector<MukaiVector> vs) {
    std::vector<IntVector> out;
    for (const auto& v : vs) out.push_back(v.coords());
    std::sort(out.begin(), out.end());
    return out;
}

bool same_set(const std::vector<MukaiVector>& got, const std::vector<MukaiVector>& want) {
    return sorted_coords(got) == sorted_coords(want);
}

Check fixed_pairs() {
    Check c;
    auto is = [&](const LatticeIsometry& t, Rat x, Rat y, const char* name) {
        const FixedPair fp = fixed_pair(t);
        c.expect(fp.status == FixedPairStatus::Unique && fp.params && *fp.params == ChargeParams(x, y), name);
    };
    is(tau_q(), make_rat(1, 2), make_rat(-1, 2), "tau_q");
    is(tau_1(), make_rat(1, 5), make_rat(-2, 5), "tau_1");
    is(tau_2(), make_rat(1, 5), make_rat(-3, 5), "tau_2");
    return c;
}

Check fixed_lattices() {
    Check c;
    c.expect(fixed_lattice(tau_q()) == hermite_basis(IntMatrix{{1, 0, -1}, {1, -1, 1}}), "tau_q");
    c.expect(fixed_lattice(tau_1()) == hermite_basis(IntMatrix{{1, 0, -1}, {2, -1, 2}}), "tau_1");
    c.expect(fixed_lattice(tau_2()) == hermite_basis(IntMatrix{{1, -1, 4}, {-2, 1, -2}}), "tau_2");
    return c;
}

// image of (r, aH, s) is (r', kH - aH, s'), each of r', k, s' linear in (r, s, 2d a)
struct Formula {
    std::array<long, 3> r, k, s;
};

MukaiVector by_formula(const Formula& f, const MukaiVector& v, long d) {
    auto lin = [&](const std::array<long, 3>& c) -> Int { return c[0] * v.r + c[1] * v.s + c[2] * 2 * d * v.a(); };
    return MukaiVector::exact(lin(f.r), lin(f.k) - v.a(), lin(f.s));
}

Check composites() {
    Check c;
    const SurfaceParams s2{Int(2)}, s5{Int(5)};
    const LatticeIsometry o2 = rotation(s2);
    const LatticeIsometry pi_q = compose(o2, o2);
    const LatticeIsometry pi_1 = compose(compose(tensor_H(s5), twist(V(2, 1, 3), s5)), twist(V(1, 0, 1), s5));
    const LatticeIsometry pi_2 = compose(compose(tensor_H(s5), twist(V(1, 0, 1), s5)), twist(V(2, -1, 3), s5));
    const std::vector<std::tuple<const char*, LatticeIsometry, Formula, long>> rows{
        {"Pi_q", pi_q, {{-1, -2, -1}, {1, 1, 1}, {-2, -1, -1}}, 2},
        {"Pi_1", pi_1, {{-4, -5, -2}, {2, 2, 1}, {-5, -4, -2}}, 5},
        {"Pi_2", pi_2, {{-9, -5, -3}, {6, 3, 2}, {-20, -9, -6}}, 5},
    };
    for (const auto& [name, pi, f, d] : rows)
        for (const MukaiVector& e : {V(1, 0, 0), V(0, 1, 0), V(0, 0, 1)})
            c.expect(negate(pi).apply(e) == by_formula(f, e, d), std::string(name) + " on " + e.str());
    return c;
}

Check kuznetsov_identities() {
    Check c;
    for (KuName n : {KuName::QDS, KuName::GM1, KuName::GM2}) {
        const KuLattice ku(n);
        const IdentityReport rep = verify_identities(ku, 100);
        c.expect(rep.forg_inf_doubles && rep.inf_forg_is_id_plus_tau,
                 ku.id() + ": " + (rep.violations.empty() ? std::string("flag unset") : rep.violations.front()));
    }
    return c;
}

Check fibers() {
    Check c;
    const KuLattice qds(KuName::QDS), gm1(KuName::GM1);
    c.expect(same_set(fiber(qds, {0, -1}, qds.surface(), FiberMode::Exact), {V(1, 0, 0), V(-1, 1, -2)}), "-mu2");
    c.expect(same_set(fiber(qds, {-2, 0}, qds.surface(), FiberMode::Exact), {V(-1, 1, -3), V(1, 0, -1), V(3, -1, 1)}),
             "-2mu1");
    c.expect(same_set(fiber(gm1, {-1, 0}, gm1.surface(), FiberMode::Exact), {V(3, -1, 2), V(-2, 1, -3)}), "-kappa1");
    return c;
}

bool split_is(const WallReport& w, const MukaiVector& a, const MukaiVector& b) {
    return same_set({w.destabilizer, w.quotient}, {a, b});
}

Check walls() {
    Check c;
    const SurfaceParams s2{Int(2)}, s5{Int(5)};
    c.expect(find_walls(quartic_family(), V(1, 0, -1), s2, WallMode::Exact, 0, 10).empty(), "u1 has walls");

    const auto twice = find_walls(quartic_family(), V(2, 0, -2), s2, WallMode::Exact, 0, 10);
    c.expect(twice.size() == 1, "2u1 wall count");
    if (twice.size() == 1) {
        const WallReport& w = twice[0];
        c.expect(w.t == 0 && split_is(w, V(3, -1, 1), V(-1, 1, -3)) && w.classification.kind == WallKind::Flopping,
                 "2u1 wall");
    }
    for (const auto& w : twice)
        c.expect(w.totally_semistable && !w.totally_semistable->verdict && w.totally_semistable->certified,
                 "2u1 totally semistable verdict");

    const auto zh = find_walls(quartic_family(), V(0, 1, -2), s2, WallMode::Exact, 0, 10);
    c.expect(zh.size() == 2, "(0,H,-2) wall count");
    if (zh.size() == 2) {
        c.expect(zh[0].t == 0 && split_is(zh[0], V(1, 0, 0), V(-1, 1, -2)) &&
                     zh[0].classification.kind == WallKind::Divisorial,
                 "(0,H,-2) divisorial wall");
        c.expect(zh[1].t == 1 && split_is(zh[1], V(1, 0, 1), V(-1, 1, -3)) &&
                     zh[1].classification.kind == WallKind::Flopping,
                 "(0,H,-2) flopping wall");
    }

    const auto gm = find_walls(gm_family_2(), V(1, 0, -2), s5, WallMode::Exact, 0, 10);
    c.expect(gm.size() == 1 && gm[0].t == make_rat(1, 5) && gm[0].classification.kind == WallKind::Flopping,
             "(1,0,-2) on the degree-10 family");
    c.expect(find_walls(gm_family_2(), V(2, -1, 2), s5, WallMode::Exact, 0, 10).empty(), "(2,-H,2) has walls");
    return c;
}

Check appendix_sweep() {
    Check c;
    std::set<std::pair<long, unsigned>> want;
    for (unsigned n = 1; n <= 12; ++n) {
        if (n % 3 == 0) want.emplace(1, n), want.emplace(3, n);
        if (n % 2 == 0) want.emplace(2, n);
    }
    const auto hits = classify_rotation_involutions(50, 12);
    std::set<std::pair<long, unsigned>> got;
    for (const auto& [d, n] : hits) got.emplace(d.get_si(), n);
    c.expect(got == want && hits.size() == want.size(), "rotation classification");

    const auto triples = fibonacci_solutions(10);
    c.expect(triples.size() == 12, "fibonacci triple count");
    for (const TwistTriple& t : triples)
        c.expect(t.b * t.b * t.d - t.a * t.c == -1 && twist_involution_condition(t.a, t.b, t.d) && is_twist_involution(t),
                 "triple fails sphericality or the involution condition");
    c.expect(triples.size() >= 2 && triples[0] == TwistTriple(2, -1, 3, 5) && triples[1] == TwistTriple(3, -1, 2, 5),
             "n = 0 triples");

    // brute force: x >= y >= 1 with x^2 + y^2 + 1 = t x y, x <= bound
    auto brute = [](long t, long bound) {
        std::vector<std::pair<Int, Int>> out;
        for (long y = 1; y <= bound; ++y) {
            const Int disc = Int(t * t - 4) * y * y - 4;
            if (disc < 0 || !is_square(disc)) continue;
            const Int root = isqrt(disc);
            for (const Int& num : {Int(Int(t * y) + root), Int(Int(t * y) - root)}) {
                if (mpz_odd_p(num.get_mpz_t())) continue;
                const Int x = num / 2;
                if (x >= y && x <= bound) out.emplace_back(x, Int(y));
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    c.expect(vieta_solve(3, 1000000) == brute(3, 1000000), "vieta t = 3");
    for (long t : {1L, 2L, 4L, 5L, 6L}) c.expect(vieta_solve(t, 10000).empty(), "vieta t = " + std::to_string(t));
    return c;
}

Check og10() {
    Check c;
    const Og10Report rep = og10_check();
    c.expect(rep.pass, "og10_check");
    c.expect(rep.gram == IntMatrix{{-4, 6}, {6, -6}}, "Gram matrix");
    c.expect(rep.witness.has_value(), "no witness");
    if (rep.witness) {
        const IntMatrix& p = *rep.witness;
        const Int det = determinant(p);
        c.expect((det == 1 || det == -1) && p.transpose() * rep.gram * p == IntMatrix{{2, 0}, {0, -6}},
                 "witness does not carry the Gram to diag(2,-6)");
    }
    return c;
}

Check properties() {
    using namespace mukai::testing;
    constexpr int kCases = 1000;
    Check c;
    Rng rng(2718);
    for (int i = 0; i < kCases && c.ok; ++i) {
        const SurfaceParams sp{Int(uniform(rng, 1, 7))};
        std::string word;
        const LatticeIsometry t = random_isometry(rng, sp, 4, &word);
        const MukaiVector v = random_exact(rng, 25), w = random_exact(rng, 25);
        c.expect(pair(t.apply(v), t.apply(w), sp) == pair(v, w, sp), "pairing not preserved by " + word);
        const MukaiVector a = random_abstract(rng, sp, 30);
        c.expect(hodge_feasible(t.apply(a), sp), "Hodge feasibility lost under " + word);
        c.expect(mpz_even_p(square(v, sp).get_mpz_t()) && mpz_even_p(square(a, sp).get_mpz_t()), "odd square");
    }
    for (const LatticeIsometry& t : {tau_q(), tau_1(), tau_2(), o_gm()})
        for (int i = 0; i < kCases / 4 && c.ok; ++i) {
            const MukaiVector v = random_exact(rng, 60), w = random_exact(rng, 60);
            c.expect(pair(t.apply(v), t.apply(w), t.surface()) == pair(v, w, t.surface()), "named isometry");
        }
    const std::vector<std::pair<CharteredFamily, long>> families{{quartic_family(), 2}, {gm_family_1(), 5}, {gm_family_2(), 5}};
    int done = 0;
    while (done < kCases && c.ok) {
        const auto& [f, d] = families[static_cast<std::size_t>(done) % families.size()];
        const SurfaceParams sp{Int(d)};
        const MukaiVector v = random_exact(rng, 4);
        if (v.coords() == IntVector{0, 0, 0} || square(v, sp) < 0 || family_eval(f, v, sp).im <= 0) continue;
        const std::string bad = reverify_walls(find_walls(f, v, sp, WallMode::Exact, 0, 4), f, v, sp, 0, 4);
        c.expect(bad.empty(), bad);
        ++done;
    }
    return c;
}

Check fixed_pair_family_consistency() {
    Check c;
    for (unsigned n = 0; n <= 10; n += 2) {
        const TwistTriple tr = fibonacci_triple(n);
        const FixedPair fp = fixed_pair(negate(tau_U(tr.a, tr.b, tr.c, SurfaceParams(tr.d))));
        c.expect(fp.status == FixedPairStatus::Unique && fp.params && *fp.params == fixed_pair_family(n),
                 "n = " + std::to_string(n));
    }
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
        {"fixed pairs", fixed_pairs},
        {"fixed lattices", fixed_lattices},
        {"composite identities", composites},
        {"Kuznetsov identities", kuznetsov_identities},
        {"fibers", fibers},
        {"walls", walls},
        {"appendix sweep", appendix_sweep},
        {"OG10 lattice", og10},
        {"property suites", properties},
        {"fixed-pair family consistency", fixed_pair_family_consistency},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.ok = false;
            c.why = std::string("threw: ") + e.what();
        }
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
        if (!c.ok) std::cout << " (" << c.why << ")";
        std::cout << "\n";
        failures += c.ok ? 0 : 1;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
    return failures == 0 ? 0 : 1;
}
