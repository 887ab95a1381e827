#pragma once

// JSON operation dispatch shared by the command line and the replay harness.
// A request is {"op": name, ...arguments}; the reply is a JSON object.

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "mukai/json_io.hpp"

namespace mukai::ops {

using io::json;

/// User-defined surfaces, families and isometries loaded from a config file.
struct Context {
    std::map<std::string, SurfaceParams> surfaces;
    std::map<std::string, CharteredFamily> families;
    std::map<std::string, json> isometries;  // name -> generator word or {eps, forms}

    static Context from_json(const json& j) {
        Context ctx;
        if (j.contains("surfaces"))
            for (auto it = j.at("surfaces").begin(); it != j.at("surfaces").end(); ++it)
                ctx.surfaces.emplace(it.key(), SurfaceParams(io::int_from_json(it.value().at("d"))));
        if (j.contains("families"))
            for (auto it = j.at("families").begin(); it != j.at("families").end(); ++it)
                ctx.families.emplace(it.key(), io::family_from_json(it.value()));
        if (j.contains("isometries"))
            for (auto it = j.at("isometries").begin(); it != j.at("isometries").end(); ++it)
                ctx.isometries.emplace(it.key(), it.value());
        return ctx;
    }

    static Context from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorCode::InvalidInput, "cannot open config file " + path);
        try {
            return from_json(json::parse(in));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidInput, std::string("bad config file: ") + e.what());
        }
    }
};

namespace detail {

inline const json& need(const json& req, const char* key) {
    if (!req.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
    return req.at(key);
}

inline SurfaceParams surface(const json& req, const Context& ctx, const char* key = "degree") {
    const json& j = need(req, key);
    if (j.is_string()) {
        auto it = ctx.surfaces.find(j.get<std::string>());
        if (it != ctx.surfaces.end()) return it->second;
    }
    return SurfaceParams(io::int_from_json(j));
}

inline CharteredFamily family(const json& j, const Context& ctx) {
    if (j.is_string()) {
        auto it = ctx.families.find(j.get<std::string>());
        if (it != ctx.families.end()) return it->second;
        return named_family(j.get<std::string>());
    }
    return io::family_from_json(j);
}

inline IntVector colon_ints(const std::string& text, std::size_t expect) {
    IntVector out;
    std::stringstream ss(text);
    std::string part;
    std::getline(ss, part, ':');  // generator name
    while (std::getline(ss, part, ':')) out.push_back(parse_int(part));
    if (out.size() != expect) throw Error(ErrorCode::InvalidInput, "bad generator '" + text + "'");
    return out;
}

LatticeIsometry isometry(const json& j, const SurfaceParams& sp, const Context& ctx, int depth = 0);

// One letter of a generator word: a named isometry, "neg", "inv",
// "twist:r:a:s" or "tau_U:a:b:c".
inline LatticeIsometry letter(const std::string& w, const SurfaceParams& sp, const Context& ctx, int depth) {
    if (w.rfind("twist:", 0) == 0) return twist(MukaiVector::from_coords(colon_ints(w, 3)), sp);
    if (w.rfind("tau_U:", 0) == 0) {
        const IntVector c = colon_ints(w, 3);
        return tau_U(c[0], c[1], c[2], sp);
    }
    return isometry(json(w), sp, ctx, depth + 1);
}

/// Named isometry, {"eps", "forms"}, or a generator word applied left to
/// right ("neg" and "inv" act on everything before them).
inline LatticeIsometry isometry(const json& j, const SurfaceParams& sp, const Context& ctx, int depth) {
    if (depth > 32) throw Error(ErrorCode::InvalidInput, "isometry definitions nest too deeply");
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        auto it = ctx.isometries.find(name);
        if (it != ctx.isometries.end()) return isometry(it->second, sp, ctx, depth + 1);
        return named_isometry(name, sp);
    }
    const json& word = j.is_object() && j.contains("word") ? j.at("word") : j;
    if (word.is_array()) {
        LatticeIsometry acc = LatticeIsometry::identity(sp);
        for (const auto& step : word) {
            const std::string w = step.get<std::string>();
            if (w == "neg") acc = negate(acc);
            else if (w == "inv") acc = inverse(acc);
            else acc = compose(acc, letter(w, sp, ctx, depth));
        }
        return acc;
    }
    LatticeIsometry t = io::isometry_from_json(j, sp);
    if (t.surface().d != sp.d) throw Error(ErrorCode::DegreeMismatch, "isometry degree differs from the requested surface");
    return t;
}

inline WallMode wall_mode(const json& req) {
    const std::string m = req.value("mode", std::string("exact"));
    if (m == "exact") return WallMode::Exact;
    if (m == "abstract") return WallMode::Abstract;
    throw Error(ErrorCode::InvalidInput, "mode must be exact or abstract");
}

inline Effectivity effectivity(const json& req) {
    const std::string p = req.value("policy", std::string("phase-aligned"));
    if (p == "phase-aligned") return Effectivity::PhaseAligned;
    if (p == "rank-positive") return Effectivity::RankPositive;
    throw Error(ErrorCode::InvalidInput, "policy must be phase-aligned or rank-positive");
}

inline AffineConstraint constraint(const json& j) {
    AffineConstraint c;
    c.coeffs = io::int_vector_from_json(need(j, "coeffs"));
    if (c.coeffs.size() != 3) throw Error(ErrorCode::InvalidInput, "constraint needs three coefficients");
    const std::string rel = j.value("rel", std::string("eq"));
    if (rel == "eq") c.rel = AffineConstraint::Rel::Eq;
    else if (rel == "ge") c.rel = AffineConstraint::Rel::Ge;
    else if (rel == "le") c.rel = AffineConstraint::Rel::Le;
    else throw Error(ErrorCode::InvalidInput, "rel must be eq, ge or le");
    c.rhs = io::int_from_json(need(j, "rhs"));
    return c;
}

inline unsigned small_count(const json& j, const char* what) {
    const Int n = io::int_from_json(j);
    if (n < 0 || n > 100000) throw Error(ErrorCode::InvalidInput, std::string(what) + " out of range");
    return static_cast<unsigned>(n.get_ui());
}

inline json vectors(const std::vector<MukaiVector>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back(io::to_json(v));
    return out;
}

inline json pairs(const std::vector<std::pair<Int, Int>>& ps) {
    json out = json::array();
    for (const auto& [x, y] : ps) out.push_back(json::array({io::to_json(x), io::to_json(y)}));
    return out;
}

}  // namespace detail

inline json run(const json& req, const Context& ctx = {}) {
    using namespace detail;
    using io::to_json;
    if (!req.is_object()) throw Error(ErrorCode::InvalidInput, "request must be a JSON object");
    const std::string op = need(req, "op").get<std::string>();

    // lattice
    if (op == "pair") {
        const SurfaceParams sp = surface(req, ctx);
        const MukaiVector v = io::vector_from_json(need(req, "v"));
        const MukaiVector w = req.contains("w") ? io::vector_from_json(req.at("w")) : v;
        return {{"pair", to_json(pair(v, w, sp))}};
    }
    if (op == "square") {
        const SurfaceParams sp = surface(req, ctx);
        const MukaiVector v = io::vector_from_json(need(req, "v"));
        const Int sq = square(v, sp);
        return {{"square", to_json(sq)}, {"spherical", sq == -2}, {"isotropic", sq == 0},
                {"hodge_feasible", hodge_feasible(v, sp)}};
    }
    if (op == "perp") {
        const SurfaceParams sp = surface(req, ctx);
        return to_json(perp(io::vector_from_json(need(req, "v")), sp));
    }
    if (op == "binary_equivalent") {
        const auto w = binary_form_equivalent(io::int_matrix_from_json(need(req, "g1")), io::int_matrix_from_json(need(req, "g2")));
        return {{"equivalent", w.has_value()}, {"witness", w ? to_json(*w) : json(nullptr)}};
    }
    if (op == "enumerate_constrained") {
        const SurfaceParams sp = surface(req, ctx);
        std::vector<AffineConstraint> cs;
        for (const auto& c : req.value("constraints", json::array())) cs.push_back(constraint(c));
        const auto res = enumerate_constrained(sp, io::int_from_json(need(req, "square")), cs, io::int_from_json(need(req, "box")));
        return {{"vectors", vectors(res.vectors)}, {"complete", res.complete}};
    }

    // isometries
    if (op == "isometry") {
        const SurfaceParams sp = surface(req, ctx);
        const LatticeIsometry t = isometry(need(req, "isometry"), sp, ctx);
        json out = to_json(t);
        out["matrix"] = to_json(t.exact_matrix());
        const auto ord = order(t, small_count(req.value("n_max", json(24)), "n_max"));
        out["order"] = ord ? json(*ord) : json(nullptr);
        if (req.contains("v")) out["image"] = to_json(t.apply(io::vector_from_json(req.at("v"))));
        return out;
    }
    if (op == "isometry_equal") {
        const SurfaceParams sp = surface(req, ctx);
        return {{"equal", isometry(need(req, "lhs"), sp, ctx) == isometry(need(req, "rhs"), sp, ctx)}};
    }
    if (op == "fixed_lattice") {
        const SurfaceParams sp = surface(req, ctx);
        const LatticeIsometry t = isometry(need(req, "isometry"), sp, ctx);
        const IntMatrix fl = fixed_lattice(t);
        json out{{"hnf", to_json(hermite_basis(fl))}};
        if (fl.rows() > 0) out["lattice"] = to_json(GramLattice::from_basis(fl, sp));
        return out;
    }
    if (op == "restrict_to_perp") {
        const SurfaceParams sp = surface(req, ctx);
        const LatticeIsometry t = isometry(need(req, "isometry"), sp, ctx);
        const PerpRestriction res = restrict_to_perp(t, io::vector_from_json(need(req, "v")));
        return {{"perp", to_json(res.perp)}, {"matrix", to_json(res.matrix)}};
    }

    // central charges
    if (op == "fixed_pair") {
        const SurfaceParams sp = surface(req, ctx);
        return to_json(fixed_pair(isometry(need(req, "isometry"), sp, ctx)));
    }
    if (op == "charge_eval") {
        const SurfaceParams sp = surface(req, ctx);
        const ChargeValue z = eval(io::params_from_json(need(req, "params")), io::vector_from_json(need(req, "v")), sp);
        return {{"re", to_json(z.re)}, {"im", to_json(z.im)}};
    }
    if (op == "family_eval") {
        const SurfaceParams sp = surface(req, ctx);
        const CharteredFamily f = family(need(req, "family"), ctx);
        json out = to_json(family_eval(f, io::vector_from_json(need(req, "v")), sp));
        out["family"] = to_json(f);
        return out;
    }
    if (op == "t_linear") {
        return to_json(t_linear(family(need(req, "family"), ctx), io::rat_from_json(need(req, "t"))));
    }
    if (op == "spherical_obstruction") {
        const SurfaceParams sp = surface(req, ctx);
        const auto res = spherical_obstruction(io::params_from_json(need(req, "params")), sp, io::int_from_json(need(req, "box")));
        return {{"hits", vectors(res.hits)}, {"certified", res.certified},
                {"candidate", res.candidate ? to_json(*res.candidate) : json(nullptr)}};
    }

    // walls
    if (op == "find_walls") {
        const SurfaceParams sp = surface(req, ctx);
        const CharteredFamily f = family(need(req, "family"), ctx);
        const json& t = need(req, "t");
        if (!t.is_array() || t.size() != 2) throw Error(ErrorCode::InvalidInput, "t must be [lo, hi]");
        std::optional<Int> bound;
        if (req.contains("bound")) bound = io::int_from_json(req.at("bound"));
        const auto walls = find_walls(f, io::vector_from_json(need(req, "v")), sp, wall_mode(req), io::rat_from_json(t[0]),
                                      io::rat_from_json(t[1]), bound);
        json arr = json::array();
        for (const auto& w : walls) arr.push_back(to_json(w));
        return {{"count", walls.size()}, {"walls", arr}};
    }
    if (op == "wall_lattice") {
        const SurfaceParams sp = surface(req, ctx);
        const MukaiVector v = io::vector_from_json(need(req, "v"));
        const CharteredFamily f = family(need(req, "family"), ctx);
        const GramLattice hw = hyperbolic_lattice(f, v, sp, io::rat_from_json(need(req, "t0")));
        return {{"hw", to_json(hw)}, {"classification", to_json(classify_wall(hw, v, sp))},
                {"totally_semistable", to_json(totally_semistable(hw, v, sp, effectivity(req), f.y))}};
    }

    // Kuznetsov components
    if (op.rfind("ku_", 0) == 0) {
        const KuLattice ku = KuLattice::from_name(need(req, "lattice").get<std::string>());
        const SurfaceParams sp = req.contains("degree") ? surface(req, ctx) : ku.surface();
        if (op == "ku_forg") return to_json(forg(ku, io::vector_from_json(need(req, "v")), sp), ku);
        if (op == "ku_inf") return to_json(inf(ku, io::ku_class_from_json(need(req, "class"), ku)));
        if (op == "ku_euler")
            return {{"euler", to_json(euler(ku, io::ku_class_from_json(need(req, "x"), ku), io::ku_class_from_json(need(req, "y"), ku)))}};
        if (op == "ku_verify") {
            const std::size_t n = small_count(req.value("samples", json(100)), "samples");
            const std::uint64_t seed = req.value("seed", std::uint64_t{20240611});
            return to_json(verify_identities(ku, n, seed));
        }
        if (op == "ku_fiber") {
            const std::string m = req.value("mode", std::string("exact"));
            if (m != "exact" && m != "abstract") throw Error(ErrorCode::InvalidInput, "mode must be exact or abstract");
            const Int square_min = req.contains("square_min") ? io::int_from_json(req.at("square_min")) : Int(-2);
            const auto vs = fiber(ku, io::ku_class_from_json(need(req, "target"), ku), sp,
                                  m == "exact" ? FiberMode::Exact : FiberMode::Abstract, square_min);
            return {{"basis", ku.basis()}, {"classes", vectors(vs)}};
        }
    }

    // appendix sweeps
    if (op == "atlas_rotations") {
        const auto hits = classify_rotation_involutions(small_count(need(req, "d_max"), "d_max"), small_count(need(req, "n_max"), "n_max"));
        json arr = json::array();
        for (const auto& [d, n] : hits) arr.push_back(json::array({to_json(d), n}));
        return {{"pairs", arr}};
    }
    if (op == "atlas_fibonacci") {
        json arr = json::array();
        for (const auto& t : fibonacci_solutions(small_count(need(req, "n_max"), "n_max"))) arr.push_back(to_json(t));
        return {{"triples", arr}};
    }
    if (op == "atlas_vieta") {
        return {{"solutions", pairs(vieta_solve(io::int_from_json(need(req, "t")), io::int_from_json(need(req, "bound"))))}};
    }
    if (op == "atlas_twist") {
        const IntVector c = io::int_vector_from_json(need(req, "triple"));
        if (c.size() != 4) throw Error(ErrorCode::InvalidInput, "triple needs (a, b, c, d)");
        const TwistTriple t(c[0], c[1], c[2], c[3]);
        const LatticeIsometry inv = twist_involution(t);
        return {{"condition", twist_involution_condition(t.a, t.b, t.d)}, {"involution", is_twist_involution(t)},
                {"isometry", to_json(inv)}, {"fixed_pair", to_json(fixed_pair(inv))}};
    }
    if (op == "atlas_fixed_pair_family") {
        return to_json(fixed_pair_family(small_count(need(req, "n"), "n")));
    }
    if (op == "atlas_og10") {
        const Og10Report rep = og10_check();
        return {{"pass", rep.pass}, {"classes", to_json(rep.classes)}, {"gram", to_json(rep.gram)}, {"target", to_json(rep.target)},
                {"witness", rep.witness ? to_json(*rep.witness) : json(nullptr)}};
    }
    throw Error(ErrorCode::InvalidInput, "unknown op '" + op + "'");
}

}  // namespace mukai::ops
