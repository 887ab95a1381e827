#pragma once

// JSON encodings. Rationals are strings ("1/2"), integers are JSON numbers
// when they fit in a machine word and decimal strings otherwise, surds are
// {"p", "q", "n"} meaning p + q sqrt(n).

#include <json.hpp>

#include <string>
#include <vector>

#include "mukai/atlas.hpp"
#include "mukai/kuznetsov.hpp"
#include "mukai/walls.hpp"

namespace mukai::io {

using json = nlohmann::ordered_json;

inline json to_json(const Int& n) {
    if (n.fits_slong_p()) return json(n.get_si());
    return json(n.get_str());
}

inline Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) return parse_int(j.get<std::string>());
    throw Error(ErrorCode::InvalidInput, "expected an integer, got " + j.dump());
}

inline json to_json(const Rat& q) { return json(q.get_str()); }

inline Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(int_from_json(j));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw Error(ErrorCode::InvalidInput, "expected a rational string, got " + j.dump());
}

inline json to_json(const QuadSurd& s) {
    return json{{"p", s.p().get_str()}, {"q", s.q().get_str()}, {"n", to_json(s.n())}};
}

inline json to_json(const IntVector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

inline IntVector int_vector_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected an array, got " + j.dump());
    IntVector out;
    for (const auto& x : j) out.push_back(int_from_json(x));
    return out;
}

inline json to_json(const IntMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
    return out;
}

inline json to_json(const RatMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

inline IntMatrix int_matrix_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected a matrix, got " + j.dump());
    std::vector<IntVector> rows;
    for (const auto& r : j) rows.push_back(int_vector_from_json(r));
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw Error(ErrorCode::InvalidInput, "ragged matrix");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = rows[i][k];
    }
    return m;
}

inline RatMatrix rat_matrix_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected a matrix, got " + j.dump());
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw Error(ErrorCode::InvalidInput, "ragged matrix");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = rat_from_json(j[i][k]);
    }
    return m;
}

inline json to_json(const MukaiVector& v) {
    json div;
    if (v.is_exact()) div = json{{"exact", to_json(v.a())}};
    else div = json{{"hdeg", to_json(v.div.as_abstract().hdeg)}, {"sq", to_json(v.div.as_abstract().sq)}};
    return json{{"r", to_json(v.r)}, {"div", div}, {"s", to_json(v.s)}};
}

/// Accepts the object form or a bare [r, a, s] array.
inline MukaiVector vector_from_json(const json& j) {
    if (j.is_array()) {
        const IntVector c = int_vector_from_json(j);
        if (c.size() != 3) throw Error(ErrorCode::InvalidInput, "a vector needs three coordinates");
        return MukaiVector::from_coords(c);
    }
    if (!j.is_object() || !j.contains("r") || !j.contains("div") || !j.contains("s"))
        throw Error(ErrorCode::InvalidInput, "malformed Mukai vector " + j.dump());
    const json& div = j.at("div");
    if (div.contains("exact")) return MukaiVector::exact(int_from_json(j.at("r")), int_from_json(div.at("exact")), int_from_json(j.at("s")));
    if (div.contains("hdeg") && div.contains("sq"))
        return MukaiVector::abstract(int_from_json(j.at("r")), int_from_json(div.at("hdeg")), int_from_json(div.at("sq")),
                                     int_from_json(j.at("s")));
    throw Error(ErrorCode::InvalidInput, "malformed divisor part " + div.dump());
}

inline DivisorClass divisor_from_json(const json& j) {
    if (j.contains("exact")) return DivisorClass::exact(int_from_json(j.at("exact")));
    if (j.contains("hdeg") && j.contains("sq")) return DivisorClass::abstract(int_from_json(j.at("hdeg")), int_from_json(j.at("sq")));
    throw Error(ErrorCode::InvalidInput, "malformed divisor part " + j.dump());
}

inline json to_json(const GramLattice& g) {
    json out{{"rank", g.rank()}, {"gram", to_json(g.gram)}};
    if (g.embedding) {
        json basis = json::array();
        for (std::size_t i = 0; i < g.rank(); ++i) basis.push_back(to_json(g.basis_vector(i)));
        out["basis"] = basis;
    }
    if (!g.labels.empty()) out["labels"] = g.labels;
    return out;
}

inline GramLattice lattice_from_json(const json& j) {
    GramLattice g = GramLattice::from_gram(int_matrix_from_json(j.at("gram")));
    if (j.contains("rank") && int_from_json(j.at("rank")) != Int(static_cast<unsigned long>(g.rank())))
        throw Error(ErrorCode::RankMismatch, "declared rank does not match the Gram matrix");
    if (j.contains("basis")) {
        IntMatrix emb(g.rank(), 3);
        std::size_t i = 0;
        for (const auto& b : j.at("basis")) {
            if (i >= g.rank()) throw Error(ErrorCode::RankMismatch, "too many basis vectors");
            const IntVector c = vector_from_json(b).coords();
            for (std::size_t k = 0; k < 3; ++k) emb(i, k) = c[k];
            ++i;
        }
        g.embedding = emb;
    }
    if (j.contains("labels")) g.labels = j.at("labels").get<std::vector<std::string>>();
    return g;
}

inline json to_json(const LatticeIsometry& t) {
    return json{{"degree", to_json(t.surface().d)}, {"eps", t.eps()}, {"forms", to_json(t.forms())}};
}

inline LatticeIsometry isometry_from_json(const json& j, const SurfaceParams& fallback) {
    const SurfaceParams sp = j.contains("degree") ? SurfaceParams(int_from_json(j.at("degree"))) : fallback;
    return LatticeIsometry(sp, j.at("eps").get<int>(), rat_matrix_from_json(j.at("forms")));
}

inline json to_json(const ChargeParams& p) { return json{{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

inline ChargeParams params_from_json(const json& j) { return ChargeParams(rat_from_json(j.at("x")), rat_from_json(j.at("y"))); }

inline json to_json(const FixedPair& f) {
    json out;
    if (f.params) {
        out["x"] = to_json(f.params->x);
        out["y"] = to_json(f.params->y);
    }
    out["status"] = to_string(f.status);
    if (!f.note.empty()) out["note"] = f.note;
    return out;
}

inline json to_json(const CharteredFamily& f) {
    return json{{"y", to_json(f.y)}, {"x0", to_json(f.x0)}, {"k", to_json(f.k)}, {"c", to_json(f.c)}};
}

inline CharteredFamily family_from_json(const json& j) {
    return CharteredFamily(rat_from_json(j.at("y")), rat_from_json(j.at("x0")), rat_from_json(j.at("k")), rat_from_json(j.at("c")));
}

inline json to_json(const FamilyValue& v) {
    return json{{"re", {{"const", to_json(v.re0)}, {"slope", to_json(v.re1)}}}, {"im", to_json(v.im)}};
}

inline json to_json(const WallClass& c) {
    json out{{"kind", to_string(c.kind)}, {"reason", c.reason}};
    out["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
    return out;
}

inline json to_json(const TotallySemistable& t) {
    json out{{"verdict", t.verdict}, {"policy", to_string(t.policy)}, {"certified", t.certified},
             {"pairing_bound", to_json(t.pairing_bound)}};
    out["witness"] = t.witness ? to_json(*t.witness) : json(nullptr);
    return out;
}

inline json to_json(const WallReport& w) {
    json out{{"t", to_json(w.t)}, {"t_linear", to_json(w.t_linear)}, {"destabilizer", to_json(w.destabilizer)},
             {"quotient", to_json(w.quotient)}};
    out["hw"] = w.hw ? to_json(*w.hw) : json(nullptr);
    out["classification"] = to_json(w.classification);
    out["totally_semistable"] = w.totally_semistable ? to_json(*w.totally_semistable) : json(nullptr);
    out["certified"] = w.certified;
    out["search_bound"] = w.search_bound ? to_json(*w.search_bound) : json(nullptr);
    out["requires_geometric_input"] = w.requires_geometric_input;
    return out;
}

inline json to_json(const KuClass& c, const KuLattice& ku) {
    return json{{"a", to_json(c.a)}, {"b", to_json(c.b)}, {"basis", ku.basis()}};
}

inline KuClass ku_class_from_json(const json& j, const KuLattice& ku) {
    if (j.is_array()) {
        const IntVector c = int_vector_from_json(j);
        if (c.size() != 2) throw Error(ErrorCode::InvalidInput, "a Kuznetsov class needs two coordinates");
        return {c[0], c[1]};
    }
    if (j.contains("basis") && j.at("basis").get<std::string>() != ku.basis())
        throw Error(ErrorCode::InvalidInput, "class given in basis '" + j.at("basis").get<std::string>() + "', lattice uses '" + ku.basis() + "'");
    return {int_from_json(j.at("a")), int_from_json(j.at("b"))};
}

inline json to_json(const TwistTriple& t) { return json::array({to_json(t.a), to_json(t.b), to_json(t.c), to_json(t.d)}); }

inline json to_json(const IdentityReport& r) {
    return json{{"ok", r.ok()},
                {"forg_inf_doubles", r.forg_inf_doubles},
                {"inf_forg_is_id_plus_tau", r.inf_forg_is_id_plus_tau},
                {"adjunction", r.adjunction},
                {"adjunction_sign", r.adjunction_sign},
                {"samples", r.samples},
                {"violations", r.violations}};
}

/// "r,a,s" for an exact class, "r,hdeg:sq,s" for an abstract one.
inline json vector_text_to_json(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (ch != ' ' && ch != '(' && ch != ')') {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw Error(ErrorCode::InvalidInput, "vector '" + text + "' needs three comma-separated parts");
    const auto colon = parts[1].find(':');
    if (colon == std::string::npos) return json::array({to_json(parse_int(parts[0])), to_json(parse_int(parts[1])), to_json(parse_int(parts[2]))});
    return to_json(MukaiVector::abstract(parse_int(parts[0]), parse_int(parts[1].substr(0, colon)), parse_int(parts[1].substr(colon + 1)),
                                         parse_int(parts[2])));
}

/// Every key of `expected` is present in `actual` with a matching value;
/// arrays must have equal length and match element-wise.
inline bool subset_match(const json& expected, const json& actual) {
    if (expected.is_object()) {
        if (!actual.is_object()) return false;
        for (auto it = expected.begin(); it != expected.end(); ++it) {
            if (!actual.contains(it.key())) return false;
            if (!subset_match(it.value(), actual.at(it.key()))) return false;
        }
        return true;
    }
    if (expected.is_array()) {
        if (!actual.is_array() || actual.size() != expected.size()) return false;
        for (std::size_t i = 0; i < expected.size(); ++i)
            if (!subset_match(expected[i], actual[i])) return false;
        return true;
    }
    return expected == actual;
}

}  // namespace mukai::io
