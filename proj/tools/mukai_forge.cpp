// mukai_forge: command-line front end to the lattice library.
// Every subcommand builds an op request (see ops.hpp) and prints the reply.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "mukai/ops.hpp"
#include "mukai/replay.hpp"

#ifndef MUKAI_REPLAY_DIR
#define MUKAI_REPLAY_DIR "data/replay"
#endif

namespace {

using mukai::io::json;

enum Exit { kOk = 0, kMismatch = 1, kInvalid = 2 };

json degree_json(const std::string& text) {
    try {
        return mukai::io::to_json(mukai::parse_int(text));
    } catch (const mukai::Error&) {
        return json(text);  // a surface named in the config
    }
}

// "tau_q" or a comma-separated generator word such as "tensor_H,twist:1:0:1,neg".
json isometry_json(const std::string& text) {
    if (text.find(',') == std::string::npos && text.find(':') == std::string::npos) return json(text);
    json word = json::array();
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) word.push_back(part);
    return json{{"word", word}};
}

json pair_json(const std::string& text) {
    const json v = mukai::io::vector_text_to_json(text + ",0");
    return json::array({v[0], v[1]});
}

json range_json(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw mukai::Error(mukai::ErrorCode::InvalidInput, "range must look like lo:hi");
    return json::array({text.substr(0, colon), text.substr(colon + 1)});
}

// Plain-text rendering of a reply.
std::string scalar(const json& j) {
    if (j.is_null()) return "-";
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.contains("r") && j.contains("div") && j.contains("s"))
        return mukai::io::vector_from_json(j).str();
    if (j.is_object() && j.size() == 3 && j.contains("p") && j.contains("q") && j.contains("n")) {
        const std::string p = j.at("p"), q = j.at("q");
        if (q == "0") return p;
        return (p == "0" ? "" : p + "+") + (q == "1" ? "" : q + "*") + "sqrt(" + j.at("n").dump() + ")";
    }
    if (j.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar(j[i]);
        return s + "]";
    }
    return j.dump();
}

bool is_block(const json& j) {
    if (j.is_object()) return !(j.contains("r") && j.contains("div")) && !(j.size() == 3 && j.contains("n") && j.contains("q"));
    return false;
}

void render(std::ostream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (is_block(j)) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const json& v = it.value();
            const bool nested = is_block(v) || (v.is_array() && !v.empty() && is_block(v[0]));
            os << pad << it.key() << ":";
            if (nested) {
                os << "\n";
                render(os, v, indent + 2);
            } else {
                os << " " << scalar(v) << "\n";
            }
        }
    } else if (j.is_array() && !j.empty() && is_block(j[0])) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            os << pad << "[" << i << "]\n";
            render(os, j[i], indent + 2);
        }
    } else {
        os << pad << scalar(j) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact lattice computations for K3 surfaces of Picard rank one"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json", config_path;
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--config", config_path, "JSON file defining surfaces, families and isometries");

    json request;
    std::string degree = "2", vec, vec2, iso, family = "quartic", mode = "exact", t_range = "0:10", t0 = "0";
    std::string policy = "phase-aligned", lattice = "qds", target, klass, triple, suite = "all", replay_dir = MUKAI_REPLAY_DIR;
    std::string x, y, raw;
    long nmax = 12, dmax = 50, samples = 100, box = 20, n = 0, tval = 3, bound = 100000, square_min = -2;
    std::optional<long> wall_bound;
    bool fixed = false;
    std::optional<std::string> perp_of;

    auto* pair = app.add_subcommand("pair", "Mukai pairing, or the square when --w is omitted");
    pair->add_option("--degree", degree, "d with H^2 = 2d")->required();
    pair->add_option("--v", vec, "r,a,s or r,hdeg:sq,s")->required();
    pair->add_option("--w", vec2);
    pair->callback([&] {
        request = {{"op", vec2.empty() ? "square" : "pair"}, {"degree", degree_json(degree)}, {"v", mukai::io::vector_text_to_json(vec)}};
        if (!vec2.empty()) request["w"] = mukai::io::vector_text_to_json(vec2);
    });

    auto* isom = app.add_subcommand("isometry", "Build an isometry and report its matrix, order and fixed data");
    isom->add_option("--name", iso, "named isometry or generator word")->required();
    isom->add_option("--degree", degree)->required();
    isom->add_option("--apply", vec, "vector to map");
    isom->add_flag("--fixed-lattice", fixed, "report the invariant sublattice");
    isom->add_option("--perp", perp_of, "restrict to the orthogonal complement of this fixed vector");
    isom->add_option("--nmax", nmax, "order search cap");
    isom->callback([&] {
        request = {{"degree", degree_json(degree)}, {"isometry", isometry_json(iso)}};
        if (fixed) {
            request["op"] = "fixed_lattice";
        } else if (perp_of) {
            request["op"] = "restrict_to_perp";
            request["v"] = mukai::io::vector_text_to_json(*perp_of);
        } else {
            request["op"] = "isometry";
            request["n_max"] = nmax;
            if (!vec.empty()) request["v"] = mukai::io::vector_text_to_json(vec);
        }
    });

    auto* charge = app.add_subcommand("charge", "Central charges");
    charge->require_subcommand(1);
    auto* fp = charge->add_subcommand("fixed-pair", "The charge parameters fixed by an isometry");
    fp->add_option("--isometry", iso)->required();
    fp->add_option("--degree", degree)->required();
    fp->callback([&] { request = {{"op", "fixed_pair"}, {"degree", degree_json(degree)}, {"isometry", isometry_json(iso)}}; });
    auto* ev = charge->add_subcommand("eval", "Z_(x,y)(v)");
    ev->add_option("--x", x)->required();
    ev->add_option("--y", y)->required();
    ev->add_option("--vector", vec)->required();
    ev->add_option("--degree", degree)->required();
    ev->callback([&] {
        request = {{"op", "charge_eval"}, {"degree", degree_json(degree)}, {"params", {{"x", x}, {"y", y}}},
                   {"v", mukai::io::vector_text_to_json(vec)}};
    });
    auto* fam = charge->add_subcommand("family", "Z along a chartered family, affine in t");
    fam->add_option("--family", family)->required();
    fam->add_option("--vector", vec)->required();
    fam->add_option("--degree", degree)->required();
    fam->callback([&] {
        request = {{"op", "family_eval"}, {"degree", degree_json(degree)}, {"family", family}, {"v", mukai::io::vector_text_to_json(vec)}};
    });
    auto* obs = charge->add_subcommand("obstruction", "Spherical classes with Z = 0 at (x, y)");
    obs->add_option("--x", x)->required();
    obs->add_option("--y", y)->required();
    obs->add_option("--degree", degree)->required();
    obs->add_option("--box", box);
    obs->callback([&] {
        request = {{"op", "spherical_obstruction"}, {"degree", degree_json(degree)}, {"params", {{"x", x}, {"y", y}}}, {"box", box}};
    });

    auto* walls = app.add_subcommand("walls", "Wall enumeration along a family");
    walls->require_subcommand(1);
    auto* wf = walls->add_subcommand("find", "All numerical walls for a class over a t-range");
    wf->add_option("--family", family)->required();
    wf->add_option("--vector", vec)->required();
    wf->add_option("--degree", degree)->required();
    wf->add_option("--t", t_range, "lo:hi");
    wf->add_option("--mode", mode)->check(CLI::IsMember({"exact", "abstract"}));
    wf->add_option("--bound", wall_bound, "search bound when no certificate exists");
    wf->callback([&] {
        request = {{"op", "find_walls"}, {"degree", degree_json(degree)}, {"family", family},
                   {"v", mukai::io::vector_text_to_json(vec)}, {"t", range_json(t_range)}, {"mode", mode}};
        if (wall_bound) request["bound"] = *wall_bound;
    });
    auto* wh = walls->add_subcommand("hw", "The wall lattice at t0 with its classification");
    wh->add_option("--family", family)->required();
    wh->add_option("--vector", vec)->required();
    wh->add_option("--degree", degree)->required();
    wh->add_option("--t0", t0)->required();
    wh->add_option("--policy", policy)->check(CLI::IsMember({"phase-aligned", "rank-positive"}));
    wh->callback([&] {
        request = {{"op", "wall_lattice"}, {"degree", degree_json(degree)}, {"family", family},
                   {"v", mukai::io::vector_text_to_json(vec)}, {"t0", t0}, {"policy", policy}};
    });

    auto* ku = app.add_subcommand("ku", "Kuznetsov component lattices");
    ku->require_subcommand(1);
    auto lattice_opt = [&](CLI::App* sub) {
        sub->add_option("--lattice", lattice, "qds, gm1 or gm2")->check(CLI::IsMember({"qds", "gm1", "gm2"}));
    };
    auto* kf = ku->add_subcommand("fiber", "Classes over a Kuznetsov class");
    lattice_opt(kf);
    kf->add_option("--target", target, "a,b")->required();
    kf->add_option("--mode", mode)->check(CLI::IsMember({"exact", "abstract"}));
    kf->add_option("--square-min", square_min);
    kf->callback([&] {
        request = {{"op", "ku_fiber"}, {"lattice", lattice}, {"target", pair_json(target)}, {"mode", mode}, {"square_min", square_min}};
    });
    auto* kforg = ku->add_subcommand("forg", "Forgetful map of a Mukai vector");
    lattice_opt(kforg);
    kforg->add_option("--vector", vec)->required();
    kforg->callback([&] { request = {{"op", "ku_forg"}, {"lattice", lattice}, {"v", mukai::io::vector_text_to_json(vec)}}; });
    auto* kinf = ku->add_subcommand("inf", "Inflation of a Kuznetsov class");
    lattice_opt(kinf);
    kinf->add_option("--class", klass, "a,b")->required();
    kinf->callback([&] { request = {{"op", "ku_inf"}, {"lattice", lattice}, {"class", pair_json(klass)}}; });
    auto* kv = ku->add_subcommand("verify", "Check forg/inf identities on random vectors");
    lattice_opt(kv);
    kv->add_option("--samples", samples);
    kv->callback([&] { request = {{"op", "ku_verify"}, {"lattice", lattice}, {"samples", samples}}; });

    auto* atlas = app.add_subcommand("atlas", "Involution classifications");
    atlas->require_subcommand(1);
    auto* ar = atlas->add_subcommand("rotations", "(d, n) with O_d^n = id");
    ar->add_option("--dmax", dmax);
    ar->add_option("--nmax", nmax);
    ar->callback([&] { request = {{"op", "atlas_rotations"}, {"d_max", dmax}, {"n_max", nmax}}; });
    auto* af = atlas->add_subcommand("fibonacci", "Fibonacci twist-involution triples");
    af->add_option("--nmax", nmax);
    af->callback([&] { request = {{"op", "atlas_fibonacci"}, {"n_max", nmax}}; });
    auto* av = atlas->add_subcommand("vieta", "Solutions of x^2 + y^2 + 1 = t x y");
    av->add_option("--t", tval);
    av->add_option("--bound", bound);
    av->callback([&] { request = {{"op", "atlas_vieta"}, {"t", tval}, {"bound", bound}}; });
    auto* ao = atlas->add_subcommand("og10", "Gram matrix check for the O'Grady-type classes");
    ao->callback([&] { request = {{"op", "atlas_og10"}}; });
    auto* at = atlas->add_subcommand("twist", "Involution test for a triple a,b,c,d");
    at->add_option("--triple", triple)->required();
    at->callback([&] {
        json arr = json::array();
        std::stringstream ss(triple);
        std::string part;
        while (std::getline(ss, part, ',')) arr.push_back(mukai::io::to_json(mukai::parse_int(part)));
        request = {{"op", "atlas_twist"}, {"triple", arr}};
    });
    auto* afam = atlas->add_subcommand("family", "Closed-form fixed pair for even n");
    afam->add_option("--n", n)->required();
    afam->callback([&] { request = {{"op", "atlas_fixed_pair_family"}, {"n", n}}; });

    auto* rep = app.add_subcommand("replay", "Re-run the stored proposition cases");
    rep->add_option("--suite", suite, "all, qds, gm, atlas or a case id");
    rep->add_option("--dir", replay_dir, "case directory");

    auto* op = app.add_subcommand("op", "Run a raw JSON request");
    op->add_option("request", raw, "JSON text, @file, or - for stdin")->required();
    op->callback([&] {
        if (raw == "-") {
            request = json::parse(std::cin);
        } else if (!raw.empty() && raw[0] == '@') {
            std::ifstream in(raw.substr(1));
            if (!in) throw mukai::Error(mukai::ErrorCode::InvalidInput, "cannot open " + raw.substr(1));
            request = json::parse(in);
        } else {
            request = json::parse(raw);
        }
    });

    try {
        app.parse(argc, argv);
        const mukai::ops::Context ctx = config_path.empty() ? mukai::ops::Context{} : mukai::ops::Context::from_file(config_path);

        if (rep->parsed()) {
            const auto cases = mukai::replay::select(mukai::replay::load_dir(replay_dir), suite);
            const auto report = mukai::replay::run(cases, ctx);
            if (format == "json") std::cout << mukai::replay::to_json(report).dump(2) << "\n";
            else std::cout << mukai::replay::to_text(report);
            return report.ok() ? kOk : kMismatch;
        }

        const json reply = mukai::ops::run(request, ctx);
        if (format == "json") std::cout << reply.dump() << "\n";
        else render(std::cout, reply, 0);
        return kOk;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    } catch (const mukai::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return kInvalid;
    }
}
