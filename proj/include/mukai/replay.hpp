#pragma once

// Replay harness: every case file under data/replay holds the cases for one
// proposition. Each case names an op request and its expected reply; the
// reply must contain every expected key with exactly that value.

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <set>

#include "mukai/ops.hpp"
#include "mukai/parallel.hpp"

namespace mukai::replay {

using io::json;

struct ReplayCase {
    std::string id;
    std::string suite;     // qds | gm | atlas
    std::string source;    // published | derived | trivial
    std::string citation;
    std::string file;
    json input;
    json expected;  // or {"error": code name}
};

enum class Status { Pass, Fail, Error };

inline std::string to_string(Status s) { return s == Status::Pass ? "pass" : s == Status::Fail ? "FAIL" : "ERROR"; }

struct CaseResult {
    std::string id, suite, source;
    Status status = Status::Error;
    json actual;
    std::string message;
};

struct Report {
    std::vector<CaseResult> results;  // sorted by id
    std::size_t passed = 0, failed = 0, errors = 0;
    bool ok() const { return failed == 0 && errors == 0; }
};

namespace detail {

inline std::string field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw Error(ErrorCode::InvalidInput, where + ": missing string field '" + key + "'");
    return j.at(key).get<std::string>();
}

}  // namespace detail

inline std::vector<ReplayCase> load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
    }
    const std::string where = path.filename().string();
    const std::string file_suite = doc.value("suite", std::string());
    std::vector<ReplayCase> out;
    for (const auto& c : doc.at("cases")) {
        ReplayCase rc;
        rc.id = detail::field(c, "id", where);
        rc.suite = c.contains("suite") ? detail::field(c, "suite", where) : file_suite;
        rc.source = detail::field(c, "source", where + "/" + rc.id);
        rc.citation = detail::field(c, "citation", where + "/" + rc.id);
        rc.file = where;
        if (rc.suite != "qds" && rc.suite != "gm" && rc.suite != "atlas")
            throw Error(ErrorCode::InvalidInput, rc.id + ": suite must be qds, gm or atlas");
        if (rc.source != "published" && rc.source != "derived" && rc.source != "trivial")
            throw Error(ErrorCode::InvalidInput, rc.id + ": source must be published, derived or trivial");
        if (!c.contains("input") || !c.contains("expected")) throw Error(ErrorCode::InvalidInput, rc.id + ": needs input and expected");
        rc.input = c.at("input");
        rc.expected = c.at("expected");
        out.push_back(std::move(rc));
    }
    return out;
}

/// All cases in `dir`, sorted by id; duplicate ids are rejected.
inline std::vector<ReplayCase> load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::InvalidInput, "no replay directory " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<ReplayCase> all;
    for (const auto& f : files) {
        auto cs = load_file(f);
        all.insert(all.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
    }
    std::sort(all.begin(), all.end(), [](const ReplayCase& a, const ReplayCase& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i].id == all[i - 1].id) throw Error(ErrorCode::InvalidInput, "duplicate case id " + all[i].id);
    return all;
}

/// selector: "all", a suite name, or a case id.
inline std::vector<ReplayCase> select(const std::vector<ReplayCase>& cases, const std::string& selector) {
    if (selector == "all") return cases;
    std::vector<ReplayCase> out;
    if (selector == "qds" || selector == "gm" || selector == "atlas") {
        for (const auto& c : cases)
            if (c.suite == selector) out.push_back(c);
        return out;
    }
    for (const auto& c : cases)
        if (c.id == selector) out.push_back(c);
    if (out.empty()) throw Error(ErrorCode::UnknownCase, "no replay case or suite named '" + selector + "'");
    return out;
}

inline CaseResult run_case(const ReplayCase& c, const ops::Context& ctx) {
    CaseResult r{c.id, c.suite, c.source, Status::Error, nullptr, ""};
    const bool wants_error = c.expected.is_object() && c.expected.size() == 1 && c.expected.contains("error");
    try {
        r.actual = ops::run(c.input, ctx);
        if (wants_error) {
            r.status = Status::Fail;
            r.message = "expected error " + c.expected.at("error").get<std::string>();
        } else if (io::subset_match(c.expected, r.actual)) {
            r.status = Status::Pass;
        } else {
            r.status = Status::Fail;
            r.message = "expected " + c.expected.dump() + ", got " + r.actual.dump();
        }
    } catch (const Error& e) {
        const std::string code = error_code_name(e.code());
        if (wants_error && c.expected.at("error") == code) {
            r.status = Status::Pass;
            r.actual = json{{"error", code}};
        } else {
            r.message = e.what();
        }
    } catch (const std::exception& e) {
        r.message = e.what();
    }
    return r;
}

inline Report run(const std::vector<ReplayCase>& cases, const ops::Context& ctx = {}) {
    Report rep;
    rep.results = parallel_map<CaseResult>(cases.size(), [&](std::size_t i) { return run_case(cases[i], ctx); });
    std::sort(rep.results.begin(), rep.results.end(), [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    for (const auto& r : rep.results) {
        if (r.status == Status::Pass) ++rep.passed;
        else if (r.status == Status::Fail) ++rep.failed;
        else ++rep.errors;
    }
    return rep;
}

inline json to_json(const Report& rep) {
    json cases = json::array();
    for (const auto& r : rep.results) {
        json c{{"id", r.id}, {"suite", r.suite}, {"source", r.source}, {"status", to_string(r.status)}};
        if (!r.message.empty()) c["message"] = r.message;
        cases.push_back(c);
    }
    return {{"cases", cases}, {"passed", rep.passed}, {"failed", rep.failed}, {"errors", rep.errors}};
}

inline std::string to_text(const Report& rep) {
    std::size_t w = 4;
    for (const auto& r : rep.results) w = std::max(w, r.id.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(w) + 2) << "case" << std::setw(7) << "suite" << std::setw(11) << "source"
       << "status\n";
    for (const auto& r : rep.results) {
        os << std::setw(static_cast<int>(w) + 2) << r.id << std::setw(7) << r.suite << std::setw(11) << r.source
           << to_string(r.status) << "\n";
        if (!r.message.empty()) os << "    " << r.message << "\n";
    }
    os << rep.passed << " passed, " << rep.failed << " failed, " << rep.errors << " errors\n";
    return os.str();
}

}  // namespace mukai::replay
