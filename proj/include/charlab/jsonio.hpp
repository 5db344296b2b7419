#pragma once

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "charlab/harness.hpp"

namespace charlab {
namespace io {

using nlohmann::json;

struct ConfigIssue {
    std::string path; // JSON pointer of the offending value
    std::string message;
};

/// Parse config text, flagging duplicate object keys (first one wins the
/// pointer report; the parse itself keeps the last value, which is why the
/// duplicate must be surfaced as an error).
inline json parse_config_text(const std::string& text, std::vector<ConfigIssue>& issues) {
    std::vector<std::set<std::string>> key_sets;
    std::vector<std::string> path;
    std::string pending_key;
    bool have_dup = false;
    json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
        switch (event) {
        case json::parse_event_t::object_start:
            key_sets.emplace_back();
            path.push_back(pending_key);
            pending_key.clear();
            break;
        case json::parse_event_t::object_end:
            key_sets.pop_back();
            path.pop_back();
            break;
        case json::parse_event_t::key: {
            std::string k = parsed.get<std::string>();
            if (!key_sets.empty() && !key_sets.back().insert(k).second && !have_dup) {
                have_dup = true;
                std::string p;
                for (const std::string& seg : path)
                    if (!seg.empty()) p += "/" + seg;
                issues.push_back({p + "/" + k, "duplicate key"});
            }
            pending_key = k;
            break;
        }
        default: break;
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::parse_error& e) {
        issues.push_back({"(byte " + std::to_string(e.byte) + ")", e.what()});
        return json();
    }
}

namespace detail {

inline void issue(std::vector<ConfigIssue>& issues, const std::string& path,
                  const std::string& msg) {
    issues.push_back({path, msg});
}

inline std::optional<Group> read_group(const json& j, const std::string& path,
                                       std::vector<ConfigIssue>& issues) {
    try {
        if (j.is_string()) return Group::parse(j.get<std::string>());
        if (j.is_object()) {
            if (!j.contains("moduli") || !j["moduli"].is_array()) {
                issue(issues, path + "/moduli", "expected an array of positive integers");
                return std::nullopt;
            }
            Vec mods;
            for (const auto& v : j["moduli"]) {
                if (!v.is_number_integer()) {
                    issue(issues, path + "/moduli", "moduli must be integers");
                    return std::nullopt;
                }
                mods.push_back(v.get<i64>());
            }
            return Group(mods);
        }
    } catch (const error& e) {
        issue(issues, path, e.what());
        return std::nullopt;
    }
    issue(issues, path, "expected a group literal string or {\"moduli\":[...]}");
    return std::nullopt;
}

inline double read_number(const json& j, const std::string& path, double dflt, double lo,
                          double hi, std::vector<ConfigIssue>& issues) {
    if (j.is_null()) return dflt;
    if (!j.is_number()) {
        issue(issues, path, "expected a number");
        return dflt;
    }
    double v = j.get<double>();
    if (v < lo || v > hi) {
        issue(issues, path, "value out of range");
        return dflt;
    }
    return v;
}

inline i64 read_int(const json& j, const std::string& path, i64 dflt, i64 lo, i64 hi,
                    std::vector<ConfigIssue>& issues) {
    if (j.is_null()) return dflt;
    if (!j.is_number_integer()) {
        issue(issues, path, "expected an integer");
        return dflt;
    }
    i64 v = j.get<i64>();
    if (v < lo || v > hi) {
        issue(issues, path, "value out of range");
        return dflt;
    }
    return v;
}

inline json at_or_null(const json& j, const char* key) {
    return j.is_object() && j.contains(key) ? j[key] : json();
}

} // namespace detail

struct ParsedConfig {
    ExperimentConfig config;
    std::vector<std::vector<double>> marginals; // optional test-dmk payload
    std::optional<int> k;
};

/// Schema-check and normalize a config object. Every violation is reported
/// with its JSON pointer; defaults fill in for missing optionals.
inline ParsedConfig config_from_json(const json& j, std::vector<ConfigIssue>& issues) {
    ParsedConfig out;
    if (!j.is_object()) {
        detail::issue(issues, "", "config must be a JSON object");
        return out;
    }
    static const std::set<std::string> known{"group", "m",          "n",     "alphas",
                                             "mode",  "seeds",      "tolerances", "search",
                                             "marginals", "k"};
    for (const auto& [key, val] : j.items())
        if (!known.count(key)) detail::issue(issues, "/" + key, "unknown key");

    ExperimentConfig& cfg = out.config;
    if (j.contains("group")) {
        if (auto g = detail::read_group(j["group"], "/group", issues)) cfg.group = *g;
    } else {
        detail::issue(issues, "/group", "missing");
    }

    // modes
    json jm = detail::at_or_null(j, "mode");
    if (!jm.is_null()) {
        std::string mode = jm.is_string() ? jm.get<std::string>() : "";
        if (mode == "theorem1")
            cfg.mode = Mode::theorem1;
        else if (mode == "theorem4")
            cfg.mode = Mode::theorem4;
        else if (mode == "theorem3")
            cfg.mode = Mode::theorem3;
        else if (mode == "explore-remark2")
            cfg.mode = Mode::explore_remark2;
        else
            detail::issue(issues, "/mode",
                          "expected one of theorem1, theorem4, theorem3, explore-remark2");
    }

    // coefficient grid: scalars or matrices
    if (j.contains("alphas") && j["alphas"].is_array() && !j["alphas"].empty()) {
        const json& rows = j["alphas"];
        cfg.m = rows.size();
        cfg.alphas.clear();
        bool all_scalar = true;
        std::size_t n = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].empty()) {
                detail::issue(issues, "/alphas/" + std::to_string(r), "expected a non-empty row");
                return out;
            }
            if (r == 0)
                n = rows[r].size();
            else if (rows[r].size() != n) {
                detail::issue(issues, "/alphas/" + std::to_string(r), "ragged coefficient grid");
                return out;
            }
            for (const auto& cell : rows[r])
                if (!cell.is_number_integer()) all_scalar = false;
        }
        cfg.n = n;
        Mat scalars(cfg.m, Vec(cfg.n, 0));
        for (std::size_t r = 0; r < cfg.m; ++r) {
            std::vector<Hom> row;
            for (std::size_t c = 0; c < cfg.n; ++c) {
                const json& cell = rows[r][c];
                const std::string cpath =
                    "/alphas/" + std::to_string(r) + "/" + std::to_string(c);
                try {
                    if (cell.is_number_integer()) {
                        scalars[r][c] = cell.get<i64>();
                        row.push_back(Hom::scalar(cfg.group, scalars[r][c]));
                    } else if (cell.is_array()) {
                        Mat M;
                        for (const auto& mrow : cell) {
                            Vec v;
                            for (const auto& e : mrow) v.push_back(e.get<i64>());
                            M.push_back(v);
                        }
                        row.push_back(Hom(cfg.group, cfg.group, M));
                    } else {
                        detail::issue(issues, cpath, "expected an integer or a matrix");
                        return out;
                    }
                } catch (const std::exception& e) {
                    detail::issue(issues, cpath, e.what());
                    return out;
                }
            }
            cfg.alphas.push_back(std::move(row));
        }
        if (all_scalar) cfg.scalar_grid = scalars;
    } else if (j.contains("alphas")) {
        detail::issue(issues, "/alphas", "expected a non-empty array of rows");
    }

    if (!cfg.alphas.empty()) {
        if (j.contains("m") &&
            detail::read_int(j["m"], "/m", static_cast<i64>(cfg.m), 1, 64, issues) !=
                static_cast<i64>(cfg.m))
            detail::issue(issues, "/m", "does not match the alphas grid");
        if (j.contains("n") &&
            detail::read_int(j["n"], "/n", static_cast<i64>(cfg.n), 1, 64, issues) !=
                static_cast<i64>(cfg.n))
            detail::issue(issues, "/n", "does not match the alphas grid");
    } else {
        // table-driven uses (e.g. membership tests on explicit joints) may
        // give the arity without a coefficient grid
        if (j.contains("m"))
            cfg.m = static_cast<std::size_t>(detail::read_int(j["m"], "/m", 2, 1, 64, issues));
        if (j.contains("n"))
            cfg.n = static_cast<std::size_t>(detail::read_int(j["n"], "/n", 2, 1, 64, issues));
    }

    json js = detail::at_or_null(j, "seeds");
    if (!js.is_null() && !js.is_object())
        detail::issue(issues, "/seeds", "expected an object");
    cfg.master_seed = static_cast<std::uint64_t>(detail::read_int(
        detail::at_or_null(js, "master"), "/seeds/master", 42, 0, INT64_MAX, issues));
    cfg.restarts = detail::read_int(detail::at_or_null(js, "restarts"), "/seeds/restarts", 10000,
                                    0, 100000000, issues);

    json jt = detail::at_or_null(j, "tolerances");
    if (!jt.is_null() && !jt.is_object())
        detail::issue(issues, "/tolerances", "expected an object");
    cfg.tol.membership = detail::read_number(detail::at_or_null(jt, "membership"),
                                             "/tolerances/membership", 1e-9, 1e-15, 1, issues);
    cfg.tol.degeneracy = detail::read_number(detail::at_or_null(jt, "degeneracy"),
                                             "/tolerances/degeneracy", 1e-9, 1e-15, 1, issues);
    cfg.tol.assert_distance =
        detail::read_number(detail::at_or_null(jt, "assert_distance"),
                            "/tolerances/assert_distance", 1e-3, 1e-15, 1, issues);

    json jsr = detail::at_or_null(j, "search");
    if (!jsr.is_null() && !jsr.is_object())
        detail::issue(issues, "/search", "expected an object");
    cfg.search.max_iterations = detail::read_int(detail::at_or_null(jsr, "max_iterations"),
                                                 "/search/max_iterations", 2000, 0, 100000000,
                                                 issues);
    cfg.search.step_init = detail::read_number(detail::at_or_null(jsr, "step_init"),
                                               "/search/step_init", 0.25, 1e-12, 1.0, issues);
    cfg.search.step_decay = detail::read_number(detail::at_or_null(jsr, "step_decay"),
                                                "/search/step_decay", 0.5, 1e-6, 0.999999, issues);
    cfg.search.min_step = detail::read_number(detail::at_or_null(jsr, "min_step"),
                                              "/search/min_step", 1e-12, 0.0, 1.0, issues);
    cfg.search.stop_objective =
        detail::read_number(detail::at_or_null(jsr, "stop_objective"), "/search/stop_objective",
                            1e-13, 0.0, 1.0, issues);
    cfg.search.degenerate_fraction =
        detail::read_number(detail::at_or_null(jsr, "degenerate_fraction"),
                            "/search/degenerate_fraction", 0.01, 0.0, 1.0, issues);
    cfg.search.floor_lambda = detail::read_number(detail::at_or_null(jsr, "floor_lambda"),
                                                  "/search/floor_lambda", 0.6, 0.500001,
                                                  0.999999, issues);

    if (j.contains("marginals")) {
        if (!j["marginals"].is_array()) {
            detail::issue(issues, "/marginals", "expected an array of probability tables");
        } else {
            for (std::size_t i = 0; i < j["marginals"].size(); ++i) {
                const auto& t = j["marginals"][i];
                const std::string mpath = "/marginals/" + std::to_string(i);
                std::vector<double> probs;
                // bare table, or the standalone form {"group":...,"probs":[...]}
                const json* table = &t;
                if (t.is_object()) {
                    if (t.contains("group")) {
                        auto g = detail::read_group(t["group"], mpath + "/group", issues);
                        if (g && !g->same_moduli(cfg.group))
                            detail::issue(issues, mpath + "/group",
                                          "marginal group must match the config group");
                    }
                    if (!t.contains("probs") || !t["probs"].is_array()) {
                        detail::issue(issues, mpath + "/probs", "expected a probability table");
                        continue;
                    }
                    table = &t["probs"];
                } else if (!t.is_array()) {
                    detail::issue(issues, mpath, "expected a probability table");
                    continue;
                }
                for (const auto& v : *table) probs.push_back(v.is_number() ? v.get<double>() : -1.0);
                out.marginals.push_back(std::move(probs));
            }
        }
    }
    if (j.contains("k"))
        out.k = static_cast<int>(detail::read_int(j["k"], "/k", 1, 1, 64, issues));
    return out;
}

// ---------------------------------------------------------------------------
// deterministic writers: every float rendered with 17 significant digits

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class JsonWriter {
  public:
    std::string str() && { return std::move(out_); }
    void raw(const std::string& s) { out_ += s; }
    void key(const std::string& k) {
        comma();
        out_ += '"' + k + "\":";
        pending_ = false;
    }
    void begin_obj() {
        comma();
        out_ += '{';
        stack_.push_back(false);
    }
    void end_obj() {
        out_ += '}';
        stack_.pop_back();
        mark();
    }
    void begin_arr() {
        comma();
        out_ += '[';
        stack_.push_back(false);
    }
    void end_arr() {
        out_ += ']';
        stack_.pop_back();
        mark();
    }
    void value(const std::string& s) {
        comma();
        out_ += '"';
        for (char c : s) {
            switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out_ += buf;
                } else
                    out_ += c;
            }
        }
        out_ += '"';
        mark();
    }
    void value(double v) {
        comma();
        out_ += fmt_double(v);
        mark();
    }
    void value(i64 v) {
        comma();
        out_ += std::to_string(v);
        mark();
    }
    void value(std::uint64_t v) {
        comma();
        out_ += std::to_string(v);
        mark();
    }
    void value(bool b) {
        comma();
        out_ += b ? "true" : "false";
        mark();
    }
    void null() {
        comma();
        out_ += "null";
        mark();
    }

  private:
    void comma() {
        if (!stack_.empty() && stack_.back() && out_.back() != ':') out_ += ',';
        pending_ = false;
    }
    void mark() {
        if (!stack_.empty()) stack_.back() = true;
    }
    std::string out_;
    std::vector<bool> stack_;
    bool pending_ = false;
};

inline void write_int_vec(JsonWriter& w, const Vec& v) {
    w.begin_arr();
    for (i64 x : v) w.value(x);
    w.end_arr();
}

/// Normalized config as canonical JSON (alphabetical keys, defaults filled).
/// validate(emit(validate(c))) is a fixed point.
inline void write_config(JsonWriter& w, const ExperimentConfig& cfg) {
    w.begin_obj();
    w.key("alphas");
    w.begin_arr();
    if (cfg.scalar_grid) {
        for (const Vec& row : *cfg.scalar_grid) {
            w.begin_arr();
            for (i64 v : row) w.value(v);
            w.end_arr();
        }
    } else {
        for (const auto& row : cfg.alphas) {
            w.begin_arr();
            for (const Hom& h : row) {
                w.begin_arr();
                for (const Vec& mrow : h.matrix()) write_int_vec(w, mrow);
                w.end_arr();
            }
            w.end_arr();
        }
    }
    w.end_arr();
    w.key("group");
    w.begin_obj();
    w.key("moduli");
    write_int_vec(w, cfg.group.moduli());
    w.end_obj();
    w.key("m");
    w.value(static_cast<i64>(cfg.m));
    w.key("mode");
    w.value(std::string(mode_name(cfg.mode)));
    w.key("n");
    w.value(static_cast<i64>(cfg.n));
    w.key("search");
    w.begin_obj();
    w.key("degenerate_fraction");
    w.value(cfg.search.degenerate_fraction);
    w.key("floor_lambda");
    w.value(cfg.search.floor_lambda);
    w.key("max_iterations");
    w.value(cfg.search.max_iterations);
    w.key("min_step");
    w.value(cfg.search.min_step);
    w.key("step_decay");
    w.value(cfg.search.step_decay);
    w.key("step_init");
    w.value(cfg.search.step_init);
    w.key("stop_objective");
    w.value(cfg.search.stop_objective);
    w.end_obj();
    w.key("seeds");
    w.begin_obj();
    w.key("master");
    w.value(cfg.master_seed);
    w.key("restarts");
    w.value(cfg.restarts);
    w.end_obj();
    w.key("tolerances");
    w.begin_obj();
    w.key("assert_distance");
    w.value(cfg.tol.assert_distance);
    w.key("degeneracy");
    w.value(cfg.tol.degeneracy);
    w.key("membership");
    w.value(cfg.tol.membership);
    w.end_obj();
    w.end_obj();
}

inline std::string emit_config(const ExperimentConfig& cfg) {
    JsonWriter w;
    write_config(w, cfg);
    return std::move(w).str();
}

inline void write_condition(JsonWriter& w, const std::optional<ConditionResult>& c) {
    if (!c) {
        w.null();
        return;
    }
    w.begin_obj();
    w.key("holds");
    w.value(c->holds);
    w.key("pair");
    if (c->pair) {
        w.begin_arr();
        w.value(static_cast<i64>(c->pair->first));
        w.value(static_cast<i64>(c->pair->second));
        w.end_arr();
    } else
        w.null();
    w.key("witness");
    if (c->witness)
        write_int_vec(w, *c->witness);
    else
        w.null();
    w.end_obj();
}

inline void write_certificate(JsonWriter& w, const EliminationCertificate& cert) {
    w.begin_obj();
    w.key("degree");
    w.value(static_cast<i64>(cert.final_degree));
    w.key("residual");
    w.value(cert.residual);
    w.key("shifts");
    w.begin_arr();
    for (const ShiftRecord& s : cert.shifts) {
        w.begin_obj();
        w.key("h");
        write_int_vec(w, s.tuple);
        w.key("i");
        w.value(static_cast<i64>(s.eliminated));
        w.key("probe");
        write_int_vec(w, s.probe);
        w.end_obj();
    }
    w.end_arr();
    w.key("target");
    w.value(static_cast<i64>(cert.target));
    w.end_obj();
}

/// Full report as deterministic JSON. Identical runs produce byte-identical
/// output except for the wall_clock_seconds field.
inline std::string report_to_json(const Report& rep) {
    JsonWriter w;
    w.begin_obj();
    w.key("candidates");
    w.begin_arr();
    for (i64 c : rep.candidates) w.value(c);
    w.end_arr();
    w.key("condition11");
    write_condition(w, rep.condition11);
    w.key("condition12");
    write_condition(w, rep.condition12);
    w.key("config");
    write_config(w, rep.config);
    w.key("error");
    if (rep.error_code.empty())
        w.null();
    else {
        w.begin_obj();
        w.key("code");
        w.value(rep.error_code);
        w.key("message");
        w.value(rep.error_message);
        w.end_obj();
    }
    w.key("mode");
    w.value(std::string(mode_name(rep.config.mode)));
    w.key("note");
    w.value(rep.note);
    w.key("records");
    w.begin_arr();
    for (const RestartRecord& r : rep.records) {
        w.begin_obj();
        w.key("assertion_ok");
        w.value(r.assertion_ok);
        w.key("certificates");
        if (r.certificates.empty())
            w.null();
        else {
            w.begin_arr();
            for (const auto& cert : r.certificates) write_certificate(w, cert);
            w.end_arr();
        }
        w.key("degeneracy_distance");
        w.begin_arr();
        for (double d : r.degeneracy_distance) w.value(d);
        w.end_arr();
        w.key("final_residual");
        w.value(r.final_residual);
        w.key("forced_degenerate");
        w.value(r.forced_degenerate);
        w.key("iterations");
        w.value(r.iterations);
        w.key("member_found");
        w.value(r.member_found);
        w.key("member_marginals");
        if (r.member_marginals.empty())
            w.null();
        else {
            w.begin_arr();
            for (const auto& p : r.member_marginals) {
                w.begin_arr();
                for (double v : p) w.value(v);
                w.end_arr();
            }
            w.end_arr();
        }
        w.key("note");
        w.value(r.note);
        w.key("pipeline_ok");
        w.value(r.pipeline_ok);
        w.key("q_residual");
        if (r.q_residual < 0)
            w.null();
        else
            w.value(r.q_residual);
        w.key("restart");
        w.value(r.index);
        w.key("seed");
        w.value(r.seed);
        w.key("start_member");
        w.value(r.start_member);
        w.key("start_residual");
        w.value(r.start_residual);
        w.end_obj();
    }
    w.end_arr();
    w.key("reduction");
    if (!rep.reduction)
        w.null();
    else {
        w.begin_obj();
        w.key("classes");
        w.begin_arr();
        for (const auto& cls : rep.reduction->classes) {
            w.begin_arr();
            for (std::size_t i : cls) w.value(static_cast<i64>(i));
            w.end_arr();
        }
        w.end_arr();
        w.key("reduced_alphas");
        w.begin_arr();
        for (const Vec& row : rep.reduction->reduced_grid) write_int_vec(w, row);
        w.end_arr();
        w.key("representatives");
        w.begin_arr();
        for (std::size_t i : rep.reduction->representatives) w.value(static_cast<i64>(i));
        w.end_arr();
        w.key("scalars");
        w.begin_arr();
        for (const Rat& c : rep.reduction->scalars) w.value(c.str());
        w.end_arr();
        w.end_obj();
    }
    // aggregate summary, derived from the records
    i64 members = 0, failures = 0;
    double min_final = std::numeric_limits<double>::infinity();
    for (const RestartRecord& r : rep.records) {
        if (r.member_found) ++members;
        if (!r.assertion_ok) ++failures;
        min_final = std::min(min_final, r.final_residual);
    }
    w.key("summary");
    w.begin_obj();
    w.key("assertion_failures");
    w.value(failures);
    w.key("members_found");
    w.value(members);
    w.key("min_final_residual");
    if (rep.records.empty())
        w.null();
    else
        w.value(min_final);
    w.key("restarts");
    w.value(static_cast<i64>(rep.records.size()));
    w.end_obj();
    w.key("verdict");
    w.value(rep.verdict);
    w.key("wall_clock_seconds");
    w.value(rep.wall_clock_seconds);
    w.end_obj();
    return std::move(w).str();
}

/// CSV summary: restart index, final residual, worst marginal distance.
inline std::string report_to_csv(const Report& rep) {
    std::string out = "restart,residual,min_distance_to_degeneracy\n";
    for (const RestartRecord& r : rep.records) {
        double dist = 0;
        for (double d : r.degeneracy_distance) dist = std::max(dist, d);
        out += std::to_string(r.index) + "," + fmt_double(r.final_residual) + "," +
               fmt_double(dist) + "\n";
    }
    return out;
}

/// Characteristic-function table as CSV: one row per dual element,
/// coordinates then real and imaginary parts.
inline std::string char_table_to_csv(const Group& Y, const std::vector<cplx>& values) {
    std::string out;
    for (std::size_t j = 0; j < Y.rank(); ++j) out += "y" + std::to_string(j + 1) + ",";
    out += "re,im\n";
    for (i64 i = 0; i < Y.order(); ++i) {
        Elem y = Y.element_at(i);
        for (i64 c : y) out += std::to_string(c) + ",";
        out += fmt_double(values[static_cast<std::size_t>(i)].real()) + "," +
               fmt_double(values[static_cast<std::size_t>(i)].imag()) + "\n";
    }
    return out;
}

/// Inverse of char_table_to_csv: rows are "coords..., re, im" over the full
/// group, header optional, any order.
inline std::vector<cplx> char_table_from_csv(const Group& Y, const std::string& text) {
    std::vector<cplx> vals(static_cast<std::size_t>(Y.order()), cplx(0, 0));
    std::vector<bool> seen(vals.size(), false);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (!cells.empty() && (cells[0] == "y1" || cells[0] == "re")) continue; // header
        require(cells.size() == Y.rank() + 2, errc::invalid_argument,
                "table row needs one cell per coordinate plus re,im");
        Elem y(Y.rank());
        try {
            for (std::size_t j = 0; j < Y.rank(); ++j) y[j] = std::stoll(cells[j]);
            cplx v(std::stod(cells[Y.rank()]), std::stod(cells[Y.rank() + 1]));
            i64 idx = Y.index_of(Y.reduce(y));
            vals[static_cast<std::size_t>(idx)] = v;
            seen[static_cast<std::size_t>(idx)] = true;
        } catch (const std::exception&) {
            fail(errc::invalid_argument, "malformed table row: " + line);
        }
    }
    for (bool b : seen)
        require(b, errc::invalid_argument, "table does not cover the full group");
    return vals;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::malformed_config, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace io
} // namespace charlab
