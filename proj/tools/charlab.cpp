// charlab command-line driver: condition checking, D_{m,k} membership
// testing, theorem verification runs, Remark 2 exploration, and the group
// catalog. Batch tool; reports are the interface.

#include <iostream>

#include <CLI11.hpp>

#include "charlab/charlab.hpp"

using namespace charlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;

struct CommonOpts {
    std::string config_path;
    std::string group_literal;
    std::string alphas_json;
    std::string mode;
    std::string out_path;
    std::string format = "json";
    std::int64_t seed = -1;
    std::int64_t restarts = -1;
    double tol = -1;
    int k = -1;
    std::string marginals_json;
    std::string joint_csv;
    std::string char_csv;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--group", o.group_literal, "group literal, e.g. Z2xZ4");
    cmd->add_option("--alphas", o.alphas_json,
                    "inline m x n coefficient grid as JSON (integers or matrices)");
    cmd->add_option("--mode", o.mode, "theorem1 | theorem4 | theorem3 | explore-remark2");
    cmd->add_option("--seed", o.seed, "master seed override");
    cmd->add_option("--restarts", o.restarts, "restart count override");
    cmd->add_option("--tol", o.tol, "membership tolerance override");
    cmd->add_option("--out", o.out_path, "write output to this file instead of stdout");
    cmd->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

[[noreturn]] void config_fail(const std::vector<io::ConfigIssue>& issues) {
    const auto& first = issues.front();
    std::cerr << "config error at " << (first.path.empty() ? "(root)" : first.path) << ": "
              << first.message << "\n";
    std::exit(kExitConfig);
}

/// Merge config file and inline flags; flags win.
io::ParsedConfig assemble(const CommonOpts& o) {
    std::vector<io::ConfigIssue> issues;
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty()) {
        j = io::parse_config_text(io::read_file(o.config_path), issues);
        if (!issues.empty()) config_fail(issues);
    }
    if (!o.group_literal.empty()) j["group"] = o.group_literal;
    if (!o.alphas_json.empty()) {
        std::vector<io::ConfigIssue> sub;
        j["alphas"] = io::parse_config_text(o.alphas_json, sub);
        if (!sub.empty()) config_fail(sub);
        j.erase("m");
        j.erase("n");
    }
    if (!o.mode.empty()) j["mode"] = o.mode;
    if (o.seed >= 0) j["seeds"]["master"] = o.seed;
    if (o.restarts >= 0) j["seeds"]["restarts"] = o.restarts;
    if (o.tol > 0) j["tolerances"]["membership"] = o.tol;
    if (o.k > 0) j["k"] = o.k;
    if (!o.marginals_json.empty()) {
        std::vector<io::ConfigIssue> sub;
        j["marginals"] = io::parse_config_text(o.marginals_json, sub);
        if (!sub.empty()) config_fail(sub);
    }
    io::ParsedConfig parsed = io::config_from_json(j, issues);
    if (!issues.empty()) config_fail(issues);
    return parsed;
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(o.out_path, std::ios::binary);
        out << text << "\n";
    }
}

int cmd_check_conditions(const CommonOpts& o) {
    io::ParsedConfig parsed = assemble(o);
    CoeffSystem cs = parsed.config.coeff_system();
    ConditionResult c11 = check_condition_11(cs); // may throw precondition-violated
    bool autos = true;
    for (std::size_t j = 0; j < cs.m() && autos; ++j)
        for (std::size_t i = 0; i < cs.n(); ++i)
            if (!classify(cs.alpha(j, i)).is_auto) {
                autos = false;
                break;
            }
    std::optional<ConditionResult> c12;
    if (autos) c12 = check_condition_12(cs);

    io::JsonWriter w;
    w.begin_obj();
    w.key("condition11");
    w.value(c11.holds);
    w.key("condition12");
    if (c12)
        w.value(c12->holds);
    else
        w.null();
    if (!c11.holds && c11.witness) {
        w.key("witness11");
        io::write_int_vec(w, *c11.witness);
    }
    if (c12 && !c12->holds && c12->witness) {
        w.key("witness12");
        io::write_int_vec(w, *c12->witness);
    }
    w.end_obj();
    emit(o, std::move(w).str());
    return kExitOk;
}

int cmd_test_dmk(const CommonOpts& o) {
    io::ParsedConfig parsed = assemble(o);
    const ExperimentConfig& cfg = parsed.config;
    int k = parsed.k.value_or(static_cast<int>(cfg.m) - 1);

    std::optional<JointCharFunction> joint;
    if (!o.joint_csv.empty()) {
        // explicit joint table over Y^m, bypassing the coefficient grid
        std::vector<cplx> vals =
            io::char_table_from_csv(cfg.group.power(cfg.m), io::read_file(o.joint_csv));
        joint.emplace(cfg.group, cfg.m, std::move(vals));
    } else {
        if (parsed.marginals.size() != cfg.n) {
            std::cerr << "config error at /marginals: need exactly n=" << cfg.n
                      << " probability tables\n";
            return kExitConfig;
        }
        std::vector<Distribution> ms;
        for (std::size_t i = 0; i < parsed.marginals.size(); ++i) {
            try {
                ms.emplace_back(cfg.group, parsed.marginals[i]);
            } catch (const error& e) {
                std::cerr << "config error at /marginals/" << i << ": " << e.what() << "\n";
                return kExitConfig;
            }
        }
        joint.emplace(joint_of_linear_forms(cfg.coeff_system(), ms));
    }
    if (!o.char_csv.empty()) {
        std::ofstream out(o.char_csv, std::ios::binary);
        out << io::char_table_to_csv(joint->power_group(), joint->values());
    }
    DmkResult r = is_in_Dmk(*joint, k, cfg.tol.membership);

    io::JsonWriter w;
    w.begin_obj();
    w.key("factor_note");
    w.value(r.factor_note);
    w.key("factors");
    if (r.factors.empty())
        w.null();
    else {
        w.begin_arr();
        for (const DmkFactor& f : r.factors) {
            w.begin_obj();
            w.key("coords");
            w.begin_arr();
            for (std::size_t c : f.coords) w.value(static_cast<i64>(c));
            w.end_arr();
            w.key("table_size");
            w.value(static_cast<i64>(f.table.size()));
            w.end_obj();
        }
        w.end_arr();
    }
    w.key("k");
    w.value(static_cast<i64>(k));
    w.key("member");
    w.value(r.member);
    w.key("residual");
    w.value(r.residual);
    w.end_obj();
    emit(o, std::move(w).str());
    return kExitOk;
}

int cmd_verify(const CommonOpts& o, bool explore) {
    io::ParsedConfig parsed = assemble(o);
    if (explore) parsed.config.mode = Mode::explore_remark2;
    Report rep = run_experiment(parsed.config);
    emit(o, o.format == "csv" ? io::report_to_csv(rep) : io::report_to_json(rep));
    if (rep.verdict == "PASS" || rep.verdict == "EXPLORE-COMPLETE") return kExitOk;
    if (rep.verdict == "FAIL") return kExitAssertion;
    return kExitPrecondition;
}

int cmd_catalog(const CommonOpts& o, i64 max_order) {
    auto cat = abelian_group_catalog(max_order);
    if (o.format == "csv") {
        std::string out = "order,literal\n";
        for (const Vec& mods : cat) {
            Group X(mods);
            out += std::to_string(X.order()) + "," + X.literal() + "\n";
        }
        out.pop_back();
        emit(o, out);
    } else {
        io::JsonWriter w;
        w.begin_arr();
        for (const Vec& mods : cat) {
            Group X(mods);
            w.begin_obj();
            w.key("literal");
            w.value(X.literal());
            w.key("moduli");
            io::write_int_vec(w, mods);
            w.key("order");
            w.value(X.order());
            w.end_obj();
        }
        w.end_arr();
        emit(o, std::move(w).str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"charlab: characterization-theorem laboratory on finite abelian groups"};
    app.require_subcommand(1);

    CommonOpts o;
    i64 max_order = 16;

    CLI::App* cc = app.add_subcommand("check-conditions",
                                      "check conditions (11) and (12) for a coefficient system");
    add_common(cc, o);

    CLI::App* dmk = app.add_subcommand("test-dmk", "test D_{m,k} membership of a joint law");
    add_common(dmk, o);
    dmk->add_option("--k", o.k, "membership class index (default m-1)");
    dmk->add_option("--marginals", o.marginals_json, "inline marginals as JSON array of tables");
    dmk->add_option("--joint-csv", o.joint_csv,
                    "read the joint characteristic table from CSV instead of marginals");
    dmk->add_option("--char-csv", o.char_csv, "export the joint characteristic table as CSV");

    CLI::App* ver = app.add_subcommand("verify", "run a theorem verification experiment");
    add_common(ver, o);

    CLI::App* exp = app.add_subcommand("explore", "explore Remark 2 (condition (11) omitted)");
    add_common(exp, o);

    CLI::App* cat = app.add_subcommand("catalog", "list abelian groups up to a given order");
    add_common(cat, o);
    cat->add_option("--max-order", max_order, "largest order to list")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (cc->parsed()) return cmd_check_conditions(o);
        if (dmk->parsed()) return cmd_test_dmk(o);
        if (ver->parsed()) return cmd_verify(o, false);
        if (exp->parsed()) return cmd_verify(o, true);
        if (cat->parsed()) return cmd_catalog(o, max_order);
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        switch (e.code()) {
        case errc::malformed_config: return kExitConfig;
        case errc::precondition_violated:
        case errc::condition11_violated:
        case errc::condition11_holds:
        case errc::not_invertible:
        case errc::ill_defined_homomorphism: return kExitPrecondition;
        default: return kExitAssertion;
        }
    }
    return kExitUsage;
}
