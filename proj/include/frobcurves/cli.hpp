#ifndef FROBCURVES_CLI_HPP
#define FROBCURVES_CLI_HPP

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"

namespace frobcurves {

inline const char* kToolVersion = "1.0.0";

namespace detail {

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("SchemaError", "cannot open input file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("SchemaError", std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

inline void render_table(const json& j, std::ostream& os, const std::string& prefix = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (v.is_object()) {
            render_table(v, os, key);
        } else {
            os << key << ": " << v.dump() << "\n";
        }
    }
}

} // namespace detail

// Parses and runs one command line; writes the run manifest (or error
// document) to `out` and returns the process exit code: 0 success, 2 refused
// input or hypothesis, 1 internal assertion failure.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"curve family classifier and point counter"};
    app.set_help_flag("--help", "print usage"); // frees -h; the lift verbs take --h
    app.fallthrough();                          // global flags may follow the verb
    app.require_subcommand(1);

    std::string input_path;
    bool table = false;
    int threads = 1;
    int64_t budget = 100000000;
    int max_ext = 6;
    app.add_flag("--table", table, "render a key/value table instead of JSON");
    app.add_option("--threads", threads,
                   "worker threads for enumeration (FROBCURVES_THREADS overrides)");

    auto* classify_cmd = app.add_subcommand("classify", "classification report for a curve");
    classify_cmd->add_option("input", input_path, "curve document")->required();
    classify_cmd->add_option("--max-ext", max_ext, "extension search bound for smoothness");

    bool verify = false;
    int ext_r = 1;
    auto* count_cmd = app.add_subcommand("count", "rational point count");
    count_cmd->add_option("input", input_path, "curve document")->required();
    count_cmd->add_flag("--verify", verify, "run formula and brute force, assert equality");
    count_cmd->add_option("-r,--ext", ext_r, "count over F_{q^r}");
    count_cmd->add_option("--budget", budget, "candidate point budget");

    int64_t bd = 0, bq = 0;
    int bs = 0;
    auto* bounds_cmd = app.add_subcommand("bounds", "bound calculators");
    bounds_cmd->add_option("--d", bd, "curve degree")->required();
    bounds_cmd->add_option("--q", bq, "field size")->required();
    bounds_cmd->add_option("--s", bs, "linear system degree");

    int lift_h = 0;
    auto* lift_cmd = app.add_subcommand("lift", "lift a degree-s curve to the extension tower");
    lift_cmd->add_option("input", input_path, "form document over the subfield")->required();
    lift_cmd->add_option("--h", lift_h, "target extension degree over the prime field")->required();

    auto* cert_cmd = app.add_subcommand("certify-maximal", "line-bound maximality certification");
    cert_cmd->add_option("input", input_path, "form document over the subfield")->required();
    cert_cmd->add_option("--h", lift_h, "target extension degree over the prime field")->required();

    auto* quartic_cmd = app.add_subcommand("quartic", "special quartic diagnostics");
    quartic_cmd->add_option("input", input_path, "quartic document")->required();

    std::string system = "d2", mode = "symbolic";
    int64_t oracle_budget = -1;
    auto* oracle_cmd = app.add_subcommand("oracle", "Frobenius determinant oracle");
    oracle_cmd->add_option("input", input_path, "curve document")->required();
    oracle_cmd->add_option("--system", system, "d1 or d2")->check(CLI::IsMember({"d1", "d2"}));
    oracle_cmd->add_option("--mode", mode, "symbolic or sample")
        ->check(CLI::IsMember({"symbolic", "sample"}));
    oracle_cmd->add_option("--budget", oracle_budget, "sample budget (default: derived)");

    std::vector<std::string> argv_copy = args;
    std::vector<char*> argv;
    std::string prog = "frobcurves";
    argv.push_back(prog.data());
    for (auto& a : argv_copy) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help() << "\n";
            return 0;
        }
        json err;
        err["error"] = {{"code", "SchemaError"}, {"message", e.what()}};
        out << err.dump(2) << "\n";
        return 2;
    }

    if (const char* env = std::getenv("FROBCURVES_THREADS"))
        threads = std::max(1, std::atoi(env));

    json manifest;
    manifest["tool"] = "frobcurves";
    manifest["version"] = kToolVersion;
    json cmd_echo;
    json result;
    json field_doc = nullptr;
    auto t0 = std::chrono::steady_clock::now();

    try {
        if (app.got_subcommand(classify_cmd)) {
            cmd_echo["verb"] = "classify";
            cmd_echo["input"] = input_path;
            auto curve = curve_from_json(detail::load_json_file(input_path));
            field_doc = field_to_json(curve.field);
            result = classification_to_json(classify_curve(curve, max_ext));
        } else if (app.got_subcommand(count_cmd)) {
            cmd_echo["verb"] = "count";
            cmd_echo["input"] = input_path;
            cmd_echo["options"] = {{"verify", verify}, {"r", ext_r}, {"budget", budget},
                                   {"threads", threads}};
            auto curve = curve_from_json(detail::load_json_file(input_path));
            field_doc = field_to_json(curve.field);

            std::optional<CountReport> formula;
            if (ext_r == 1 && curve.s == 2) {
                // try the closed counts behind their own certification; only
                // refused hypotheses fall through to brute force
                auto try_formula = [&](auto&& fn) {
                    for (int v = 1; v < curve.field.h() && !formula; ++v) {
                        if (curve.field.h() % v != 0) continue;
                        try {
                            formula = fn(v);
                        } catch (const Error& e) {
                            if (e.err_class() == ErrClass::internal) throw;
                        }
                    }
                };
                try_formula([&](int v) { return count_formula_case1(curve, v); });
                if (!formula) try_formula([&](int v) { return count_formula_case2(curve, v); });
            }
            if (verify || !formula) {
                auto tb = std::chrono::steady_clock::now();
                int64_t N = count_bruteforce(curve, ext_r, budget, threads);
                CountReport brute;
                brute.N = N;
                brute.method = CountMethod::BruteForce;
                brute.bound_set = bounds(curve.degree(), curve.field.q(),
                                         curve.s == 2 ? std::optional<int>(2) : std::nullopt);
                brute.exceeds_sv_conic = curve.s == 2 && N > brute.bound_set.sv_conic;
                brute.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                       std::chrono::steady_clock::now() - tb)
                                       .count();
                if (formula) {
                    internal_check(formula->N == brute.N,
                                   "formula and brute-force counts disagree");
                    result = count_report_to_json(*formula);
                    result["verified_against_brute_force"] = true;
                } else {
                    result = count_report_to_json(brute);
                    if (verify) result["verified_against_brute_force"] = true;
                }
            } else {
                result = count_report_to_json(*formula);
            }
        } else if (app.got_subcommand(bounds_cmd)) {
            cmd_echo["verb"] = "bounds";
            cmd_echo["options"] = {{"d", bd}, {"q", bq}};
            if (bs > 0) cmd_echo["options"]["s"] = bs;
            result = bounds_to_json(bounds(bd, bq, bs > 0 ? std::optional<int>(bs) : std::nullopt));
        } else if (app.got_subcommand(lift_cmd)) {
            cmd_echo["verb"] = "lift";
            cmd_echo["input"] = input_path;
            cmd_echo["options"] = {{"h", lift_h}};
            auto doc = form_doc_from_json(detail::load_json_file(input_path));
            auto lifted = lift_conic(doc.field, doc.form, lift_h);
            field_doc = field_to_json(lifted.field);
            result = curve_to_json(lifted);
        } else if (app.got_subcommand(cert_cmd)) {
            cmd_echo["verb"] = "certify-maximal";
            cmd_echo["input"] = input_path;
            cmd_echo["options"] = {{"h", lift_h}};
            auto doc = form_doc_from_json(detail::load_json_file(input_path));
            field_doc = field_to_json(doc.field);
            result = maximal_cert_to_json(certify_maximal(doc.field, doc.form, lift_h));
        } else if (app.got_subcommand(quartic_cmd)) {
            cmd_echo["verb"] = "quartic";
            cmd_echo["input"] = input_path;
            auto doc = quartic_from_json(detail::load_json_file(input_path));
            field_doc = field_to_json(doc.field);
            if (doc.sym) {
                result["family"] = "sym";
                result["coeffs"] = {{"a", elem_to_json(doc.sym->a)}, {"b", elem_to_json(doc.sym->b)},
                                    {"c", elem_to_json(doc.sym->c)}, {"d", elem_to_json(doc.sym->d)},
                                    {"e", elem_to_json(doc.sym->e)}, {"f", elem_to_json(doc.sym->f)}};
                result["reducible"] = !cremona_irreducible(*doc.sym);
                result["factors"] = nullptr;
                result["collinear"] = nullptr;
            } else {
                const auto& qd = *doc.bde;
                result["family"] = "bde";
                result["coeffs"] = {{"b", elem_to_json(qd.b)},
                                    {"d", elem_to_json(qd.d)},
                                    {"e", elem_to_json(qd.e)}};
                bool red = bde_reducible(qd);
                result["reducible"] = red;
                result["factors"] = nullptr;
                if (auto sqroot = bde_two_zero_square(qd)) {
                    json factors = json::array();
                    factors.push_back(triform_to_json(*sqroot));
                    factors.push_back(triform_to_json(*sqroot));
                    result["factors"] = factors;
                } else if (red) {
                    auto fac = bde_verify_factorization(qd);
                    if (fac) {
                        auto ext_form_to_json = [&](const TriForm<ExtField<FieldSpec>>& f) {
                            json terms = json::array();
                            for (const auto& [e, c] : f.terms) {
                                json t;
                                t["i"] = e[0];
                                t["j"] = e[1];
                                t["t"] = e[2];
                                json coords = json::array();
                                for (const auto& b : c) coords.push_back(elem_to_json(b));
                                t["c"] = coords;
                                terms.push_back(t);
                            }
                            json jf;
                            jf["degree"] = f.degree;
                            jf["ext_degree"] = 2;
                            jf["terms"] = terms;
                            return jf;
                        };
                        json factors = json::array();
                        factors.push_back(ext_form_to_json(fac->factor_a));
                        factors.push_back(ext_form_to_json(fac->factor_b));
                        result["factors"] = factors;
                    }
                }
                result["collinear"] = bde_collinear_diagnostic(qd);
            }
        } else if (app.got_subcommand(oracle_cmd)) {
            cmd_echo["verb"] = "oracle";
            cmd_echo["input"] = input_path;
            cmd_echo["options"] = {{"system", system}, {"mode", mode}};
            auto curve = curve_from_json(detail::load_json_file(input_path));
            field_doc = field_to_json(curve.field);
            auto sys = system == "d1" ? LinearSystem::D1 : LinearSystem::D2;
            auto md = mode == "symbolic" ? OracleMode::SymbolicModCurve : OracleMode::PointSampling;
            if (md == OracleMode::PointSampling && oracle_budget < 0) {
                // default budget: the certification threshold for this curve
                int64_t q = curve.field.q(), n = curve.n;
                oracle_budget = (sys == LinearSystem::D1 ? (q + 8 * n) : (2 * q + 48 * n)) *
                                    (2 * n) + 1;
            }
            cmd_echo["options"]["budget"] = oracle_budget;
            result = oracle_to_json(wronskian_frobenius_oracle(curve, sys, md, oracle_budget));
        }
    } catch (const Error& e) {
        json err;
        err["error"] = {{"code", e.code()}, {"message", e.what()}};
        if (const auto* av = dynamic_cast<const AssumptionViolated*>(&e))
            err["error"]["violations"] = av->violations();
        out << err.dump(2) << "\n";
        return e.err_class() == ErrClass::internal ? 1 : 2;
    }

    manifest["command"] = cmd_echo;
    manifest["field"] = field_doc;
    manifest["result"] = result;
    manifest["runtime_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
    if (table) detail::render_table(manifest, out);
    else out << manifest.dump(2) << "\n";
    return 0;
}

} // namespace frobcurves

#endif
