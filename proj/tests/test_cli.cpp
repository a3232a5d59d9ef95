#include <doctest.h>

#include <regex>
#include <sstream>

#include <frobcurves/cli.hpp>
#include <frobcurves/io.hpp>

#include "grid_common.hpp"

using namespace frobcurves;

namespace {

std::pair<int, json> run(const std::vector<std::string>& args) {
    std::ostringstream out;
    int code = run_cli(args, out);
    json j = json::parse(out.str());
    return {code, j};
}

std::string data_path(const std::string& name) { return std::string(FROB_DATA_DIR) + "/" + name; }

json strip_timing(json j) {
    j.erase("runtime_ms");
    if (j.contains("result") && j["result"].is_object()) j["result"].erase("runtime_ms");
    return j;
}

} // namespace

TEST_CASE("classify: the first worked example names rule 4.5(1) with v = 1") {
    auto [code, j] = run({"classify", data_path("curve-88-over-43sq.json")});
    CHECK(code == 0);
    CHECK(j["result"]["d2_frobenius"]["status"] == "frobenius_nonclassical");
    CHECK(j["result"]["d2_frobenius"]["theorem"] == "4.5(1)");
    CHECK(j["result"]["d2_frobenius"]["v"] == 1);
    CHECK(j["result"]["smooth"]["status"] == "smooth");
    CHECK(j["field"]["p"] == 43);
}

TEST_CASE("count --verify: the second worked example agrees across both routes") {
    auto [code, j] = run({"count", data_path("curve-20-over-19sq.json"), "--verify"});
    CHECK(code == 0);
    CHECK(j["result"]["N"] == 3640);
    CHECK(j["result"]["method"] == "formula_5_3");
    CHECK(j["result"]["verified_against_brute_force"] == true);
    CHECK(j["result"]["eta"] == 0);
    CHECK(j["result"]["exceeds_sv_conic"] == true);
}

TEST_CASE("bounds verb") {
    auto [code, j] = run({"bounds", "--d", "88", "--q", "1849", "--s", "2"});
    CHECK(code == 0);
    CHECK(j["result"]["sv_conic"] == 80220);
    CHECK(j["result"]["sv_line"] == 85184);
}

TEST_CASE("lift and certify-maximal on the sample conic") {
    auto [code, j] = run({"lift", data_path("conic-f11.json"), "--h", "2"});
    CHECK(code == 0);
    CHECK(j["result"]["n"] == 12);
    CHECK(j["result"]["s"] == 2);
    CHECK(j["result"]["field"]["p"] == 11);
    CHECK(j["result"]["field"]["h"] == 2);
    // lifted document round-trips through the curve schema
    auto lifted = curve_from_json(j["result"]);
    CHECK(lifted.degree() == 24);

    auto [code2, j2] = run({"certify-maximal", data_path("conic-f11.json"), "--h", "2"});
    CHECK(code2 == 0);
    CHECK(j2["result"]["attains_sv_line"] == true);
    CHECK(j2["result"]["N"] == 1728);
    CHECK(j2["result"]["subfield_count"] == 12);
}

TEST_CASE("quartic verb emits the diagnostic document") {
    auto [code, j] = run({"quartic", data_path("quartic-bde-f11.json")});
    CHECK(code == 0);
    CHECK(j["result"]["family"] == "bde");
    CHECK(j["result"]["reducible"] == true);
    CHECK(j["result"]["factors"].is_array());
    CHECK(j["result"]["collinear"].is_boolean());
}

TEST_CASE("oracle verb: symbolic zero on the second worked example") {
    auto [code, j] = run({"oracle", data_path("curve-20-over-19sq.json"), "--system", "d2",
                          "--mode", "symbolic"});
    CHECK(code == 0);
    CHECK(j["result"]["identically_zero"] == true);
    CHECK(j["result"]["mode"] == "symbolic");
}

TEST_CASE("schema errors and refused hypotheses exit with code 2") {
    // malformed document
    std::ostringstream out;
    int code = run_cli({"classify", "/nonexistent/file.json"}, out);
    CHECK(code == 2);
    auto err = json::parse(out.str());
    CHECK(err["error"]["code"] == "SchemaError");

    // p = 7 violates the conic hypotheses: refusal names the hypothesis code
    auto f7 = field_create(7, 2);
    std::map<std::pair<int, int>, FqElement> m;
    m[{2, 0}] = f7.from_int(1);
    m[{1, 1}] = f7.from_int(1);
    m[{0, 2}] = f7.from_int(1);
    m[{0, 0}] = f7.from_int(1);
    auto bad = make_curve(f7, 2, 8, std::move(m));
    auto doc = curve_to_json(bad);
    std::string path = std::string(FROB_DATA_DIR) + "/tmp-p7-curve.json";
    {
        std::ofstream o(path);
        o << doc.dump();
    }
    std::ostringstream out2;
    int code2 = run_cli({"classify", path}, out2);
    // classify_curve collects violations into the report rather than failing
    CHECK(code2 == 0);
    auto rep = json::parse(out2.str());
    bool found = false;
    for (const auto& v : rep["result"]["assumption_violations"])
        if (v.get<std::string>().find("4.iv") != std::string::npos) found = true;
    CHECK(found);
    CHECK(rep["result"]["d2_frobenius"].is_null());
    std::remove(path.c_str());
}

TEST_CASE("determinism: identical runs produce identical manifests") {
    auto [c1, j1] = run({"classify", data_path("curve-20-over-19sq.json")});
    auto [c2, j2] = run({"classify", data_path("curve-20-over-19sq.json")});
    CHECK(c1 == 0);
    CHECK(strip_timing(j1) == strip_timing(j2));

    auto [c3, j3] = run({"count", data_path("curve-20-over-19sq.json")});
    auto [c4, j4] = run({"count", data_path("curve-20-over-19sq.json")});
    CHECK(c3 == 0);
    CHECK(strip_timing(j3) == strip_timing(j4));
}

TEST_CASE("document round trips") {
    auto c1 = testutil::example_curve_1();
    auto j = curve_to_json(c1);
    auto back = curve_from_json(j);
    CHECK(back.n == c1.n);
    CHECK(back.s == c1.s);
    CHECK(back.field.same_field(c1.field));
    for (const auto& [ij, v] : c1.coeffs) CHECK(back.field.eq(back.coeff(ij.first, ij.second), v));

    auto f = field_create(13, 2);
    auto jf = field_to_json(f);
    CHECK(field_from_json(jf).same_field(f));

    // modulus is serialized constant-term first
    CHECK(jf["modulus"].size() == 3);
    CHECK(jf["modulus"][2] == 1);
}

TEST_CASE("quartic sym family and the sampling oracle") {
    // sym document through a temp file
    json doc;
    doc["family"] = "sym";
    doc["field"] = {{"p", 11}, {"h", 1}};
    doc["coeffs"] = {{"a", 1}, {"b", 1}, {"c", 1}, {"d", 0}, {"e", 0}, {"f", 0}};
    std::string path = std::string(FROB_DATA_DIR) + "/tmp-sym-quartic.json";
    {
        std::ofstream o(path);
        o << doc.dump();
    }
    auto [code, j] = run({"quartic", path});
    CHECK(code == 0);
    CHECK(j["result"]["family"] == "sym");
    CHECK(j["result"]["reducible"] == false);
    std::remove(path.c_str());

    // sampling oracle with a small explicit budget: heuristic zero
    auto f = field_create(11, 2);
    std::map<std::pair<int, int>, FqElement> m;
    m[{2, 0}] = f.from_int(1);
    m[{1, 1}] = f.from_int(1);
    m[{0, 2}] = f.from_int(2);
    m[{0, 0}] = f.from_int(1);
    auto curve = make_curve(f, 2, 6, std::move(m));
    std::string cpath = std::string(FROB_DATA_DIR) + "/tmp-n6-curve.json";
    {
        std::ofstream o(cpath);
        o << curve_to_json(curve).dump();
    }
    auto [code2, j2] = run({"oracle", cpath, "--system", "d2", "--mode", "sample",
                            "--budget", "100"});
    CHECK(code2 == 0);
    CHECK(j2["result"]["identically_zero"] == true);
    CHECK(j2["result"]["samples_used"] == 100);
    std::remove(cpath.c_str());
}
