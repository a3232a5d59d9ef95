#ifndef FROBCURVES_IO_HPP
#define FROBCURVES_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "classify.hpp"
#include "count.hpp"
#include "curve.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "quartic.hpp"

namespace frobcurves {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Field and element documents
// ---------------------------------------------------------------------------

inline json field_to_json(const FieldSpec& f) {
    json j;
    j["p"] = f.p();
    j["h"] = f.h();
    j["modulus"] = f.modulus(); // constant term first
    return j;
}

inline FieldSpec field_from_json(const json& j) {
    if (!j.is_object() || !j.contains("p") || !j.contains("h"))
        throw Error("SchemaError", "field document needs integer fields p and h");
    try {
        int64_t p = j.at("p").get<int64_t>();
        int h = j.at("h").get<int>();
        std::optional<std::vector<int64_t>> mod;
        if (j.contains("modulus") && !j.at("modulus").is_null())
            mod = j.at("modulus").get<std::vector<int64_t>>();
        return field_create(p, h, mod);
    } catch (const json::exception& e) {
        throw Error("SchemaError", std::string("malformed field document: ") + e.what());
    }
}

inline json elem_to_json(const FqElement& e) { return json(e.c); }

inline FqElement elem_from_json(const FieldSpec& f, const json& j) {
    try {
        if (j.is_number_integer()) return f.from_int(j.get<int64_t>());
        return f.from_coords(j.get<std::vector<int64_t>>());
    } catch (const json::exception& e) {
        throw Error("SchemaError", std::string("malformed element: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Forms and curves
// ---------------------------------------------------------------------------

inline json triform_to_json(const TriForm<FieldSpec>& f) {
    json terms = json::array();
    for (const auto& [e, c] : f.terms) {
        json t;
        t["i"] = e[0];
        t["j"] = e[1];
        t["t"] = e[2];
        t["c"] = elem_to_json(c);
        terms.push_back(t);
    }
    json j;
    j["degree"] = f.degree;
    j["terms"] = terms;
    return j;
}

inline TriForm<FieldSpec> triform_from_json(const FieldSpec& fld, const json& j) {
    if (!j.is_object() || !j.contains("degree") || !j.contains("terms"))
        throw Error("SchemaError", "form document needs degree and terms");
    TriForm<FieldSpec> f;
    try {
        f.degree = j.at("degree").get<int>();
        for (const auto& t : j.at("terms")) {
            int i = t.at("i").get<int>(), jj = t.at("j").get<int>(), tt = t.at("t").get<int>();
            tf_set(fld, f, i, jj, tt, elem_from_json(fld, t.at("c")));
        }
    } catch (const json::exception& e) {
        throw Error("SchemaError", std::string("malformed form document: ") + e.what());
    }
    tf_validate(fld, f);
    return f;
}

// {"field": {...}, "form": {...}}: a plane form over its own field
struct FormDoc {
    FieldSpec field;
    TriForm<FieldSpec> form;
};

inline FormDoc form_doc_from_json(const json& j) {
    if (!j.is_object() || !j.contains("field") || !j.contains("form"))
        throw Error("SchemaError", "form document needs field and form");
    FormDoc out{field_from_json(j.at("field")), {}};
    out.form = triform_from_json(out.field, j.at("form"));
    return out;
}

inline json curve_to_json(const CurveFamily& c) {
    json coeffs = json::array();
    for (const auto& [ij, v] : c.coeffs) {
        json t;
        t["i"] = ij.first;
        t["j"] = ij.second;
        t["c"] = elem_to_json(v);
        coeffs.push_back(t);
    }
    json j;
    j["field"] = field_to_json(c.field);
    j["s"] = c.s;
    j["n"] = c.n;
    j["coeffs"] = coeffs;
    return j;
}

inline CurveFamily curve_from_json(const json& j) {
    if (!j.is_object() || !j.contains("field") || !j.contains("s") || !j.contains("n") ||
        !j.contains("coeffs"))
        throw Error("SchemaError", "curve document needs field, s, n, coeffs");
    auto field = field_from_json(j.at("field"));
    try {
        int s = j.at("s").get<int>();
        int n = j.at("n").get<int>();
        std::map<std::pair<int, int>, FqElement> coeffs;
        for (const auto& t : j.at("coeffs")) {
            int i = t.at("i").get<int>(), jj = t.at("j").get<int>();
            coeffs[{i, jj}] = elem_from_json(field, t.at("c"));
        }
        return make_curve(field, s, n, std::move(coeffs));
    } catch (const json::exception& e) {
        throw Error("SchemaError", std::string("malformed curve document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Quartic documents
// ---------------------------------------------------------------------------

struct QuarticDoc {
    FieldSpec field;
    std::optional<QuarticSym> sym;
    std::optional<QuarticBDE> bde;
};

inline QuarticDoc quartic_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j.contains("field") || !j.contains("coeffs"))
        throw Error("SchemaError", "quartic document needs family, field, coeffs");
    QuarticDoc out{field_from_json(j.at("field")), std::nullopt, std::nullopt};
    const auto& co = j.at("coeffs");
    try {
        auto get = [&](const char* name) { return elem_from_json(out.field, co.at(name)); };
        std::string fam = j.at("family").get<std::string>();
        if (fam == "sym") {
            out.sym = make_quartic_sym(out.field, get("a"), get("b"), get("c"), get("d"),
                                       get("e"), get("f"));
        } else if (fam == "bde") {
            out.bde = make_quartic_bde(out.field, get("b"), get("d"), get("e"));
        } else {
            throw Error("SchemaError", "quartic family must be sym or bde");
        }
    } catch (const json::exception& e) {
        throw Error("SchemaError", std::string("malformed quartic document: ") + e.what());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json ext_point_to_json(const ExtPoint& p) {
    json j;
    j["ext_degree"] = p.ext_degree;
    auto coords = [&](const std::vector<FqElement>& v) {
        json arr = json::array();
        for (const auto& e : v) arr.push_back(elem_to_json(e));
        return arr;
    };
    j["x"] = coords(p.x);
    j["y"] = coords(p.y);
    j["z"] = coords(p.z);
    return j;
}

inline json smoothness_to_json(const SmoothnessVerdict& s) {
    json j;
    switch (s.status) {
        case Smoothness::Smooth: j["status"] = "smooth"; break;
        case Smoothness::Singular: j["status"] = "singular"; break;
        case Smoothness::Inconclusive: j["status"] = "inconclusive"; break;
    }
    j["witness"] = s.witness ? ext_point_to_json(*s.witness) : json(nullptr);
    j["checked_extension_degree"] = s.checked_extension_degree;
    j["notes"] = s.notes;
    return j;
}

inline const char* verdict_status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Classical:
        case VerdictStatus::FrobeniusClassical: return "classical";
        case VerdictStatus::Nonclassical: return "nonclassical";
        case VerdictStatus::FrobeniusNonclassical: return "frobenius_nonclassical";
        case VerdictStatus::Unknown: return "unknown";
    }
    return "unknown";
}

inline json verdict_to_json(const Verdict& v) {
    json j;
    j["status"] = verdict_status_name(v.status);
    j["theorem"] = v.theorem;
    j["v"] = v.v ? json(*v.v) : json(nullptr);
    if (v.scaling) j["scaling"] = elem_to_json(*v.scaling);
    j["notes"] = v.notes;
    return j;
}

inline json classification_to_json(const ClassificationReport& r) {
    json j;
    j["smooth"] = smoothness_to_json(r.smooth);
    j["fermat_type"] = r.fermat_type;
    j["d1_frobenius"] = r.d1_frobenius ? verdict_to_json(*r.d1_frobenius) : json(nullptr);
    j["d2_nonclassical"] = r.d2_nonclassical ? verdict_to_json(*r.d2_nonclassical) : json(nullptr);
    j["d2_frobenius"] = r.d2_frobenius ? verdict_to_json(*r.d2_frobenius) : json(nullptr);
    j["ds_frobenius"] = r.ds_frobenius ? verdict_to_json(*r.ds_frobenius) : json(nullptr);
    j["assumption_violations"] = r.assumption_violations;
    return j;
}

inline json bounds_to_json(const BoundSet& b) {
    json j;
    j["hasse_weil"] = b.hasse_weil;
    j["sv_line"] = b.sv_line;
    j["sv_conic"] = b.sv_conic;
    if (b.sv_general) j["sv_general"] = *b.sv_general;
    return j;
}

inline const char* count_method_name(CountMethod m) {
    switch (m) {
        case CountMethod::BruteForce: return "brute_force";
        case CountMethod::Formula51: return "formula_5_1";
        case CountMethod::Formula53: return "formula_5_3";
        case CountMethod::FiberSum: return "fiber_sum";
    }
    return "brute_force";
}

inline json count_report_to_json(const CountReport& r) {
    json j;
    j["N"] = r.N;
    j["method"] = count_method_name(r.method);
    j["delta"] = r.delta ? json(*r.delta) : json(nullptr);
    j["eta"] = r.eta ? json(*r.eta) : json(nullptr);
    j["bounds"] = bounds_to_json(r.bound_set);
    j["exceeds_sv_conic"] = r.exceeds_sv_conic;
    j["runtime_ms"] = r.runtime_ms;
    return j;
}

inline json oracle_to_json(const OracleVerdict& v) {
    json j;
    j["mode"] = v.mode == OracleMode::SymbolicModCurve ? "symbolic" : "sample";
    j["identically_zero"] = v.identically_zero;
    j["samples_used"] = v.samples_used;
    j["confidence_note"] = v.confidence_note;
    return j;
}

inline json maximal_cert_to_json(const MaximalCert& c) {
    json j;
    j["attains_sv_line"] = c.attains_sv_line;
    j["N"] = c.N;
    j["subfield_count"] = c.subfield_count;
    j["n"] = c.n;
    j["d"] = c.d;
    return j;
}

} // namespace frobcurves

#endif
