#ifndef FROBCURVES_CLASSIFY_HPP
#define FROBCURVES_CLASSIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "densefield.hpp"
#include "errors.hpp"
#include "extfield.hpp"
#include "funcfield.hpp"
#include "gf.hpp"
#include "poly.hpp"

namespace frobcurves {

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class VerdictStatus {
    Classical,
    Nonclassical,
    FrobeniusClassical,
    FrobeniusNonclassical,
    Unknown
};

struct Verdict {
    VerdictStatus status = VerdictStatus::Unknown;
    std::string theorem;           // rule code that decided the verdict
    std::optional<int> v;          // subfield parameter when one applies
    std::optional<FqElement> scaling; // coordinate-scaling certificate (rule 4.5(2) case ii)
    std::vector<std::string> notes;
};

struct ClassificationReport {
    SmoothnessVerdict smooth;
    bool fermat_type = false;
    std::optional<Verdict> d1_frobenius;
    std::optional<Verdict> d2_nonclassical;
    std::optional<Verdict> d2_frobenius;
    std::optional<Verdict> ds_frobenius;
    std::vector<std::string> assumption_violations;
};

enum class LinearSystem { D1, D2 };
enum class OracleMode { SymbolicModCurve, PointSampling };

struct OracleVerdict {
    OracleMode mode = OracleMode::SymbolicModCurve;
    bool identically_zero = false;
    int64_t samples_used = 0;
    std::string confidence_note;
};

// ---------------------------------------------------------------------------
// Shared hypothesis helpers
// ---------------------------------------------------------------------------

namespace detail {

inline int count_nonzero_mixed(const CurveFamily& c) {
    const auto& k = c.field;
    int cnt = 0;
    for (int idx : {2, 4, 5})
        if (!k.is_zero(c.a(idx))) ++cnt;
    return cnt;
}

inline std::vector<int> proper_divisors(int h) {
    std::vector<int> out;
    for (int v = 1; v < h; ++v)
        if (h % v == 0) out.push_back(v);
    return out;
}

// all coefficient ratios lie in F_{p^v} (the curve is definable over the subfield)
inline bool ratios_in_subfield(const CurveFamily& c, int v) {
    const auto& k = c.field;
    FqElement ref = k.zero();
    for (const auto& [ij, coef] : c.coeffs) {
        ref = coef;
        break;
    }
    internal_check(!k.is_zero(ref), "curve without nonzero coefficients");
    auto ref_inv = k.inv(ref);
    for (const auto& [ij, coef] : c.coeffs)
        if (!k.in_subfield(k.mul(coef, ref_inv), v)) return false;
    return true;
}

} // namespace detail

// One-mixed-term normal form x^{2n}-coefficient A, mixed B, y^{2n} C with the
// lone pure variable's coefficient scaled to 1 (reached by a coordinate
// permutation, which preserves point counts and all hypotheses).
struct MixedShape {
    int mixed_index = 0; // 2, 4 or 5: which of a2/a4/a5 is the nonzero one
    FqElement A, B, C;
};

inline MixedShape normalize_mixed_shape(const CurveFamily& c) {
    const auto& k = c.field;
    if (c.s != 2) throw Error("ShapeMismatch", "one-mixed-term shape requires s = 2");
    if (detail::count_nonzero_mixed(c) != 1)
        throw Error("ShapeMismatch", "exactly one of a2, a4, a5 must be nonzero");
    MixedShape out;
    if (!k.is_zero(c.a(2))) {
        out.mixed_index = 2; // (x, y, z) as given, normalize by a6
        auto inv = k.inv(c.a(6));
        out.A = k.mul(c.a(1), inv);
        out.B = k.mul(c.a(2), inv);
        out.C = k.mul(c.a(3), inv);
    } else if (!k.is_zero(c.a(4))) {
        out.mixed_index = 4; // (x, z, y), normalize by a3
        auto inv = k.inv(c.a(3));
        out.A = k.mul(c.a(1), inv);
        out.B = k.mul(c.a(4), inv);
        out.C = k.mul(c.a(6), inv);
    } else {
        out.mixed_index = 5; // (y, z, x), normalize by a1
        auto inv = k.inv(c.a(1));
        out.A = k.mul(c.a(3), inv);
        out.B = k.mul(c.a(5), inv);
        out.C = k.mul(c.a(6), inv);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Theorem engines
// ---------------------------------------------------------------------------

// Lines. s = 2: always Frobenius classical under the standing hypotheses
// (rule 4.3). s = 1: the classical Fermat-curve criterion — Frobenius
// nonclassical iff n = (p^h-1)/(p^v-1) and the curve is definable over F_{p^v}.
inline Verdict classify_d1(const CurveFamily& c, int max_ext = 6) {
    const auto& k = c.field;
    std::vector<std::string> bad;
    if (k.p() == 2) bad.push_back("p>2 required (hypothesis 4.i)");
    if (c.s == 1) {
        auto ca = c.coeff(1, 0), cb = c.coeff(0, 1), cc = c.coeff(0, 0);
        if (k.is_zero(ca) || k.is_zero(cb) || k.is_zero(cc))
            bad.push_back("degree-1 companion needs all three coefficients nonzero");
        if (c.n % k.p() == 0) bad.push_back("p must not divide n");
        if (!bad.empty()) throw AssumptionViolated(bad);
        for (int v : detail::proper_divisors(k.h())) {
            int64_t pv = FieldSpec::ipow(k.p(), v);
            if ((k.q() - 1) % (pv - 1) != 0) continue;
            if ((k.q() - 1) / (pv - 1) != c.n) continue;
            if (detail::ratios_in_subfield(c, v)) {
                Verdict out;
                out.status = VerdictStatus::FrobeniusNonclassical;
                out.theorem = "GV-lines";
                out.v = v;
                return out;
            }
        }
        Verdict out;
        out.status = VerdictStatus::FrobeniusClassical;
        out.theorem = "GV-lines";
        return out;
    }
    if (c.s == 2) {
        auto sm = is_smooth(c, max_ext);
        if (sm.status != Smoothness::Smooth)
            bad.push_back("nonsingular curve required (hypothesis 4.ii)");
        if (detail::count_nonzero_mixed(c) == 0)
            bad.push_back("non-Fermat shape required (hypothesis 4.iii)");
        if (!bad.empty()) throw AssumptionViolated(bad);
        Verdict out;
        out.status = VerdictStatus::FrobeniusClassical;
        out.theorem = "4.3";
        return out;
    }
    throw AssumptionViolated({"classify_d1 supports s in {1, 2} only"});
}

// Conics, s = 2, under hypotheses (4.i)-(4.v). Returns the nonclassicality
// verdict (rule 4.4) and the Frobenius verdict (rule 4.5). The rule 4.5(2)
// scaling case certifies b^{p^v-1} = -1 by exhibiting alpha with
// alpha^{2n} = b^2.
inline std::pair<Verdict, Verdict> classify_d2(const CurveFamily& c, int max_ext = 6,
                                               int64_t table_cap = (int64_t(1) << 21)) {
    const auto& k = c.field;
    std::vector<std::string> bad;
    if (c.s != 2) bad.push_back("s = 2 required");
    if (k.p() <= 7) bad.push_back("p>7 required (hypothesis 4.iv)");
    if (c.n <= 2) bad.push_back("n>2 required (hypothesis 4.v)");
    if (c.s == 2) {
        auto sm = is_smooth(c, max_ext);
        if (sm.status != Smoothness::Smooth)
            bad.push_back("nonsingular curve required (hypothesis 4.ii)");
        if (detail::count_nonzero_mixed(c) == 0)
            bad.push_back("non-Fermat shape required (hypothesis 4.iii)");
    }
    if (!bad.empty()) throw AssumptionViolated(bad);

    const int64_t p = k.p();
    bool case1 = ((c.n - 1) % p == 0);
    bool case2 = ((2 * static_cast<int64_t>(c.n) - 1) % p == 0);
    internal_check(!(case1 && case2), "p cannot divide both n-1 and 2n-1");
    int mixed = detail::count_nonzero_mixed(c);

    Verdict noncl;
    if (case1) {
        noncl.status = VerdictStatus::Nonclassical;
        noncl.theorem = "4.4(1)";
    } else if (case2 && mixed == 1) {
        noncl.status = VerdictStatus::Nonclassical;
        noncl.theorem = "4.4(2)";
    } else {
        noncl.status = VerdictStatus::Classical;
        noncl.theorem = "4.4";
    }

    Verdict frob;
    frob.status = VerdictStatus::FrobeniusClassical;
    frob.theorem = "4.5";
    if (case1) {
        for (int v : detail::proper_divisors(k.h())) {
            int64_t pv = FieldSpec::ipow(p, v);
            if ((k.q() - 1) % (pv - 1) != 0) continue;
            if ((k.q() - 1) / (pv - 1) != c.n) continue;
            if (!detail::ratios_in_subfield(c, v)) continue;
            frob.status = VerdictStatus::FrobeniusNonclassical;
            frob.theorem = "4.5(1)";
            frob.v = v;
            break;
        }
    } else if (case2 && mixed == 1) {
        auto shape = normalize_mixed_shape(c);
        for (int v : detail::proper_divisors(k.h())) {
            int64_t pv = FieldSpec::ipow(p, v);
            if ((k.q() - 1) % (2 * (pv - 1)) != 0) continue;
            if ((k.q() - 1) / (2 * (pv - 1)) != c.n) continue;
            if (!k.in_subfield(shape.A, v) || !k.in_subfield(shape.C, v)) continue;
            auto bpow = k.pow(shape.B, static_cast<uint64_t>(pv - 1));
            if (k.eq(bpow, k.one())) {
                frob.status = VerdictStatus::FrobeniusNonclassical;
                frob.theorem = "4.5(2)";
                frob.v = v;
                break;
            }
            if (k.eq(bpow, k.neg(k.one()))) {
                // certificate: alpha with alpha^{2n} = B^2, which rescales the
                // mixed coordinate into the subfield
                IndexedField<FieldSpec> ix(k, table_cap);
                auto b2 = k.mul(shape.B, shape.B);
                auto roots = ix.nth_roots(2 * static_cast<uint64_t>(c.n),
                                          static_cast<uint32_t>(k.index_of(b2)));
                internal_check(!roots.empty(),
                               "norm surjectivity guarantees a scaling certificate");
                auto alpha = k.elem_of(roots.front());
                auto balpha = k.mul(shape.B, k.pow(alpha, static_cast<uint64_t>(c.n)));
                internal_check(k.in_subfield(balpha, v) && k.in_subfield(k.mul(shape.A, k.pow(alpha, 2 * static_cast<uint64_t>(c.n))), v),
                               "scaling certificate fails to land in the subfield");
                frob.status = VerdictStatus::FrobeniusNonclassical;
                frob.theorem = "4.5(2)";
                frob.v = v;
                frob.scaling = alpha;
                frob.notes.push_back("mixed coefficient satisfies b^{p^v-1} = -1; scaled");
                break;
            }
        }
    }

    // consistency (rule 2.3): Frobenius nonclassical forces nonclassical here (p > 7 > 5)
    if (frob.status == VerdictStatus::FrobeniusNonclassical)
        internal_check(noncl.status == VerdictStatus::Nonclassical,
                       "Frobenius nonclassical verdict without nonclassicality");
    return {noncl, frob};
}

// Degree-s systems, s >= 2: sufficiency only (rule 3.4).
inline Verdict classify_ds(const CurveFamily& c, int max_ext = 6) {
    const auto& k = c.field;
    std::vector<std::string> bad;
    if (c.s < 2) bad.push_back("s>=2 required (hypothesis 3.i)");
    if ((c.n - 1) % k.p() != 0) bad.push_back("p | n-1 required (hypothesis 3.ii)");
    if (c.s == 2 && k.p() <= 5) bad.push_back("p>5 required for s=2 (hypothesis 3.iii)");
    if (c.s >= 3 && k.p() <= static_cast<int64_t>(c.s) * c.s)
        bad.push_back("p>s^2 required for s>=3 (hypothesis 3.iii)");
    if (bad.empty()) {
        auto sm = is_smooth(c, max_ext);
        if (sm.status == Smoothness::Singular)
            bad.push_back("nonsingular curve required");
        else if (sm.status == Smoothness::Inconclusive)
            bad.push_back("smoothness undecided within the search bound");
    }
    if (!bad.empty()) throw AssumptionViolated(bad);

    for (int v : detail::proper_divisors(k.h())) {
        int64_t pv = FieldSpec::ipow(k.p(), v);
        if ((k.q() - 1) % (pv - 1) != 0) continue;
        if ((k.q() - 1) / (pv - 1) != c.n) continue;
        if (detail::ratios_in_subfield(c, v)) {
            Verdict out;
            out.status = VerdictStatus::FrobeniusNonclassical;
            out.theorem = "3.4";
            out.v = v;
            out.notes.push_back("sufficient condition; converse not decided for general s");
            return out;
        }
    }
    Verdict out;
    out.status = VerdictStatus::Unknown;
    out.theorem = "3.4";
    out.notes.push_back("sufficient condition not met; rule 3.4 decides only sufficiency");
    return out;
}

// Full report: engines run individually, refusals collected instead of thrown.
inline ClassificationReport classify_curve(const CurveFamily& c, int max_ext = 6) {
    ClassificationReport rep;
    rep.smooth = is_smooth(c, max_ext);
    rep.fermat_type = (c.s == 2) && (detail::count_nonzero_mixed(c) == 0);
    auto run = [&](auto&& fn, std::optional<Verdict>& slot) {
        try {
            slot = fn();
        } catch (const AssumptionViolated& e) {
            for (const auto& v : e.violations()) rep.assumption_violations.push_back(v);
        }
    };
    if (c.s <= 2) run([&] { return classify_d1(c, max_ext); }, rep.d1_frobenius);
    if (c.s == 2) {
        try {
            auto [noncl, frob] = classify_d2(c, max_ext);
            rep.d2_nonclassical = noncl;
            rep.d2_frobenius = frob;
        } catch (const AssumptionViolated& e) {
            for (const auto& v : e.violations()) rep.assumption_violations.push_back(v);
        }
    }
    if (c.s >= 2) run([&] { return classify_ds(c, max_ext); }, rep.ds_frobenius);
    // a Frobenius nonclassical conic verdict forces nonclassicality (p > 7)
    if (rep.d2_frobenius && rep.d2_nonclassical &&
        rep.d2_frobenius->status == VerdictStatus::FrobeniusNonclassical)
        internal_check(rep.d2_nonclassical->status == VerdictStatus::Nonclassical,
                       "report violates the Frobenius-implies-nonclassical rule");
    return rep;
}

// ---------------------------------------------------------------------------
// The Wronskian oracle: re-derives Frobenius verdicts from the determinant
// criterion, independently of the theorem engines above.
// ---------------------------------------------------------------------------

namespace detail {

// Frobenius determinant matrix over the symbolic function field. Basis
// (1, x, y) for lines and (1, x, y, x^2, xy, y^2) for conics; first row takes
// q-th powers, the remaining rows take Hasse derivatives of orders 0..M-1.
inline FuncField::Elem symbolic_frobenius_det(const FuncField& K, LinearSystem sys, uint64_t q) {
    using E = FuncField::Elem;
    auto one = K.one();
    auto x = K.x_pow(1), y = K.y_pow(1);
    auto xq = K.x_pow(static_cast<int64_t>(q)), yq = K.y_pow(static_cast<int64_t>(q));
    if (sys == LinearSystem::D1) {
        auto S = K.hasse_series(1);
        std::vector<std::vector<E>> m = {
            {one, xq, yq},
            {one, x, y},
            {K.zero(), one, S[1]},
        };
        return K.det(m);
    }
    auto S = K.hasse_series(4);
    // Hasse derivatives of xy and y^2 from the series (x+T)(S) and S^2
    auto dxy = [&](int i) {
        // D^i(xy) = x d_i + d_{i-1}
        auto t = K.mul(x, S[i]);
        if (i >= 1) t = K.add(t, S[i - 1]);
        return t;
    };
    auto dy2 = [&](int i) {
        auto acc = K.zero();
        for (int j = 0; j <= i; ++j) acc = K.add(acc, K.mul(S[j], S[i - j]));
        return acc;
    };
    auto x2 = K.x_pow(2), xy = K.mul(x, y), y2 = K.y_pow(2);
    auto x2q = K.x_pow(2 * static_cast<int64_t>(q));
    auto xqyq = K.mul(xq, yq);
    auto y2q = K.y_pow(2 * static_cast<int64_t>(q));
    auto two_x = K.add(x, x);
    std::vector<std::vector<E>> m = {
        {one, xq, yq, x2q, xqyq, y2q},
        {one, x, y, x2, xy, y2},
        {K.zero(), one, S[1], two_x, dxy(1), dy2(1)},
        {K.zero(), K.zero(), S[2], one, dxy(2), dy2(2)},
        {K.zero(), K.zero(), S[3], K.zero(), dxy(3), dy2(3)},
        {K.zero(), K.zero(), S[4], K.zero(), dxy(4), dy2(4)},
    };
    return K.det(m);
}

// Pointwise Frobenius determinant over an arbitrary field E at a chart point
// (u, w) with f(u, w) = 0, f_y(u, w) != 0.
template <class E>
typename E::Elem pointwise_frobenius_det(const E& e, const BiPoly<E>& f,
                                         const typename E::Elem& u, const typename E::Elem& w,
                                         uint64_t q, LinearSystem sys) {
    auto S = branch_expand(e, f, u, w, sys == LinearSystem::D1 ? 1 : 4);
    auto uq = e.pow(u, q), wq = e.pow(w, q);
    if (sys == LinearSystem::D1) {
        std::vector<std::vector<typename E::Elem>> m = {
            {e.one(), uq, wq},
            {e.one(), u, w},
            {e.zero(), e.one(), S.a[1]},
        };
        return mat_det(e, std::move(m));
    }
    auto dxy = [&](int i) {
        auto t = e.mul(u, S.a[i]);
        if (i >= 1) t = e.add(t, S.a[i - 1]);
        return t;
    };
    auto dy2 = [&](int i) { return hasse_product(e, S, S, i); };
    std::vector<std::vector<typename E::Elem>> m = {
        {e.one(), uq, wq, e.mul(uq, uq), e.mul(uq, wq), e.mul(wq, wq)},
        {e.one(), u, w, e.mul(u, u), e.mul(u, w), e.mul(w, w)},
        {e.zero(), e.one(), S.a[1], e.add(u, u), dxy(1), dy2(1)},
        {e.zero(), e.zero(), S.a[2], e.one(), dxy(2), dy2(2)},
        {e.zero(), e.zero(), S.a[3], e.zero(), dxy(3), dy2(3)},
        {e.zero(), e.zero(), S.a[4], e.zero(), dxy(4), dy2(4)},
    };
    return mat_det(e, std::move(m));
}

// curve chart f(x, y) = F(x, y, 1) over an extension, coefficients embedded
template <class E>
BiPoly<E> embedded_chart(const E& ext, const CurveFamily& c) {
    BiPoly<E> f;
    for (const auto& [ij, coef] : c.coeffs)
        f.terms.push_back({ij.first * c.n, ij.second * c.n, ext.from_base(coef)});
    return f;
}

} // namespace detail

// Exact symbolic mode: the determinant is computed in the function field and
// tested for literal zero. Sampling mode: the determinant is evaluated at
// distinct curve points (coordinate zeros and f_y = 0 excluded) over F_q and
// table-reachable extensions; a zero verdict is certified once the count of
// vanishing evaluations exceeds the degree bound of the cleared numerator,
// otherwise it is labeled heuristic.
inline OracleVerdict wronskian_frobenius_oracle(const CurveFamily& c, LinearSystem sys,
                                                OracleMode mode, int64_t budget = -1,
                                                int64_t symbolic_ceiling = 100000,
                                                int64_t table_cap = (int64_t(1) << 21)) {
    const auto& k = c.field;
    if (c.s > 2)
        throw Error("SeparatingVariableFailure", "the oracle supports s in {1, 2} charts only");
    if (k.p() <= static_cast<int64_t>(sys == LinearSystem::D1 ? 2 : 4))
        throw Error("SeparatingVariableFailure",
                    "characteristic too small for the requested derivative orders");

    OracleVerdict out;
    out.mode = mode;
    const uint64_t q = static_cast<uint64_t>(k.q());

    if (mode == OracleMode::SymbolicModCurve) {
        if (k.q() > symbolic_ceiling)
            throw Error("BudgetTooSmall",
                        "field size exceeds the symbolic ceiling " + std::to_string(symbolic_ceiling));
        FuncField K(c);
        auto det = detail::symbolic_frobenius_det(K, sys, q);
        out.identically_zero = K.is_zero(det);
        out.samples_used = 0;
        out.confidence_note = "exact: determinant reduced in the function field";
        return out;
    }

    // -- PointSampling --
    if (budget < 1) throw Error("BudgetTooSmall", "sampling budget must be positive");
    const int64_t n = c.n;
    // degree bound of the cleared numerator, times the curve degree
    const int64_t numerator_deg =
        (sys == LinearSystem::D1) ? (static_cast<int64_t>(q) + 8 * n) : (2 * static_cast<int64_t>(q) + 48 * n);
    const int64_t required = numerator_deg * (2 * n) + 1;

    int64_t used = 0;
    bool all_zero = true;

    auto sample_over = [&](auto& ext, int ext_deg) {
        using EF = std::decay_t<decltype(ext)>;
        IndexedField<EF> ix(ext, table_cap);
        IndexedFieldView<EF> V(ix);
        // chart and companion data in index space
        BiPoly<IndexedFieldView<EF>> f;
        for (const auto& [ij, coef] : c.coeffs)
            f.terms.push_back({ij.first * c.n, ij.second * c.n, V.from_field(ext.from_base(coef))});
        auto fy = bp_partial(V, f, 1);
        std::vector<UniPoly<IndexedFieldView<EF>>> gY(c.s + 1);
        for (const auto& [ij, coef] : c.coeffs) {
            auto& poly = gY[ij.second];
            if (static_cast<size_t>(ij.first) >= poly.c.size())
                poly.c.resize(ij.first + 1, V.zero());
            poly.c[ij.first] = V.add(poly.c[ij.first], V.from_field(ext.from_base(coef)));
        }
        for (auto& poly : gY) up_trim(V, poly);
        const int64_t Q = ext.element_count();
        auto in_proper_subfield_pair = [&](uint32_t u, uint32_t w) {
            if (ext_deg == 1) return false;
            for (int d = 1; d < ext_deg; ++d) {
                if (ext_deg % d != 0) continue;
                uint64_t qd = 1;
                for (int i = 0; i < d; ++i) qd *= static_cast<uint64_t>(k.q());
                if (V.pow(u, qd) == u && V.pow(w, qd) == w) return true;
            }
            return false;
        };
        for (int64_t iu = 1; iu < Q && used < budget && all_zero; ++iu) {
            uint32_t u = static_cast<uint32_t>(iu);
            uint32_t X = V.pow(u, static_cast<uint64_t>(n));
            // solve g(X, Y) = 0 for Y: linear or quadratic formula
            std::vector<uint32_t> Ys;
            if (c.s == 1) {
                auto b1 = up_eval(V, gY[1], X);
                if (V.is_zero(b1)) continue;
                Ys.push_back(V.neg(V.div(up_eval(V, gY[0], X), b1)));
            } else {
                auto A = up_eval(V, gY[2], X);
                auto B = up_eval(V, gY[1], X);
                auto C = up_eval(V, gY[0], X);
                if (V.is_zero(A)) {
                    if (!V.is_zero(B)) Ys.push_back(V.neg(V.div(C, B)));
                } else {
                    auto disc = V.sub(V.mul(B, B), V.mul(V.from_int(4), V.mul(A, C)));
                    auto sq = ix.nth_roots(2, disc);
                    auto inv2a = V.inv(V.add(A, A));
                    for (auto sidx : sq) Ys.push_back(V.mul(V.sub(sidx, B), inv2a));
                }
            }
            for (auto Y : Ys) {
                if (used >= budget || !all_zero) break;
                if (V.is_zero(Y)) continue;
                auto wroots = ix.nth_roots(static_cast<uint64_t>(n), Y);
                for (auto w : wroots) {
                    if (used >= budget || !all_zero) break;
                    if (V.is_zero(w)) continue;
                    if (in_proper_subfield_pair(u, w)) continue;
                    if (V.is_zero(bp_eval(V, fy, u, w))) continue;
                    auto det = detail::pointwise_frobenius_det(V, f, u, w, q, sys);
                    ++used;
                    if (!V.is_zero(det)) all_zero = false;
                }
            }
        }
    };

    // rational points first, then table-reachable extensions
    for (int ext_deg = 1; used < budget && all_zero; ++ext_deg) {
        int64_t size = 1;
        bool too_big = false;
        for (int i = 0; i < ext_deg; ++i) {
            if (size > table_cap / k.q()) {
                too_big = true;
                break;
            }
            size *= k.q();
        }
        if (too_big || size > table_cap) break;
        ExtField<FieldSpec> ext(k, ext_deg);
        sample_over(ext, ext_deg);
        if (used >= required) break;
    }

    if (used == 0)
        throw Error("BudgetTooSmall", "no admissible sample points within table reach");
    out.samples_used = used;
    if (!all_zero) {
        out.identically_zero = false;
        out.confidence_note = "exact: a sample point with nonzero determinant was found";
    } else if (used >= required) {
        out.identically_zero = true;
        out.confidence_note =
            "certified: " + std::to_string(used) + " vanishing samples exceed the degree bound " +
            std::to_string(required - 1);
    } else {
        out.identically_zero = true;
        out.confidence_note = "heuristic: only " + std::to_string(used) +
                              " of the required " + std::to_string(required) + " samples were available";
    }
    return out;
}

// Literal 5x5 Hasse-Wronskian of the one-mixed-term chart evaluated at a
// point; row 0 carries phi - phi^q, rows 1..4 the Hasse derivatives of
// (x, x^2, y, xy, y^2). Used by the factorization spot checks.
template <class E>
typename E::Elem w5_at_point(const E& e, const BiPoly<E>& f, const typename E::Elem& u,
                             const typename E::Elem& w, uint64_t q) {
    auto S = branch_expand(e, f, u, w, 4);
    auto uq = e.pow(u, q), wq = e.pow(w, q);
    auto dxy = [&](int i) {
        auto t = e.mul(u, S.a[i]);
        if (i >= 1) t = e.add(t, S.a[i - 1]);
        return t;
    };
    auto dy2 = [&](int i) { return hasse_product(e, S, S, i); };
    std::vector<std::vector<typename E::Elem>> m = {
        {e.sub(u, uq), e.sub(e.mul(u, u), e.mul(uq, uq)), e.sub(w, wq),
         e.sub(e.mul(u, w), e.mul(uq, wq)), e.sub(e.mul(w, w), e.mul(wq, wq))},
        {e.one(), e.add(u, u), S.a[1], dxy(1), dy2(1)},
        {e.zero(), e.one(), S.a[2], dxy(2), dy2(2)},
        {e.zero(), e.zero(), S.a[3], dxy(3), dy2(3)},
        {e.zero(), e.zero(), S.a[4], dxy(4), dy2(4)},
    };
    return mat_det(e, std::move(m));
}

} // namespace frobcurves

#endif
