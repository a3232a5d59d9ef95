#ifndef FROBCURVES_CURVE_HPP
#define FROBCURVES_CURVE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "densefield.hpp"
#include "errors.hpp"
#include "extfield.hpp"
#include "gf.hpp"
#include "poly.hpp"

namespace frobcurves {

// ---------------------------------------------------------------------------
// Projective points
// ---------------------------------------------------------------------------

// Normalized so the last nonzero coordinate equals 1; equality is coordinate
// equality after normalization.
template <class F>
struct ProjPoint {
    typename F::Elem x, y, z;
};

template <class F>
ProjPoint<F> make_point(const F& k, const typename F::Elem& x, const typename F::Elem& y,
                        const typename F::Elem& z) {
    typename F::Elem s;
    if (!k.is_zero(z)) s = k.inv(z);
    else if (!k.is_zero(y)) s = k.inv(y);
    else if (!k.is_zero(x)) s = k.inv(x);
    else throw Error("ZeroForm", "(0:0:0) is not a projective point");
    return ProjPoint<F>{k.mul(x, s), k.mul(y, s), k.mul(z, s)};
}

template <class F>
bool pp_eq(const F& k, const ProjPoint<F>& a, const ProjPoint<F>& b) {
    return k.eq(a.x, b.x) && k.eq(a.y, b.y) && k.eq(a.z, b.z);
}

// Coordinate-wise q-th power; fixes exactly the F_q-rational points.
template <class F>
ProjPoint<F> frobenius_image(const F& k, const ProjPoint<F>& pt, uint64_t q) {
    return make_point(k, k.pow(pt.x, q), k.pow(pt.y, q), k.pow(pt.z, q));
}

using ProjPointQ = ProjPoint<FieldSpec>;

// Point over F_{q^k}, coordinates as vectors over the base field.
struct ExtPoint {
    int ext_degree = 1;
    std::vector<FqElement> x, y, z;
};

// ---------------------------------------------------------------------------
// The curve family F(x,y,z) = sum_{i+j+t=s} c_ij x^{in} y^{jn} z^{tn}
// ---------------------------------------------------------------------------

struct CurveFamily {
    FieldSpec field;
    int s = 1;
    int n = 2;
    std::map<std::pair<int, int>, FqElement> coeffs; // (i,j) -> c_ij, t = s-i-j implied

    int degree() const { return s * n; }
    FqElement coeff(int i, int j) const {
        auto it = coeffs.find({i, j});
        return it == coeffs.end() ? field.zero() : it->second;
    }
    // s = 2 coefficient aliases:
    // F = a1 x^{2n} + a2 x^n y^n + a3 y^{2n} + a4 x^n z^n + a5 y^n z^n + a6 z^{2n}
    FqElement a(int idx) const {
        internal_check(s == 2, "a1..a6 aliases are for s = 2 only");
        switch (idx) {
            case 1: return coeff(2, 0);
            case 2: return coeff(1, 1);
            case 3: return coeff(0, 2);
            case 4: return coeff(1, 0);
            case 5: return coeff(0, 1);
            case 6: return coeff(0, 0);
        }
        internal_check(false, "alias index out of range");
        return field.zero();
    }
};

inline CurveFamily make_curve(const FieldSpec& field, int s, int n,
                              std::map<std::pair<int, int>, FqElement> coeffs) {
    if (s < 1) throw Error("DegreeMismatch", "family parameter s must be >= 1");
    if (n < 2) throw Error("DegreeMismatch", "family parameter n must be >= 2");
    CurveFamily c{field, s, n, {}};
    bool nonzero = false;
    for (auto& [ij, v] : coeffs) {
        if (ij.first < 0 || ij.second < 0 || ij.first + ij.second > s)
            throw Error("DegreeMismatch", "coefficient index (i,j) must satisfy i+j <= s");
        if (field.is_zero(v)) continue;
        c.coeffs[ij] = v;
        nonzero = true;
    }
    if (!nonzero) throw Error("ZeroForm", "all family coefficients are zero");
    return c;
}

// The defining degree-sn form F.
inline TriForm<FieldSpec> family_form(const CurveFamily& c) {
    TriForm<FieldSpec> f;
    f.degree = c.s * c.n;
    for (const auto& [ij, v] : c.coeffs) {
        int i = ij.first, j = ij.second, t = c.s - i - j;
        tf_set(c.field, f, i * c.n, j * c.n, t * c.n, v);
    }
    return f;
}

// The degree-s companion form G with F(x,y,z) = G(x^n, y^n, z^n).
inline TriForm<FieldSpec> g_form(const CurveFamily& c) {
    TriForm<FieldSpec> g;
    g.degree = c.s;
    for (const auto& [ij, v] : c.coeffs) tf_set(c.field, g, ij.first, ij.second, c.s - ij.first - ij.second, v);
    return g;
}

// Largest v with p^v | n-1 together with m = (n-1)/p^v, gcd(p, m) = 1.
inline std::pair<int, int64_t> split_n_minus_1(int64_t p, int64_t n) {
    if ((n - 1) % p != 0)
        throw Error("HypothesisPNotDividingNMinus1", "p must divide n-1");
    int v = 0;
    int64_t m = n - 1;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return {v, m};
}

// ---------------------------------------------------------------------------
// Osculating curve and Frobenius tests
// ---------------------------------------------------------------------------

// H_P(x,y,z) = sum c_ij (a^{im} b^{jm} c^{tm})^{p^v} x^i y^j z^t at P = (a:b:c),
// abc != 0, n = m p^v + 1. Passes through P and meets the curve at P with
// multiplicity >= p^v.
inline TriForm<FieldSpec> osculating_form(const CurveFamily& c, const ProjPointQ& P) {
    const FieldSpec& k = c.field;
    if (k.is_zero(P.x) || k.is_zero(P.y) || k.is_zero(P.z))
        throw Error("CoordinateZero", "osculating form needs a point with nonzero coordinates");
    auto [v, m] = split_n_minus_1(k.p(), c.n);
    uint64_t pv = static_cast<uint64_t>(FieldSpec::ipow(k.p(), v));
    TriForm<FieldSpec> h;
    h.degree = c.s;
    for (const auto& [ij, coef] : c.coeffs) {
        int i = ij.first, j = ij.second, t = c.s - i - j;
        auto w = k.mul(k.pow(P.x, static_cast<uint64_t>(i) * m),
                       k.mul(k.pow(P.y, static_cast<uint64_t>(j) * m),
                             k.pow(P.z, static_cast<uint64_t>(t) * m)));
        tf_set(k, h, i, j, t, k.mul(coef, k.pow(w, pv)));
    }
    tf_validate(k, h);
    return h;
}

// Does the image of P under the q-Frobenius land on the osculating curve at P?
inline bool frobenius_on_osculating(const CurveFamily& c, const ProjPointQ& P) {
    auto h = osculating_form(c, P);
    auto img = frobenius_image(c.field, P, static_cast<uint64_t>(c.field.q()));
    return c.field.is_zero(eval_form(c.field, h, img.x, img.y, img.z));
}

// Same operations for points over an extension of the base field (the
// "infinitely many points" statements are sampled over extensions).
template <class E>
TriForm<E> osculating_form_over(const CurveFamily& c, const E& ext, const ProjPoint<E>& P) {
    if (ext.is_zero(P.x) || ext.is_zero(P.y) || ext.is_zero(P.z))
        throw Error("CoordinateZero", "osculating form needs a point with nonzero coordinates");
    auto [v, m] = split_n_minus_1(c.field.p(), c.n);
    uint64_t pv = static_cast<uint64_t>(FieldSpec::ipow(c.field.p(), v));
    TriForm<E> h;
    h.degree = c.s;
    for (const auto& [ij, coef] : c.coeffs) {
        int i = ij.first, j = ij.second, t = c.s - i - j;
        auto w = ext.mul(ext.pow(P.x, static_cast<uint64_t>(i) * m),
                         ext.mul(ext.pow(P.y, static_cast<uint64_t>(j) * m),
                                 ext.pow(P.z, static_cast<uint64_t>(t) * m)));
        tf_set(ext, h, i, j, t, ext.mul(ext.from_base(coef), ext.pow(w, pv)));
    }
    return h;
}

template <class E>
bool frobenius_on_osculating_over(const CurveFamily& c, const E& ext, const ProjPoint<E>& P) {
    auto h = osculating_form_over(c, ext, P);
    auto img = frobenius_image(ext, P, static_cast<uint64_t>(c.field.q()));
    return ext.is_zero(eval_form(ext, h, img.x, img.y, img.z));
}

// pi(x:y:z) = (x^n : y^n : z^n); lands on the companion curve G = 0.
inline ProjPointQ norm_projection(const CurveFamily& c, const ProjPointQ& P) {
    const FieldSpec& k = c.field;
    auto F = family_form(c);
    if (!k.is_zero(eval_form(k, F, P.x, P.y, P.z)))
        throw Error("NotOnCurve", "norm projection requires a point on the curve");
    uint64_t n = static_cast<uint64_t>(c.n);
    return make_point(k, k.pow(P.x, n), k.pow(P.y, n), k.pow(P.z, n));
}

// ---------------------------------------------------------------------------
// Lifts: conic/degree-s curve over F_{p^v} -> family curve over F_{p^h}
// ---------------------------------------------------------------------------

// Embedding of F_{p^v} into F_{p^h} (v | h): the subfield generator maps to
// the smallest root of the subfield modulus in the big field.
inline FqElement embed_subfield_elem(const FieldSpec& small, const FieldSpec& big,
                                     const FqElement& x) {
    internal_check(small.p() == big.p(), "embedding requires equal characteristic");
    if (small.h() == 1) return big.from_int(x.c[0]);
    UniPoly<FieldSpec> m;
    for (auto c : small.modulus()) m.c.push_back(big.from_int(c));
    up_trim(big, m);
    auto roots = find_roots(big, m);
    internal_check(!roots.empty(), "subfield modulus has no root in the big field");
    auto rho = roots.front();
    FqElement acc = big.zero();
    for (size_t i = x.c.size(); i-- > 0;)
        acc = big.add(big.mul(acc, rho), big.from_int(x.c[i]));
    return acc;
}

// Lift with the degree-s curve already expressed inside F_{p^h}: coefficients
// must satisfy in_subfield(., v); n = (p^h - 1)/(p^v - 1).
inline CurveFamily lift_conic_embedded(const FieldSpec& big, const TriForm<FieldSpec>& g, int v) {
    if (v < 1 || v >= big.h() || big.h() % v != 0)
        throw Error("BadTower", "lift requires v | h and v < h");
    for (const auto& [e, c] : g.terms)
        if (!big.in_subfield(c, v))
            throw Error("CoefficientNotInSubfield",
                        "coefficient is not fixed by the p^v Frobenius");
    int64_t pv = FieldSpec::ipow(big.p(), v);
    int64_t n = (big.q() - 1) / (pv - 1);
    std::map<std::pair<int, int>, FqElement> coeffs;
    for (const auto& [e, c] : g.terms) coeffs[{e[0], e[1]}] = c;
    return make_curve(big, g.degree, static_cast<int>(n), std::move(coeffs));
}

// Lift with the degree-s curve given over its own small field F_{p^v}.
inline CurveFamily lift_conic(const FieldSpec& subfield, const TriForm<FieldSpec>& g, int h) {
    int v = subfield.h();
    if (v >= h || h % v != 0) throw Error("BadTower", "lift requires v | h and v < h");
    tf_validate(subfield, g);
    FieldSpec big = field_create(subfield.p(), h);
    TriForm<FieldSpec> ge;
    ge.degree = g.degree;
    for (const auto& [e, c] : g.terms) tf_set(big, ge, e[0], e[1], e[2], embed_subfield_elem(subfield, big, c));
    return lift_conic_embedded(big, ge, v);
}

// ---------------------------------------------------------------------------
// Smoothness
// ---------------------------------------------------------------------------

enum class Smoothness { Smooth, Singular, Inconclusive };

struct SmoothnessVerdict {
    Smoothness status = Smoothness::Inconclusive;
    std::optional<ExtPoint> witness; // a singular point, possibly over an extension
    int checked_extension_degree = 0;
    std::vector<std::string> notes;
};

namespace detail {

template <class E>
TriForm<E> embed_triform(const E& ext, const TriForm<FieldSpec>& f) {
    TriForm<E> r;
    r.degree = f.degree;
    for (const auto& [e, c] : f.terms) r.terms[e] = ext.from_base(c);
    return r;
}

// Try to lift the companion-curve point Q (coordinates over F_q, normalized so
// the last nonzero coordinate is 1) to a singular point of the family curve by
// extracting n-th roots over F_{q^k}, k <= max_ext. Verifies F and all three
// partials vanish at the produced witness.
inline std::optional<ExtPoint> lift_singular_witness(const CurveFamily& c, const FqElement& Qx,
                                                     const FqElement& Qy, const FqElement& Qz,
                                                     int max_ext, int64_t table_cap) {
    (void)table_cap;
    const FieldSpec& k = c.field;
    auto F = family_form(c);
    auto parts = partials(k, F);
    for (int kk = 1; kk <= max_ext; ++kk) {
        // keep the per-level root search affordable: q^kk as uint64 only
        __int128 sz = 1;
        for (int i = 0; i < kk; ++i) sz *= k.q();
        if (sz > (int64_t(1) << 50)) break;
        ExtField<FieldSpec> ext(k, kk);
        auto root_of = [&](const FqElement& a) -> std::optional<typename ExtField<FieldSpec>::Elem> {
            if (k.is_zero(a)) return ext.zero();
            // smallest root of T^n - a over this extension
            auto roots = find_roots_binomial(ext, static_cast<uint64_t>(c.n), ext.from_base(a));
            if (roots.empty()) return std::nullopt;
            return roots.front();
        };
        auto rx = root_of(Qx), ry = root_of(Qy), rz = root_of(Qz);
        if (!rx || !ry || !rz) continue;
        auto Fe = embed_triform(ext, F);
        bool ok = ext.is_zero(eval_form(ext, Fe, *rx, *ry, *rz));
        for (int v = 0; v < 3 && ok; ++v) {
            auto Pe = embed_triform(ext, parts[v]);
            ok = ext.is_zero(eval_form(ext, Pe, *rx, *ry, *rz));
        }
        internal_check(ok, "lifted witness fails the singularity equations");
        return ExtPoint{kk, *rx, *ry, *rz};
    }
    return std::nullopt;
}

} // namespace detail

// Exact smoothness decision for s = 2: the curve is smooth iff
//   a1 a3 a6 != 0,
//   the symmetric conic matrix has nonzero determinant, and
//   4 a1 a3 != a2^2, 4 a1 a6 != a4^2, 4 a3 a6 != a5^2
// (each coordinate line carries a singular point exactly when the restricted
// 2x2 partial system degenerates). For s != 2 the companion-curve singular
// systems are solved stratum by stratum; root candidates are resolved over
// F_{q^k} for k <= max_ext and anything unresolved reports Inconclusive.
inline SmoothnessVerdict is_smooth(const CurveFamily& c, int max_ext = 6,
                                   int64_t table_cap = (int64_t(1) << 21));

namespace detail {

inline SmoothnessVerdict is_smooth_s2(const CurveFamily& c, int max_ext, int64_t table_cap) {
    const FieldSpec& k = c.field;
    SmoothnessVerdict out;
    out.checked_extension_degree = max_ext;
    FqElement a1 = c.a(1), a2 = c.a(2), a3 = c.a(3), a4 = c.a(4), a5 = c.a(5), a6 = c.a(6);

    // corner points (1:0:0), (0:1:0), (0:0:1) lie on the curve iff the pure
    // coefficient vanishes, and are then singular
    struct Corner {
        const FqElement* coef;
        int cx, cy, cz;
    };
    Corner corners[3] = {{&a1, 1, 0, 0}, {&a3, 0, 1, 0}, {&a6, 0, 0, 1}};
    for (const auto& co : corners) {
        if (k.is_zero(*co.coef)) {
            out.status = Smoothness::Singular;
            out.witness = ExtPoint{1,
                                   {k.from_int(co.cx)},
                                   {k.from_int(co.cy)},
                                   {k.from_int(co.cz)}};
            out.notes.push_back("pure coefficient vanishes; coordinate vertex lies on the curve");
            return out;
        }
    }

    auto half = k.inv(k.from_int(2));
    auto hm = [&](const FqElement& v) { return k.mul(half, v); };
    std::vector<std::vector<FqElement>> A = {{a1, hm(a2), hm(a4)},
                                             {hm(a2), a3, hm(a5)},
                                             {hm(a4), hm(a5), a6}};
    auto detA = mat_det(k, A);

    auto four = k.from_int(4);
    auto line_disc = [&](const FqElement& u, const FqElement& v, const FqElement& w) {
        return k.sub(k.mul(four, k.mul(u, v)), k.mul(w, w));
    };
    FqElement dz = line_disc(a1, a3, a2); // line z = 0
    FqElement dy = line_disc(a1, a6, a4); // line y = 0
    FqElement dx = line_disc(a3, a6, a5); // line x = 0

    if (k.is_zero(dz) || k.is_zero(dy) || k.is_zero(dx)) {
        out.status = Smoothness::Singular;
        // kernel of the restricted 2x2 system, e.g. (a2 : -2a1 : 0) on z = 0
        FqElement Qx, Qy, Qz;
        if (k.is_zero(dz)) {
            Qx = a2;
            Qy = k.neg(k.add(a1, a1));
            Qz = k.zero();
        } else if (k.is_zero(dy)) {
            Qx = a4;
            Qy = k.zero();
            Qz = k.neg(k.add(a1, a1));
        } else {
            Qx = k.zero();
            Qy = a5;
            Qz = k.neg(k.add(a3, a3));
        }
        auto Q = make_point(k, Qx, Qy, Qz);
        out.witness = lift_singular_witness(c, Q.x, Q.y, Q.z, max_ext, table_cap);
        if (!out.witness)
            out.notes.push_back("singular point exists but its n-th-root witness needs an "
                                "extension beyond the search bound");
        out.notes.push_back("coordinate-line partial system degenerates");
        return out;
    }

    if (k.is_zero(detA)) {
        out.status = Smoothness::Singular;
        // nonzero kernel vector of A (exists since det = 0)
        FqElement Qx, Qy, Qz;
        {
            // adjugate column or direct null-space solve
            auto cof = [&](int r0, int c0, int r1, int c1) {
                return k.sub(k.mul(A[r0][c0], A[r1][c1]), k.mul(A[r0][c1], A[r1][c0]));
            };
            // try cross products of two rows
            std::vector<std::array<FqElement, 3>> cands;
            for (int r = 0; r < 3; ++r) {
                int i = (r + 1) % 3, j = (r + 2) % 3;
                cands.push_back({k.sub(k.mul(A[i][1], A[j][2]), k.mul(A[i][2], A[j][1])),
                                 k.sub(k.mul(A[i][2], A[j][0]), k.mul(A[i][0], A[j][2])),
                                 k.sub(k.mul(A[i][0], A[j][1]), k.mul(A[i][1], A[j][0]))});
            }
            (void)cof;
            bool found = false;
            for (auto& v : cands) {
                if (!k.is_zero(v[0]) || !k.is_zero(v[1]) || !k.is_zero(v[2])) {
                    Qx = v[0];
                    Qy = v[1];
                    Qz = v[2];
                    found = true;
                    break;
                }
            }
            if (!found) {
                // rank <= 1: any vector orthogonal to the single row works;
                // pick a nonzero row and complete, or the matrix is zero
                int row = -1;
                for (int r = 0; r < 3 && row < 0; ++r)
                    for (int cc = 0; cc < 3; ++cc)
                        if (!k.is_zero(A[r][cc])) {
                            row = r;
                            break;
                        }
                internal_check(row >= 0, "zero conic matrix with nonzero pure coefficients");
                // v with A[row] . v = 0
                if (!k.is_zero(A[row][0])) {
                    Qx = k.neg(A[row][1]);
                    Qy = A[row][0];
                    Qz = k.zero();
                } else {
                    Qx = k.one();
                    Qy = k.zero();
                    Qz = k.zero();
                }
                found = true;
            }
        }
        auto Q = make_point(k, Qx, Qy, Qz);
        // verify kernel property
        for (int r = 0; r < 3; ++r) {
            auto dot = k.add(k.add(k.mul(A[r][0], Q.x), k.mul(A[r][1], Q.y)), k.mul(A[r][2], Q.z));
            internal_check(k.is_zero(dot), "kernel vector of the conic matrix is wrong");
        }
        out.witness = lift_singular_witness(c, Q.x, Q.y, Q.z, max_ext, table_cap);
        if (!out.witness)
            out.notes.push_back("singular point exists but its n-th-root witness needs an "
                                "extension beyond the search bound");
        out.notes.push_back("conic matrix is degenerate");
        return out;
    }

    out.status = Smoothness::Smooth;
    return out;
}

// general-s path: stratified singular search on the companion curve
inline SmoothnessVerdict is_smooth_general(const CurveFamily& c, int max_ext, int64_t table_cap) {
    const FieldSpec& k = c.field;
    SmoothnessVerdict out;
    out.checked_extension_degree = max_ext;
    auto G = g_form(c);
    auto GP = partials(k, G);

    // corners
    struct Corner {
        int i, j;
        int cx, cy, cz;
    };
    Corner corners[3] = {{c.s, 0, 1, 0, 0}, {0, c.s, 0, 1, 0}, {0, 0, 0, 0, 1}};
    for (auto& co : corners) {
        if (k.is_zero(c.coeff(co.i, co.j))) {
            out.status = Smoothness::Singular;
            out.witness = ExtPoint{1,
                                   {k.from_int(co.cx)},
                                   {k.from_int(co.cy)},
                                   {k.from_int(co.cz)}};
            out.notes.push_back("pure coefficient vanishes; coordinate vertex lies on the curve");
            return out;
        }
    }

    bool inconclusive = false;

    // coordinate-line strata: e.g. on z = 0 need G_x = G_y = 0 with x y != 0.
    // Both restrictions are binary forms; a common nonzero root exists over
    // the closure iff their gcd (powers of the line coordinates removed) is
    // nonconstant.
    struct LineCase {
        int zero_var;
        int p1, p2;
    };
    LineCase lines[3] = {{2, 0, 1}, {1, 0, 2}, {0, 1, 2}};
    for (auto& lc : lines) {
        // restrict partial p to the line and dehomogenize in the two live vars
        auto restrict_poly = [&](const TriForm<FieldSpec>& f, int live_hi) {
            // returns coefficients of xi^d where xi = ratio of the two live vars
            UniPoly<FieldSpec> r;
            for (const auto& [e, coef] : f.terms) {
                if (e[lc.zero_var] != 0) continue;
                int d = (live_hi == 0) ? e[lc.p1] : e[lc.p2];
                if (static_cast<size_t>(d) >= r.c.size()) r.c.resize(d + 1, k.zero());
                r.c[d] = k.add(r.c[d], coef);
            }
            up_trim(k, r);
            return r;
        };
        auto A = restrict_poly(GP[lc.p1], 0);
        auto B = restrict_poly(GP[lc.p2], 0);
        UniPoly<FieldSpec> g;
        if (up_is_zero(A) && up_is_zero(B)) {
            // both partials vanish on the whole line; any nonzero ratio works
            g = UniPoly<FieldSpec>{{k.neg(k.one()), k.one()}}; // xi - 1
        } else if (up_is_zero(A)) {
            g = B;
        } else if (up_is_zero(B)) {
            g = A;
        } else {
            g = up_gcd(k, A, B);
        }
        // remove xi = 0 roots (those have a second zero coordinate; corner cases)
        while (g.c.size() > 1 && k.is_zero(g.c.front())) g.c.erase(g.c.begin());
        if (g.c.size() > 1) {
            out.status = Smoothness::Singular;
            out.notes.push_back("coordinate-line singular stratum is nonempty");
            for (int kk = 1; kk <= max_ext && !out.witness; ++kk) {
                ExtField<FieldSpec> ext(k, kk);
                UniPoly<ExtField<FieldSpec>> ge;
                for (auto& coef : g.c) ge.c.push_back(ext.from_base(coef));
                auto roots = find_roots(ext, ge);
                for (auto& xi : roots) {
                    // companion point with live_hi coordinate = xi, other = 1
                    if (kk == 1) {
                        FqElement co[3];
                        co[lc.zero_var] = k.zero();
                        co[lc.p1] = xi[0];
                        co[lc.p2] = k.one();
                        auto w = lift_singular_witness(c, co[0], co[1], co[2], max_ext, table_cap);
                        if (w) {
                            out.witness = w;
                            break;
                        }
                    }
                    // extension-root witnesses would need root extraction over a
                    // further extension tower; left unresolved here
                }
            }
            if (!out.witness)
                out.notes.push_back("singular point exists but no witness was representable "
                                    "within the search bound");
            return out;
        }
    }

    // open stratum x y z != 0: G_x = G_y = G_z = 0. Eliminate the third
    // coordinate with formal Sylvester determinants evaluated by interpolation.
    {
        if ((c.s * c.n) % static_cast<int>(k.p()) == 0 || c.n % static_cast<int>(k.p()) == 0) {
            out.notes.push_back("p divides n or the degree; open-stratum analysis skipped");
            inconclusive = true;
        } else {
            // dehomogenize at y = 1: bivariate polynomials in (x, z)
            auto to_bi = [&](const TriForm<FieldSpec>& f) {
                BiPoly<FieldSpec> r;
                for (const auto& [e, coef] : f.terms) r.terms.push_back({e[0], e[2], coef});
                return r;
            };
            BiPoly<FieldSpec> g1 = to_bi(GP[0]), g2 = to_bi(GP[1]), g3 = to_bi(GP[2]);
            auto degz = [&](const BiPoly<FieldSpec>& f) {
                int d = -1;
                for (auto& [i, j, coef] : f.terms) d = std::max(d, j);
                return d;
            };
            auto degx = [&](const BiPoly<FieldSpec>& f) {
                int d = -1;
                for (auto& [i, j, coef] : f.terms) d = std::max(d, i);
                return d;
            };
            auto is_const_nonzero = [&](const BiPoly<FieldSpec>& f) {
                auto acc = k.zero();
                for (auto& [i, j, coef] : f.terms) {
                    if (i != 0 || j != 0) return false;
                    acc = k.add(acc, coef);
                }
                return !k.is_zero(acc);
            };
            // univariate in z for fixed x
            auto z_poly = [&](const BiPoly<FieldSpec>& f, const FqElement& x0) {
                UniPoly<FieldSpec> r;
                for (const auto& [i, j, coef] : f.terms) {
                    if (static_cast<size_t>(j) >= r.c.size()) r.c.resize(j + 1, k.zero());
                    r.c[j] = k.add(r.c[j], k.mul(coef, k.pow(x0, i)));
                }
                up_trim(k, r);
                return r;
            };
            // formal resultant in z, interpolated in x
            auto formal_res = [&](const BiPoly<FieldSpec>& fa, const BiPoly<FieldSpec>& fb)
                -> std::optional<UniPoly<FieldSpec>> {
                int da = 0, db = 0, dxa = 0, dxb = 0;
                for (auto& [i, j, coef] : fa.terms) {
                    da = std::max(da, j);
                    dxa = std::max(dxa, i);
                }
                for (auto& [i, j, coef] : fb.terms) {
                    db = std::max(db, j);
                    dxb = std::max(dxb, i);
                }
                if (da == 0 || db == 0) return std::nullopt;
                int bound = da * dxb + db * dxa + 1;
                if (bound + 1 > k.q()) return std::nullopt;
                std::vector<FqElement> xs, ys;
                for (int64_t t = 0; t < bound + 1; ++t) {
                    auto x0 = k.elem_of(t);
                    auto pa = z_poly(fa, x0);
                    auto pb = z_poly(fb, x0);
                    // formal Sylvester of sizes (da, db); degree drops handled by
                    // padding with zero leading coefficients
                    pa.c.resize(da + 1, k.zero());
                    pb.c.resize(db + 1, k.zero());
                    int nmat = da + db;
                    std::vector<std::vector<FqElement>> m(nmat, std::vector<FqElement>(nmat, k.zero()));
                    for (int r = 0; r < db; ++r)
                        for (int j = 0; j <= da; ++j) m[r][r + j] = pa.c[da - j];
                    for (int r = 0; r < da; ++r)
                        for (int j = 0; j <= db; ++j) m[db + r][r + j] = pb.c[db - j];
                    xs.push_back(x0);
                    ys.push_back(mat_det(k, std::move(m)));
                }
                // Lagrange interpolation
                UniPoly<FieldSpec> acc;
                for (size_t i = 0; i < xs.size(); ++i) {
                    UniPoly<FieldSpec> term = up_const(k, ys[i]);
                    FqElement denom = k.one();
                    for (size_t j = 0; j < xs.size(); ++j) {
                        if (i == j) continue;
                        term = up_mul(k, term, UniPoly<FieldSpec>{{k.neg(xs[j]), k.one()}});
                        denom = k.mul(denom, k.sub(xs[i], xs[j]));
                    }
                    acc = up_add(k, acc, up_scale(k, k.inv(denom), term));
                }
                return acc;
            };
            // short-circuits: a nonzero-constant partial empties the stratum;
            // a partial in one chart variable pins the candidate locus
            bool handled = false;
            if (is_const_nonzero(g1) || is_const_nonzero(g2) || is_const_nonzero(g3))
                handled = true;
            if (!handled) {
                const BiPoly<FieldSpec>* pivot = nullptr;
                bool pivot_in_x = true;
                for (const BiPoly<FieldSpec>* g : {&g1, &g2, &g3}) {
                    if (degz(*g) <= 0 && degx(*g) >= 1) {
                        pivot = g;
                        pivot_in_x = true;
                        break;
                    }
                    if (degx(*g) <= 0 && degz(*g) >= 1) {
                        pivot = g;
                        pivot_in_x = false;
                        break;
                    }
                }
                if (pivot) {
                    // collect the pivot as a univariate polynomial
                    UniPoly<FieldSpec> h;
                    for (auto& [i, j, coef] : pivot->terms) {
                        int d = pivot_in_x ? i : j;
                        if (static_cast<size_t>(d) >= h.c.size()) h.c.resize(d + 1, k.zero());
                        h.c[d] = k.add(h.c[d], coef);
                    }
                    up_trim(k, h);
                    while (h.c.size() > 1 && k.is_zero(h.c.front())) h.c.erase(h.c.begin());
                    if (h.c.size() <= 1) {
                        handled = true; // only the excluded coordinate-zero root
                    } else {
                        bool exhaustive = up_deg(k, h) <= max_ext;
                        for (int kk = 1; kk <= max_ext && !handled; ++kk) {
                            ExtField<FieldSpec> ext(k, kk);
                            UniPoly<ExtField<FieldSpec>> he;
                            for (auto& coef : h.c) he.c.push_back(ext.from_base(coef));
                            for (auto& r0 : find_roots(ext, he)) {
                                if (ext.is_zero(r0)) continue;
                                // remaining partials as polynomials in the other variable
                                auto other_poly = [&](const BiPoly<FieldSpec>& f) {
                                    UniPoly<ExtField<FieldSpec>> r;
                                    for (const auto& [i, j, coef] : f.terms) {
                                        int fixed = pivot_in_x ? i : j;
                                        int live = pivot_in_x ? j : i;
                                        if (static_cast<size_t>(live) >= r.c.size())
                                            r.c.resize(live + 1, ext.zero());
                                        r.c[live] = ext.add(
                                            r.c[live],
                                            ext.mul(ext.from_base(coef), ext.pow(r0, fixed)));
                                    }
                                    up_trim(ext, r);
                                    return r;
                                };
                                // gcd of every non-pivot constraint at this root
                                UniPoly<ExtField<FieldSpec>> zg;
                                bool impossible = false, first = true;
                                for (const BiPoly<FieldSpec>* g : {&g1, &g2, &g3}) {
                                    if (g == pivot) continue;
                                    auto gp = other_poly(*g);
                                    if (up_is_zero(gp)) continue;
                                    if (up_deg(ext, gp) == 0) {
                                        impossible = true;
                                        break;
                                    }
                                    zg = first ? gp : up_gcd(ext, zg, gp);
                                    first = false;
                                }
                                if (impossible) continue;
                                if (first) {
                                    // every other constraint vanished identically
                                    zg = UniPoly<ExtField<FieldSpec>>{
                                        {ext.neg(ext.one()), ext.one()}};
                                }
                                while (zg.c.size() > 1 && ext.is_zero(zg.c.front()))
                                    zg.c.erase(zg.c.begin());
                                if (zg.c.size() <= 1) continue;
                                out.status = Smoothness::Singular;
                                out.notes.push_back("open-stratum singular point found");
                                if (kk == 1) {
                                    for (auto& s0 : find_roots(ext, zg)) {
                                        if (ext.is_zero(s0)) continue;
                                        auto xw = pivot_in_x ? r0[0] : s0[0];
                                        auto zw = pivot_in_x ? s0[0] : r0[0];
                                        auto w = lift_singular_witness(c, xw, k.one(), zw,
                                                                       max_ext, table_cap);
                                        if (w) {
                                            out.witness = w;
                                            break;
                                        }
                                    }
                                }
                                if (!out.witness)
                                    out.notes.push_back(
                                        "singular point exists but no witness was representable "
                                        "within the search bound");
                                return out;
                            }
                        }
                        if (!handled && !exhaustive) {
                            out.notes.push_back(
                                "open-stratum pivot roots extend beyond the search bound");
                            inconclusive = true;
                        }
                        handled = true;
                    }
                }
            }
            auto r1 = handled ? std::nullopt : formal_res(g1, g2);
            auto r2 = handled ? std::nullopt : formal_res(g1, g3);
            if (handled) {
                // decided above
            } else if (!r1 || !r2 || up_is_zero(*r1) || up_is_zero(*r2)) {
                out.notes.push_back("open-stratum elimination degenerated");
                inconclusive = true;
            } else {
                auto g = up_gcd(k, *r1, *r2);
                while (g.c.size() > 1 && k.is_zero(g.c.front())) g.c.erase(g.c.begin());
                if (g.c.size() <= 1) {
                    // no common x-candidate anywhere over the closure
                } else {
                    // every root of g lies in an extension of degree <= deg g,
                    // so the search is exhaustive when max_ext covers that
                    bool resolved_all = up_deg(k, g) <= max_ext;
                    for (int kk = 1; kk <= max_ext; ++kk) {
                        ExtField<FieldSpec> ext(k, kk);
                        UniPoly<ExtField<FieldSpec>> ge;
                        for (auto& coef : g.c) ge.c.push_back(ext.from_base(coef));
                        auto roots = find_roots(ext, ge);
                        for (auto& x0 : roots) {
                            if (ext.is_zero(x0)) continue;
                            // z-system at x = x0; a nonconstant gcd (z-power
                            // factors removed) certifies a singular point over
                            // the closure even when its z is out of reach
                            auto zp = [&](const BiPoly<FieldSpec>& f) {
                                UniPoly<ExtField<FieldSpec>> r;
                                for (const auto& [i, j, coef] : f.terms) {
                                    if (static_cast<size_t>(j) >= r.c.size())
                                        r.c.resize(j + 1, ext.zero());
                                    r.c[j] = ext.add(r.c[j],
                                                     ext.mul(ext.from_base(coef), ext.pow(x0, i)));
                                }
                                up_trim(ext, r);
                                return r;
                            };
                            auto zg = up_gcd(ext, up_gcd(ext, zp(g1), zp(g2)), zp(g3));
                            while (zg.c.size() > 1 && ext.is_zero(zg.c.front()))
                                zg.c.erase(zg.c.begin());
                            if (zg.c.size() <= 1) continue;
                            out.status = Smoothness::Singular;
                            out.notes.push_back("open-stratum singular point found");
                            if (kk == 1) {
                                for (auto& z0 : find_roots(ext, zg)) {
                                    if (ext.is_zero(z0)) continue;
                                    auto w = lift_singular_witness(c, x0[0], k.one(), z0[0],
                                                                   max_ext, table_cap);
                                    if (w) {
                                        out.witness = w;
                                        break;
                                    }
                                }
                            }
                            if (!out.witness)
                                out.notes.push_back(
                                    "singular point exists but no witness was representable "
                                    "within the search bound");
                            return out;
                        }
                    }
                    if (!resolved_all) {
                        out.notes.push_back("open-stratum candidates extend beyond the search bound");
                        inconclusive = true;
                    }
                }
            }
        }
    }

    out.status = inconclusive ? Smoothness::Inconclusive : Smoothness::Smooth;
    return out;
}

} // namespace detail

inline SmoothnessVerdict is_smooth(const CurveFamily& c, int max_ext, int64_t table_cap) {
    const FieldSpec& k = c.field;
    if (k.p() == 2) {
        SmoothnessVerdict out;
        out.notes.push_back("characteristic 2 is outside the supported hypotheses");
        return out;
    }
    if (c.n % k.p() == 0) {
        SmoothnessVerdict out;
        out.notes.push_back("p divides n; the defining form has identically vanishing partials");
        return out;
    }
    if (c.s == 2) return detail::is_smooth_s2(c, max_ext, table_cap);
    return detail::is_smooth_general(c, max_ext, table_cap);
}

} // namespace frobcurves

#endif
