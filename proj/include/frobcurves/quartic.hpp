#ifndef FROBCURVES_QUARTIC_HPP
#define FROBCURVES_QUARTIC_HPP

#include <optional>
#include <utility>

#include "errors.hpp"
#include "extfield.hpp"
#include "gf.hpp"
#include "poly.hpp"

namespace frobcurves {

// ---------------------------------------------------------------------------
// The two special quartic families, char != 2 throughout.
// ---------------------------------------------------------------------------

// a (xy)^2 + b (xz)^2 + c (yz)^2 + xyz (d x + e y + f z)
struct QuarticSym {
    FieldSpec field;
    FqElement a, b, c, d, e, f;
};

inline QuarticSym make_quartic_sym(const FieldSpec& k, const FqElement& a, const FqElement& b,
                                   const FqElement& c, const FqElement& d, const FqElement& e,
                                   const FqElement& f) {
    if (k.p() == 2) throw Error("DegreeMismatch", "the quartic families need characteristic != 2");
    if (k.is_zero(a) && k.is_zero(b) && k.is_zero(c) && k.is_zero(d) && k.is_zero(e) &&
        k.is_zero(f))
        throw Error("ZeroForm", "all six quartic coefficients are zero");
    return QuarticSym{k, a, b, c, d, e, f};
}

// ((x+y+z)^2 - b^2 xy - d^2 xz + e^2 yz)^2 - 4 ((bd-e)x - ey - ez)^2 yz
struct QuarticBDE {
    FieldSpec field;
    FqElement b, d, e;
};

inline QuarticBDE make_quartic_bde(const FieldSpec& k, const FqElement& b, const FqElement& d,
                                   const FqElement& e) {
    if (k.p() == 2) throw Error("DegreeMismatch", "the quartic families need characteristic != 2");
    if (k.is_zero(b) && k.is_zero(d) && k.is_zero(e))
        throw Error("AllZero", "b, d, e must not all vanish");
    return QuarticBDE{k, b, d, e};
}

// Irreducibility through the standard Cremona transformation: the quartic is
// the Cremona image of the conic a x^2 + b y^2 + c z^2 + d xy + e xz + f yz,
// so it is irreducible iff abc . det[[a,d/2,e/2],[d/2,b,f/2],[e/2,f/2,c]] != 0.
inline bool cremona_irreducible(const QuarticSym& s) {
    const auto& k = s.field;
    auto half = k.inv(k.from_int(2));
    std::vector<std::vector<FqElement>> m = {
        {s.a, k.mul(half, s.d), k.mul(half, s.e)},
        {k.mul(half, s.d), s.b, k.mul(half, s.f)},
        {k.mul(half, s.e), k.mul(half, s.f), s.c}};
    auto det = mat_det(k, m);
    auto abc = k.mul(s.a, k.mul(s.b, s.c));
    return !k.is_zero(k.mul(abc, det));
}

namespace detail {

template <class F>
TriForm<F> bde_expand(const F& k, const typename F::Elem& b, const typename F::Elem& d,
                      const typename F::Elem& e, bool alternative) {
    // the defining expansion and its symmetric rewriting
    TriForm<F> L;
    L.degree = 1;
    tf_set(k, L, 1, 0, 0, k.one());
    tf_set(k, L, 0, 1, 0, k.one());
    tf_set(k, L, 0, 0, 1, k.one());
    auto L2 = tf_mul(k, L, L);
    auto sq = [&](const typename F::Elem& v) { return k.mul(v, v); };

    TriForm<F> quad = L2;
    TriForm<F> lin;
    lin.degree = 1;
    TriForm<F> mono;
    mono.degree = 2;
    if (!alternative) {
        // (x+y+z)^2 - b^2 xy - d^2 xz + e^2 yz, and ((bd-e)x - ey - ez)^2 yz
        tf_set(k, mono, 1, 1, 0, k.neg(sq(b)));
        quad = tf_add(k, quad, mono);
        mono.terms.clear();
        tf_set(k, mono, 1, 0, 1, k.neg(sq(d)));
        quad = tf_add(k, quad, mono);
        mono.terms.clear();
        tf_set(k, mono, 0, 1, 1, sq(e));
        quad = tf_add(k, quad, mono);
        tf_set(k, lin, 1, 0, 0, k.sub(k.mul(b, d), e));
        tf_set(k, lin, 0, 1, 0, k.neg(e));
        tf_set(k, lin, 0, 0, 1, k.neg(e));
    } else {
        // (x+y+z)^2 - e^2 yz - d^2 xz + b^2 xy, and ((ed-b)z - by - bx)^2 xy
        tf_set(k, mono, 0, 1, 1, k.neg(sq(e)));
        quad = tf_add(k, quad, mono);
        mono.terms.clear();
        tf_set(k, mono, 1, 0, 1, k.neg(sq(d)));
        quad = tf_add(k, quad, mono);
        mono.terms.clear();
        tf_set(k, mono, 1, 1, 0, sq(b));
        quad = tf_add(k, quad, mono);
        tf_set(k, lin, 0, 0, 1, k.sub(k.mul(e, d), b));
        tf_set(k, lin, 0, 1, 0, k.neg(b));
        tf_set(k, lin, 1, 0, 0, k.neg(b));
    }
    auto first = tf_mul(k, quad, quad);
    auto lin2 = tf_mul(k, lin, lin);
    TriForm<F> cross;
    cross.degree = 2;
    if (!alternative) tf_set(k, cross, 0, 1, 1, k.from_int(-4));
    else tf_set(k, cross, 1, 1, 0, k.from_int(-4));
    return tf_add(k, first, tf_mul(k, lin2, cross));
}

} // namespace detail

// Expands the defining equation into a quartic form; the symmetric rewriting
// must produce the same polynomial, which is asserted here.
inline TriForm<FieldSpec> bde_build_form(const QuarticBDE& qd) {
    const auto& k = qd.field;
    auto main = detail::bde_expand(k, qd.b, qd.d, qd.e, false);
    auto alt = detail::bde_expand(k, qd.b, qd.d, qd.e, true);
    internal_check(tf_eq(k, main, alt), "the two quartic expansions disagree");
    tf_validate(k, main);
    return main;
}

// Reducible iff at least two of b, d, e vanish or b^2 + d^2 + e^2 - bde = 4.
inline bool bde_reducible(const QuarticBDE& qd) {
    const auto& k = qd.field;
    int zeros = (k.is_zero(qd.b) ? 1 : 0) + (k.is_zero(qd.d) ? 1 : 0) + (k.is_zero(qd.e) ? 1 : 0);
    if (zeros >= 2) return true;
    auto lhs = k.add(k.add(k.mul(qd.b, qd.b), k.mul(qd.d, qd.d)), k.mul(qd.e, qd.e));
    lhs = k.sub(lhs, k.mul(qd.b, k.mul(qd.d, qd.e)));
    return k.eq(lhs, k.from_int(4));
}

// On the two-zeros branch the quartic is a perfect square; returns the
// quadratic whose square it is.
inline std::optional<TriForm<FieldSpec>> bde_two_zero_square(const QuarticBDE& qd) {
    const auto& k = qd.field;
    int zeros = (k.is_zero(qd.b) ? 1 : 0) + (k.is_zero(qd.d) ? 1 : 0) + (k.is_zero(qd.e) ? 1 : 0);
    if (zeros < 2) return std::nullopt;
    TriForm<FieldSpec> L;
    L.degree = 1;
    tf_set(k, L, 1, 0, 0, k.one());
    tf_set(k, L, 0, 1, 0, k.one());
    tf_set(k, L, 0, 0, 1, k.one());
    auto quad = tf_mul(k, L, L);
    TriForm<FieldSpec> mono;
    mono.degree = 2;
    auto sq = [&](const FqElement& v) { return k.mul(v, v); };
    if (!k.is_zero(qd.b)) tf_set(k, mono, 1, 1, 0, k.neg(sq(qd.b)));
    else if (!k.is_zero(qd.d)) tf_set(k, mono, 1, 0, 1, k.neg(sq(qd.d)));
    else tf_set(k, mono, 0, 1, 1, k.neg(sq(qd.e)));
    quad = tf_add(k, quad, mono);
    internal_check(tf_eq(k, tf_mul(k, quad, quad), bde_build_form(qd)),
                   "two-zeros branch is not a perfect square");
    return quad;
}

// Constructive factorization on the "= 4" branch: with b = u + 1/u,
// e = v + 1/v and t in {uv, u/v} chosen so that d = t + 1/t, the quartic
// splits as H(x, u^2 y, t^2 z) . H(x, y/u^2, z/t^2) with
// H = x^2 + y^2 + z^2 - 2(xy + xz + yz). Roots are taken in F_{q^2}, and the
// product identity is asserted coefficient-wise over that extension.
struct BdeFactorization {
    int ext_degree = 2;
    TriForm<ExtField<FieldSpec>> factor_a, factor_b;
};

inline std::optional<BdeFactorization> bde_verify_factorization(const QuarticBDE& qd) {
    const auto& k = qd.field;
    auto rel = k.sub(k.add(k.add(k.mul(qd.b, qd.b), k.mul(qd.d, qd.d)), k.mul(qd.e, qd.e)),
                     k.mul(qd.b, k.mul(qd.d, qd.e)));
    if (!k.eq(rel, k.from_int(4)))
        throw Error("PreconditionFails", "b^2 + d^2 + e^2 - bde = 4 is required");

    ExtField<FieldSpec> ext(k, 2);
    auto B = ext.from_base(qd.b), D = ext.from_base(qd.d), E = ext.from_base(qd.e);
    auto quad_root = [&](const typename ExtField<FieldSpec>::Elem& s) {
        // root of T^2 - s T + 1 over the quadratic extension (always splits)
        UniPoly<ExtField<FieldSpec>> p{{ext.one(), ext.neg(s), ext.one()}};
        auto roots = find_roots(ext, p);
        internal_check(!roots.empty(), "T^2 - sT + 1 must split over the quadratic extension");
        return roots.front();
    };
    auto u = quad_root(B);
    auto v = quad_root(E);
    auto matches_d = [&](const typename ExtField<FieldSpec>::Elem& t) {
        return ext.eq(ext.add(t, ext.inv(t)), D);
    };
    typename ExtField<FieldSpec>::Elem t;
    if (matches_d(ext.mul(u, v))) t = ext.mul(u, v);
    else if (matches_d(ext.div(u, v))) t = ext.div(u, v);
    else throw Error("NoConsistentT", "neither uv nor u/v satisfies d = t + 1/t");

    // H(x, alpha y, beta z) for H = x^2+y^2+z^2-2(xy+xz+yz)
    auto h_scaled = [&](const typename ExtField<FieldSpec>::Elem& alpha,
                        const typename ExtField<FieldSpec>::Elem& beta) {
        TriForm<ExtField<FieldSpec>> h;
        h.degree = 2;
        auto m2 = ext.from_int(-2);
        tf_set(ext, h, 2, 0, 0, ext.one());
        tf_set(ext, h, 0, 2, 0, ext.mul(alpha, alpha));
        tf_set(ext, h, 0, 0, 2, ext.mul(beta, beta));
        tf_set(ext, h, 1, 1, 0, ext.mul(m2, alpha));
        tf_set(ext, h, 1, 0, 1, ext.mul(m2, beta));
        tf_set(ext, h, 0, 1, 1, ext.mul(m2, ext.mul(alpha, beta)));
        return h;
    };
    auto u2 = ext.mul(u, u), t2 = ext.mul(t, t);
    BdeFactorization out;
    out.factor_a = h_scaled(u2, t2);
    out.factor_b = h_scaled(ext.inv(u2), ext.inv(t2));

    auto target = detail::bde_expand(ext, B, D, E, false);
    internal_check(tf_eq(ext, tf_mul(ext, out.factor_a, out.factor_b), target),
                   "factor product does not reproduce the quartic");
    return out;
}

// Collinearity of the three marked points, computed both as the coordinate
// determinant and by the closed condition bde (b^2 + d^2 + e^2 - bde) = 0;
// the two must agree. Degenerate triples (a repeated or zero row) count as
// collinear under both readings.
inline bool bde_collinear_diagnostic(const QuarticBDE& qd) {
    const auto& k = qd.field;
    auto sq = [&](const FqElement& v) { return k.mul(v, v); };
    auto bde = k.mul(qd.b, k.mul(qd.d, qd.e));
    FqElement b2 = sq(qd.b), d2 = sq(qd.d), e2 = sq(qd.e);
    std::vector<std::vector<FqElement>> m = {
        {e2, d2, k.sub(bde, k.add(d2, e2))},
        {e2, k.sub(bde, k.add(b2, e2)), b2},
        {k.sub(bde, k.add(d2, b2)), d2, b2}};
    bool by_det = k.is_zero(mat_det(k, m));
    auto rel = k.sub(k.add(k.add(b2, d2), e2), bde);
    bool by_condition = k.is_zero(k.mul(bde, rel));
    internal_check(by_det == by_condition,
                   "coordinate determinant disagrees with the closed collinearity condition");
    return by_det;
}

} // namespace frobcurves

#endif
