#ifndef FROBCURVES_POLY_HPP
#define FROBCURVES_POLY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"

namespace frobcurves {

// ---------------------------------------------------------------------------
// Univariate polynomials over a field F (duck-typed: F supplies Elem, zero,
// one, add, sub, mul, neg, inv, pow, is_zero, eq, element_count, elem_of).
// Coefficients constant-term first; the vector is kept trimmed, so the zero
// polynomial is the empty vector and degree() is only defined when nonzero.
// ---------------------------------------------------------------------------

template <class F>
struct UniPoly {
    std::vector<typename F::Elem> c;
};

template <class F>
bool up_is_zero(const UniPoly<F>& a) { return a.c.empty(); }

template <class F>
int up_deg(const UniPoly<F>& a) {
    internal_check(!a.c.empty(), "degree of the zero polynomial is undefined");
    return static_cast<int>(a.c.size()) - 1;
}

template <class F>
void up_trim(const F& k, UniPoly<F>& a) {
    while (!a.c.empty() && k.is_zero(a.c.back())) a.c.pop_back();
}

template <class F>
UniPoly<F> up_const(const F& k, const typename F::Elem& e) {
    UniPoly<F> r;
    if (!k.is_zero(e)) r.c.push_back(e);
    return r;
}

template <class F>
UniPoly<F> up_x(const F& k) {
    return UniPoly<F>{{k.zero(), k.one()}};
}

template <class F>
bool up_eq(const F& k, const UniPoly<F>& a, const UniPoly<F>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (size_t i = 0; i < a.c.size(); ++i)
        if (!k.eq(a.c[i], b.c[i])) return false;
    return true;
}

template <class F>
UniPoly<F> up_add(const F& k, const UniPoly<F>& a, const UniPoly<F>& b) {
    UniPoly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), k.zero());
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = k.add(r.c[i], b.c[i]);
    up_trim(k, r);
    return r;
}

template <class F>
UniPoly<F> up_neg(const F& k, const UniPoly<F>& a) {
    UniPoly<F> r = a;
    for (auto& x : r.c) x = k.neg(x);
    return r;
}

template <class F>
UniPoly<F> up_sub(const F& k, const UniPoly<F>& a, const UniPoly<F>& b) {
    return up_add(k, a, up_neg(k, b));
}

template <class F>
UniPoly<F> up_mul(const F& k, const UniPoly<F>& a, const UniPoly<F>& b) {
    if (a.c.empty() || b.c.empty()) return {};
    UniPoly<F> r;
    r.c.assign(a.c.size() + b.c.size() - 1, k.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (k.is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = k.add(r.c[i + j], k.mul(a.c[i], b.c[j]));
    }
    up_trim(k, r);
    return r;
}

template <class F>
UniPoly<F> up_scale(const F& k, const typename F::Elem& s, const UniPoly<F>& a) {
    UniPoly<F> r = a;
    for (auto& x : r.c) x = k.mul(s, x);
    up_trim(k, r);
    return r;
}

// quotient/remainder, divisor nonzero
template <class F>
std::pair<UniPoly<F>, UniPoly<F>> up_divmod(const F& k, UniPoly<F> a, const UniPoly<F>& b) {
    internal_check(!b.c.empty(), "division by zero polynomial");
    UniPoly<F> q;
    if (a.c.size() < b.c.size()) return {q, a};
    auto lead_inv = k.inv(b.c.back());
    q.c.assign(a.c.size() - b.c.size() + 1, k.zero());
    for (int i = static_cast<int>(a.c.size()) - static_cast<int>(b.c.size()); i >= 0; --i) {
        typename F::Elem coef = k.mul(a.c[i + b.c.size() - 1], lead_inv);
        if (k.is_zero(coef)) continue;
        q.c[i] = coef;
        for (size_t j = 0; j < b.c.size(); ++j)
            a.c[i + j] = k.sub(a.c[i + j], k.mul(coef, b.c[j]));
    }
    up_trim(k, a);
    up_trim(k, q);
    return {q, a};
}

template <class F>
UniPoly<F> up_mod(const F& k, const UniPoly<F>& a, const UniPoly<F>& b) {
    return up_divmod(k, a, b).second;
}

template <class F>
UniPoly<F> up_monic(const F& k, UniPoly<F> a) {
    if (a.c.empty()) return a;
    auto inv = k.inv(a.c.back());
    for (auto& x : a.c) x = k.mul(inv, x);
    return a;
}

// monic gcd
template <class F>
UniPoly<F> up_gcd(const F& k, UniPoly<F> a, UniPoly<F> b) {
    while (!b.c.empty()) {
        a = up_mod(k, a, b);
        std::swap(a, b);
    }
    return up_monic(k, a);
}

template <class F>
typename F::Elem up_eval(const F& k, const UniPoly<F>& a, const typename F::Elem& x) {
    typename F::Elem r = k.zero();
    for (size_t i = a.c.size(); i-- > 0;) r = k.add(k.mul(r, x), a.c[i]);
    return r;
}

template <class F>
UniPoly<F> up_pow(const F& k, UniPoly<F> base, uint64_t e) {
    UniPoly<F> r = up_const(k, k.one());
    while (e > 0) {
        if (e & 1) r = up_mul(k, r, base);
        base = up_mul(k, base, base);
        e >>= 1;
    }
    return r;
}

template <class F>
UniPoly<F> up_powmod(const F& k, UniPoly<F> base, uint64_t e, const UniPoly<F>& m) {
    UniPoly<F> r = up_const(k, k.one());
    base = up_mod(k, base, m);
    while (e > 0) {
        if (e & 1) r = up_mod(k, up_mul(k, r, base), m);
        base = up_mod(k, up_mul(k, base, base), m);
        e >>= 1;
    }
    return r;
}

// Rabin irreducibility over an arbitrary coefficient field.
template <class F>
bool up_irreducible(const F& k, const UniPoly<F>& f) {
    if (f.c.size() < 2) return false;
    int d = up_deg(k, f);
    if (d == 1) return true;
    uint64_t Q = static_cast<uint64_t>(k.element_count());
    auto xq_tower = [&](int steps) {
        UniPoly<F> cur = up_x(k);
        for (int i = 0; i < steps; ++i) cur = up_powmod(k, cur, Q, f);
        return cur;
    };
    UniPoly<F> top = up_sub(k, xq_tower(d), up_x(k));
    if (!up_is_zero(up_mod(k, top, f))) return false;
    for (int64_t r : detail::prime_factors(d)) {
        UniPoly<F> diff = up_sub(k, xq_tower(d / static_cast<int>(r)), up_x(k));
        auto g = up_gcd(k, diff, f);
        if (!g.c.empty() && up_deg(k, g) > 0) return false;
    }
    return true;
}

template <class F>
int up_deg(const F&, const UniPoly<F>& a) {
    internal_check(!a.c.empty(), "degree of the zero polynomial is undefined");
    return static_cast<int>(a.c.size()) - 1;
}

// ---------------------------------------------------------------------------
// Resultants and determinants
// ---------------------------------------------------------------------------

// Exact determinant by Gaussian elimination with pivoting.
template <class F>
typename F::Elem mat_det(const F& k, std::vector<std::vector<typename F::Elem>> m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw Error("NotSquare", "determinant of a non-square matrix");
    typename F::Elem det = k.one();
    bool negate = false;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && k.is_zero(m[piv][col])) ++piv;
        if (piv == n) return k.zero();
        if (piv != col) {
            std::swap(m[piv], m[col]);
            negate = !negate;
        }
        det = k.mul(det, m[col][col]);
        auto inv = k.inv(m[col][col]);
        for (size_t r = col + 1; r < n; ++r) {
            if (k.is_zero(m[r][col])) continue;
            auto factor = k.mul(m[r][col], inv);
            for (size_t c = col; c < n; ++c)
                m[r][c] = k.sub(m[r][c], k.mul(factor, m[col][c]));
        }
    }
    return negate ? k.neg(det) : det;
}

// Sylvester resultant. Convention: a's coefficients fill the first deg(b)
// rows (descending powers), so resultant(x-a, x-b) = a - b.
template <class F>
typename F::Elem resultant(const F& k, const UniPoly<F>& a, const UniPoly<F>& b) {
    if (up_is_zero(a) && up_is_zero(b)) throw Error("BothZero", "resultant of two zero polynomials");
    if (up_is_zero(a) || up_is_zero(b)) return k.zero();
    const int da = up_deg(k, a), db = up_deg(k, b);
    if (da == 0) return k.pow(a.c[0], static_cast<uint64_t>(db));
    if (db == 0) return k.pow(b.c[0], static_cast<uint64_t>(da));
    const int n = da + db;
    std::vector<std::vector<typename F::Elem>> m(n, std::vector<typename F::Elem>(n, k.zero()));
    for (int r = 0; r < db; ++r)
        for (int j = 0; j <= da; ++j) m[r][r + j] = a.c[da - j];
    for (int r = 0; r < da; ++r)
        for (int j = 0; j <= db; ++j) m[db + r][r + j] = b.c[db - j];
    return mat_det(k, std::move(m));
}

// y^l - b1(x) divides y^m - b2(x) iff l | m and b2 = b1^{m/l}; decided by that
// criterion, no bivariate division is performed.
template <class F>
bool binomial_divides(const F& k, uint64_t l, const UniPoly<F>& b1, uint64_t m, const UniPoly<F>& b2) {
    if (b1.c.size() < 2 || b2.c.size() < 2)
        throw Error("ConstantInput", "binomial divisibility requires nonconstant b1, b2");
    internal_check(l >= 1 && m >= 1, "binomial exponents must be positive");
    if (m % l != 0) return false;
    return up_eq(k, b2, up_pow(k, b1, m / l));
}

// ---------------------------------------------------------------------------
// Root finding (deterministic: splitting elements come from a seeded LCG)
// ---------------------------------------------------------------------------

namespace detail {

struct SplitRng {
    uint64_t state;
    explicit SplitRng(uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}
    uint64_t next() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return state >> 11;
    }
};

template <class F>
void split_all_linear(const F& k, const UniPoly<F>& r, SplitRng& rng,
                      std::vector<typename F::Elem>& out) {
    if (r.c.size() < 2) return;
    if (r.c.size() == 2) {
        // monic normalization -> root = -c0/c1
        out.push_back(k.neg(k.mul(r.c[0], k.inv(r.c[1]))));
        return;
    }
    uint64_t Q = static_cast<uint64_t>(k.element_count());
    for (int attempt = 0; attempt < 256; ++attempt) {
        auto rho = k.elem_of(static_cast<int64_t>(rng.next() % Q));
        UniPoly<F> shift{{rho, k.one()}};
        auto h = up_powmod(k, shift, (Q - 1) / 2, r);
        h = up_sub(k, h, up_const(k, k.one()));
        auto g = up_gcd(k, h, r);
        if (g.c.empty() || up_deg(k, g) == 0 || g.c.size() == r.c.size()) continue;
        auto [quot, rem] = up_divmod(k, r, g);
        internal_check(up_is_zero(rem), "equal-degree split must divide exactly");
        split_all_linear(k, g, rng, out);
        split_all_linear(k, quot, rng, out);
        return;
    }
    throw Error("InternalAssertion", "root splitting failed to converge", ErrClass::internal);
}

} // namespace detail

// All roots of f in the coefficient field (p odd), sorted by element index.
template <class F>
std::vector<typename F::Elem> find_roots(const F& k, const UniPoly<F>& f) {
    std::vector<typename F::Elem> out;
    if (up_is_zero(f) || up_deg(k, f) == 0) return out;
    uint64_t Q = static_cast<uint64_t>(k.element_count());
    internal_check(Q % 2 == 1, "root finding requires odd characteristic");
    auto xq = up_powmod(k, up_x(k), Q, f);
    auto r = up_gcd(k, up_sub(k, xq, up_x(k)), f);
    if (r.c.empty() || up_deg(k, r) == 0) return out;
    detail::SplitRng rng(Q * 1315423911ull + f.c.size());
    detail::split_all_linear(k, r, rng, out);
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return k.index_of(a) < k.index_of(b);
    });
    return out;
}

// All n-th roots of beta in the field. Exploits the binomial modulus:
// x^Q mod (x^n - beta) = beta^{Q/n} x^{Q mod n}, so no generic modular
// exponentiation is needed to split off the rational roots.
template <class F>
std::vector<typename F::Elem> find_roots_binomial(const F& k, uint64_t n,
                                                  const typename F::Elem& beta) {
    std::vector<typename F::Elem> out;
    internal_check(n >= 1, "root order must be positive");
    if (k.is_zero(beta)) {
        out.push_back(k.zero());
        return out;
    }
    uint64_t Q = static_cast<uint64_t>(k.element_count());
    internal_check(Q % 2 == 1, "root finding requires odd characteristic");
    UniPoly<F> binom;
    binom.c.resize(n + 1, k.zero());
    binom.c[0] = k.neg(beta);
    binom.c[n] = k.one();
    // x^Q - x reduced modulo the binomial
    UniPoly<F> xq;
    xq.c.resize((Q % n) + 1, k.zero());
    xq.c[Q % n] = k.pow(beta, Q / n);
    UniPoly<F> xp{{k.zero(), k.one()}};
    auto r = up_gcd(k, up_sub(k, xq, xp), binom);
    if (r.c.empty() || up_deg(k, r) == 0) return out;
    detail::SplitRng rng(Q * 2654435761ull + n);
    detail::split_all_linear(k, r, rng, out);
    std::sort(out.begin(), out.end(),
              [&](const auto& a, const auto& b) { return k.index_of(a) < k.index_of(b); });
    return out;
}

// Square roots of a (0, 1 or 2 of them), p odd.
template <class F>
std::vector<typename F::Elem> sqrt_elem(const F& k, const typename F::Elem& a) {
    if (k.is_zero(a)) return {k.zero()};
    UniPoly<F> f{{k.neg(a), k.zero(), k.one()}};
    return find_roots(k, f);
}

// ---------------------------------------------------------------------------
// Truncated power series: coefficients of t^0..t^K; arithmetic never reads
// beyond index K.
// ---------------------------------------------------------------------------

template <class F>
struct PowerSeries {
    int K = 0;
    std::vector<typename F::Elem> a; // size K+1

    static PowerSeries zero(const F& k, int K) {
        return PowerSeries{K, std::vector<typename F::Elem>(K + 1, k.zero())};
    }
};

template <class F>
PowerSeries<F> ps_truncate(const PowerSeries<F>& s, int K) {
    internal_check(K <= s.K, "cannot extend a series by truncation");
    PowerSeries<F> r;
    r.K = K;
    r.a.assign(s.a.begin(), s.a.begin() + K + 1);
    return r;
}

template <class F>
PowerSeries<F> ps_add(const F& k, const PowerSeries<F>& x, const PowerSeries<F>& y) {
    int K = std::min(x.K, y.K);
    auto r = PowerSeries<F>::zero(k, K);
    for (int i = 0; i <= K; ++i) r.a[i] = k.add(x.a[i], y.a[i]);
    return r;
}

template <class F>
PowerSeries<F> ps_scale(const F& k, const typename F::Elem& s, const PowerSeries<F>& x) {
    auto r = x;
    for (auto& v : r.a) v = k.mul(s, v);
    return r;
}

template <class F>
PowerSeries<F> ps_mul(const F& k, const PowerSeries<F>& x, const PowerSeries<F>& y, int K) {
    auto r = PowerSeries<F>::zero(k, K);
    for (int i = 0; i <= std::min(K, x.K); ++i) {
        if (k.is_zero(x.a[i])) continue;
        int jmax = std::min(K - i, y.K);
        for (int j = 0; j <= jmax; ++j)
            r.a[i + j] = k.add(r.a[i + j], k.mul(x.a[i], y.a[j]));
    }
    return r;
}

template <class F>
PowerSeries<F> ps_pow(const F& k, const PowerSeries<F>& x, uint64_t e, int K) {
    auto r = PowerSeries<F>::zero(k, K);
    r.a[0] = k.one();
    auto base = ps_truncate(x, std::min(K, x.K));
    if (base.K < K) {
        base.a.resize(K + 1, k.zero());
        base.K = K;
    }
    while (e > 0) {
        if (e & 1) r = ps_mul(k, r, base, K);
        base = ps_mul(k, base, base, K);
        e >>= 1;
    }
    return r;
}

// order of vanishing: index of the first nonzero coefficient, K+1 if none
template <class F>
int ps_order(const F& k, const PowerSeries<F>& s) {
    for (int i = 0; i <= s.K; ++i)
        if (!k.is_zero(s.a[i])) return i;
    return s.K + 1;
}

// i-th coefficient of the product series (Hasse derivative of a product as a
// convolution of the factors' Hasse derivatives).
template <class F>
typename F::Elem hasse_product(const F& k, const PowerSeries<F>& x, const PowerSeries<F>& y, int i) {
    if (i > x.K || i > y.K)
        throw Error("OrderExceedsTruncation", "requested order exceeds series truncation");
    typename F::Elem r = k.zero();
    for (int j = 0; j <= i; ++j) r = k.add(r, k.mul(x.a[j], y.a[i - j]));
    return r;
}

// ---------------------------------------------------------------------------
// Homogeneous trivariate forms (sparse) and bivariate polynomials
// ---------------------------------------------------------------------------

template <class F>
struct TriForm {
    int degree = 0;
    std::map<std::array<int, 3>, typename F::Elem> terms; // (i,j,t) -> coeff, i+j+t = degree
};

template <class F>
void tf_set(const F& k, TriForm<F>& f, int i, int j, int t, const typename F::Elem& c) {
    internal_check(i >= 0 && j >= 0 && t >= 0 && i + j + t == f.degree,
                   "term exponents must sum to the form degree");
    if (k.is_zero(c)) f.terms.erase({i, j, t});
    else f.terms[{i, j, t}] = c;
}

template <class F>
typename F::Elem tf_coeff(const F& k, const TriForm<F>& f, int i, int j, int t) {
    auto it = f.terms.find({i, j, t});
    return it == f.terms.end() ? k.zero() : it->second;
}

template <class F>
bool tf_is_zero(const TriForm<F>& f) { return f.terms.empty(); }

template <class F>
void tf_validate(const F& k, const TriForm<F>& f) {
    if (f.degree < 1) throw Error("ZeroForm", "form degree must be >= 1");
    bool nonzero = false;
    for (const auto& [e, c] : f.terms) {
        if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != f.degree)
            throw Error("DegreeMismatch", "term exponents must sum to the form degree");
        if (!k.is_zero(c)) nonzero = true;
    }
    if (!nonzero) throw Error("ZeroForm", "form has no nonzero coefficient");
}

template <class F>
bool tf_eq(const F& k, const TriForm<F>& a, const TriForm<F>& b) {
    if (a.degree != b.degree) return false;
    for (const auto& [e, c] : a.terms) {
        if (!k.eq(c, tf_coeff(k, b, e[0], e[1], e[2]))) return false;
    }
    for (const auto& [e, c] : b.terms) {
        if (!k.eq(c, tf_coeff(k, a, e[0], e[1], e[2]))) return false;
    }
    return true;
}

template <class F>
TriForm<F> tf_add(const F& k, const TriForm<F>& a, const TriForm<F>& b) {
    internal_check(a.degree == b.degree, "form addition requires equal degrees");
    TriForm<F> r = a;
    for (const auto& [e, c] : b.terms) {
        auto cur = tf_coeff(k, r, e[0], e[1], e[2]);
        tf_set(k, r, e[0], e[1], e[2], k.add(cur, c));
    }
    return r;
}

template <class F>
TriForm<F> tf_scale(const F& k, const typename F::Elem& s, const TriForm<F>& a) {
    TriForm<F> r;
    r.degree = a.degree;
    for (const auto& [e, c] : a.terms) {
        auto v = k.mul(s, c);
        if (!k.is_zero(v)) r.terms[e] = v;
    }
    return r;
}

template <class F>
TriForm<F> tf_sub(const F& k, const TriForm<F>& a, const TriForm<F>& b) {
    return tf_add(k, a, tf_scale(k, k.neg(k.one()), b));
}

template <class F>
TriForm<F> tf_mul(const F& k, const TriForm<F>& a, const TriForm<F>& b) {
    TriForm<F> r;
    r.degree = a.degree + b.degree;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            std::array<int, 3> e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
            auto cur = tf_coeff(k, r, e[0], e[1], e[2]);
            auto v = k.add(cur, k.mul(ca, cb));
            if (k.is_zero(v)) r.terms.erase(e);
            else r.terms[e] = v;
        }
    return r;
}

template <class F>
typename F::Elem eval_form(const F& k, const TriForm<F>& f, const typename F::Elem& x,
                           const typename F::Elem& y, const typename F::Elem& z) {
    typename F::Elem acc = k.zero();
    for (const auto& [e, c] : f.terms) {
        auto t = k.mul(c, k.pow(x, e[0]));
        t = k.mul(t, k.pow(y, e[1]));
        t = k.mul(t, k.pow(z, e[2]));
        acc = k.add(acc, t);
    }
    return acc;
}

// Formal partial derivatives (f_x, f_y, f_z); exponent factors reduce mod p.
template <class F>
std::array<TriForm<F>, 3> partials(const F& k, const TriForm<F>& f) {
    internal_check(f.degree >= 1, "partials need degree >= 1");
    std::array<TriForm<F>, 3> out;
    for (auto& g : out) g.degree = f.degree - 1;
    for (const auto& [e, c] : f.terms) {
        for (int v = 0; v < 3; ++v) {
            if (e[v] == 0) continue;
            auto coef = k.mul(k.from_int(e[v]), c);
            if (k.is_zero(coef)) continue;
            std::array<int, 3> ne = e;
            ne[v] -= 1;
            auto cur = tf_coeff(k, out[v], ne[0], ne[1], ne[2]);
            tf_set(k, out[v], ne[0], ne[1], ne[2], k.add(cur, coef));
        }
    }
    return out;
}

// Sparse bivariate polynomial (terms x^i y^j).
template <class F>
struct BiPoly {
    std::vector<std::tuple<int, int, typename F::Elem>> terms;
};

template <class F>
BiPoly<F> bp_dehomogenize_z(const TriForm<F>& f) {
    BiPoly<F> r;
    for (const auto& [e, c] : f.terms) r.terms.push_back({e[0], e[1], c});
    return r;
}

// swap the two variables (used to re-chart when f_y vanishes)
template <class F>
BiPoly<F> bp_swap_xy(const BiPoly<F>& f) {
    BiPoly<F> r;
    for (const auto& [i, j, c] : f.terms) r.terms.push_back({j, i, c});
    return r;
}

template <class F>
typename F::Elem bp_eval(const F& k, const BiPoly<F>& f, const typename F::Elem& x,
                         const typename F::Elem& y) {
    typename F::Elem acc = k.zero();
    for (const auto& [i, j, c] : f.terms)
        acc = k.add(acc, k.mul(c, k.mul(k.pow(x, i), k.pow(y, j))));
    return acc;
}

template <class F>
BiPoly<F> bp_partial(const F& k, const BiPoly<F>& f, int var) {
    BiPoly<F> r;
    for (const auto& [i, j, c] : f.terms) {
        int e = (var == 0) ? i : j;
        if (e == 0) continue;
        auto coef = k.mul(k.from_int(e), c);
        if (k.is_zero(coef)) continue;
        r.terms.push_back({var == 0 ? i - 1 : i, var == 0 ? j : j - 1, coef});
    }
    return r;
}

namespace detail {

// f(xs, ys) truncated at t^{prec-1}; xs powers are cached across calls (xs is
// fixed during branch expansion), ys powers recomputed at the given precision.
template <class F>
PowerSeries<F> bp_eval_series(const F& k, const BiPoly<F>& f, const PowerSeries<F>& xs,
                              const PowerSeries<F>& ys, int prec,
                              std::map<int, PowerSeries<F>>& xpow_cache) {
    int K = prec - 1;
    auto acc = PowerSeries<F>::zero(k, K);
    std::map<int, PowerSeries<F>> ypow;
    auto get_xpow = [&](int e) -> const PowerSeries<F>& {
        auto it = xpow_cache.find(e);
        if (it == xpow_cache.end())
            it = xpow_cache.emplace(e, ps_pow(k, xs, e, xs.K)).first;
        return it->second;
    };
    auto get_ypow = [&](int e) -> const PowerSeries<F>& {
        auto it = ypow.find(e);
        if (it == ypow.end()) it = ypow.emplace(e, ps_pow(k, ys, e, K)).first;
        return it->second;
    };
    for (const auto& [i, j, c] : f.terms) {
        auto term = ps_mul(k, get_xpow(i), get_ypow(j), K);
        acc = ps_add(k, acc, ps_scale(k, c, term));
    }
    return acc;
}

} // namespace detail

// Branch expansion at P = (u, w) with f(u,w) = 0 and f_y(u,w) != 0: the unique
// series y(t) = w + sum y_i t^i with f(u+t, y(t)) = 0 mod t^{K+1}, lifted one
// coefficient per order. Coefficient y_i is the i-th Hasse derivative of y
// with respect to x at P.
template <class F>
PowerSeries<F> branch_expand(const F& k, const BiPoly<F>& f, const typename F::Elem& u,
                             const typename F::Elem& w, int K) {
    internal_check(K >= 0, "truncation order must be nonnegative");
    if (!k.is_zero(bp_eval(k, f, u, w)))
        throw Error("NotOnCurve", "expansion point does not satisfy f = 0");
    auto fy = bp_eval(k, bp_partial(k, f, 1), u, w);
    if (k.is_zero(fy))
        throw Error("TangentVertical", "f_y vanishes at the expansion point; re-chart required");
    auto fy_inv = k.inv(fy);

    auto xs = PowerSeries<F>::zero(k, K);
    xs.a[0] = u;
    if (K >= 1) xs.a[1] = k.one();
    auto ys = PowerSeries<F>::zero(k, K);
    ys.a[0] = w;

    std::map<int, PowerSeries<F>> xpow_cache;
    for (int i = 1; i <= K; ++i) {
        auto r = detail::bp_eval_series(k, f, xs, ys, i + 1, xpow_cache);
        ys.a[i] = k.neg(k.mul(r.a[i], fy_inv));
    }
    // re-substitution invariant
    auto r = detail::bp_eval_series(k, f, xs, ys, K + 1, xpow_cache);
    for (int i = 0; i <= K; ++i)
        internal_check(k.is_zero(r.a[i]), "branch expansion residual is nonzero");
    return ys;
}

} // namespace frobcurves

#endif
