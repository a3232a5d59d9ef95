#ifndef FROBCURVES_FUNCFIELD_HPP
#define FROBCURVES_FUNCFIELD_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "poly.hpp"

namespace frobcurves {

// ---------------------------------------------------------------------------
// Function field of the companion curve C: g(X,Y) = 0 of degree s in {1, 2}.
// For s = 2 this is the quadratic extension F_q(X)[Y]/(Y^2 + Abar Y + Bbar),
// monicized by the constant Y^2-coefficient; for s = 1, Y is substituted by a
// polynomial in X. Elements are (u0 + u1 Y)/den with den monic and the triple
// gcd-reduced, which makes the representation canonical.
// ---------------------------------------------------------------------------

class ConicField {
public:
    using P = UniPoly<FieldSpec>;

    struct Elem {
        P u0, u1, den;
    };

    ConicField(const FieldSpec& k, int s, const std::map<std::pair<int, int>, FqElement>& g)
        : k_(k), s_(s) {
        auto coeff = [&](int i, int j) {
            auto it = g.find({i, j});
            return it == g.end() ? k.zero() : it->second;
        };
        if (s == 2) {
            auto c02 = coeff(0, 2);
            if (k.is_zero(c02))
                throw Error("SeparatingVariableFailure",
                            "companion form has no Y^2 term; the fibration chart degenerates");
            auto inv = k.inv(c02);
            abar_ = P{{k.mul(inv, coeff(0, 1)), k.mul(inv, coeff(1, 1))}};
            up_trim(k, abar_);
            bbar_ = P{{k.mul(inv, coeff(0, 0)), k.mul(inv, coeff(1, 0)), k.mul(inv, coeff(2, 0))}};
            up_trim(k, bbar_);
        } else if (s == 1) {
            auto c01 = coeff(0, 1);
            if (k.is_zero(c01))
                throw Error("SeparatingVariableFailure",
                            "companion line has no Y term; the fibration chart degenerates");
            auto inv = k.neg(k.inv(c01));
            ysub_ = P{{k.mul(inv, coeff(0, 0)), k.mul(inv, coeff(1, 0))}};
            up_trim(k, ysub_);
        } else {
            throw Error("SeparatingVariableFailure",
                        "symbolic engine supports companion degrees 1 and 2 only");
        }
    }

    const FieldSpec& base() const { return k_; }
    int s() const { return s_; }

    Elem zero() const { return Elem{{}, {}, one_poly()}; }
    Elem one() const { return Elem{one_poly(), {}, one_poly()}; }
    Elem from_fq(const FqElement& c) const {
        Elem e = zero();
        e.u0 = up_const(k_, c);
        return e;
    }
    Elem from_poly(P u) const {
        Elem e = zero();
        e.u0 = std::move(u);
        up_trim(k_, e.u0);
        return e;
    }
    Elem X() const { return from_poly(up_x(k_)); }
    Elem Y() const {
        if (s_ == 1) return from_poly(ysub_);
        Elem e = zero();
        e.u1 = one_poly();
        return e;
    }

    bool is_zero(const Elem& a) const { return up_is_zero(a.u0) && up_is_zero(a.u1); }
    bool eq(const Elem& a, const Elem& b) const {
        return up_eq(k_, a.u0, b.u0) && up_eq(k_, a.u1, b.u1) && up_eq(k_, a.den, b.den);
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r;
        r.u0 = up_add(k_, up_mul(k_, a.u0, b.den), up_mul(k_, b.u0, a.den));
        r.u1 = up_add(k_, up_mul(k_, a.u1, b.den), up_mul(k_, b.u1, a.den));
        r.den = up_mul(k_, a.den, b.den);
        normalize(r);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r = a;
        r.u0 = up_neg(k_, r.u0);
        r.u1 = up_neg(k_, r.u1);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
    Elem mul(const Elem& a, const Elem& b) const {
        Elem r;
        auto t00 = up_mul(k_, a.u0, b.u0);
        if (s_ == 1) {
            internal_check(up_is_zero(a.u1) && up_is_zero(b.u1), "degree-1 chart carries no Y");
            r.u0 = t00;
        } else {
            auto t11 = up_mul(k_, a.u1, b.u1);
            auto t01 = up_add(k_, up_mul(k_, a.u0, b.u1), up_mul(k_, a.u1, b.u0));
            // Y^2 = -Abar Y - Bbar
            r.u0 = up_sub(k_, t00, up_mul(k_, t11, bbar_));
            r.u1 = up_sub(k_, t01, up_mul(k_, t11, abar_));
        }
        r.den = up_mul(k_, a.den, b.den);
        normalize(r);
        return r;
    }
    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw Error("DivisionByZero", "inverse of zero in the function field");
        Elem r;
        if (s_ == 1) {
            r.u0 = a.den;
            r.den = a.u0;
        } else {
            // norm of the numerator: (u0 + u1 Y)(u0 - u1 Abar - u1 Y)
            auto N = up_add(k_, up_sub(k_, up_mul(k_, a.u0, a.u0),
                                       up_mul(k_, up_mul(k_, a.u0, a.u1), abar_)),
                            up_mul(k_, up_mul(k_, a.u1, a.u1), bbar_));
            internal_check(!up_is_zero(N), "zero norm of a nonzero element (companion reducible?)");
            r.u0 = up_mul(k_, a.den, up_sub(k_, a.u0, up_mul(k_, a.u1, abar_)));
            r.u1 = up_neg(k_, up_mul(k_, a.den, a.u1));
            r.den = N;
        }
        normalize(r);
        return r;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    Elem pow(Elem base, uint64_t e) const {
        Elem r = one();
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

private:
    P one_poly() const { return up_const(k_, k_.one()); }

    void normalize(Elem& r) const {
        internal_check(!up_is_zero(r.den), "zero denominator");
        if (up_is_zero(r.u0) && up_is_zero(r.u1)) {
            r.den = one_poly();
            return;
        }
        auto g = up_gcd(k_, up_gcd(k_, r.u0, r.u1), r.den);
        if (!up_is_zero(g) && up_deg(k_, g) >= 1) {
            auto dv = [&](const P& a) {
                auto [q, rem] = up_divmod(k_, a, g);
                internal_check(up_is_zero(rem), "gcd division must be exact");
                return q;
            };
            r.u0 = dv(r.u0);
            r.u1 = dv(r.u1);
            r.den = dv(r.den);
        }
        auto lead = r.den.c.back();
        if (!k_.eq(lead, k_.one())) {
            auto inv = k_.inv(lead);
            r.u0 = up_scale(k_, inv, r.u0);
            r.u1 = up_scale(k_, inv, r.u1);
            r.den = up_scale(k_, inv, r.den);
        }
    }

    FieldSpec k_;
    int s_;
    P abar_, bbar_; // s = 2
    P ysub_;        // s = 1
};

// ---------------------------------------------------------------------------
// Function field of the family curve f(x,y) = g(x^n, y^n) = 0, represented on
// the basis {x^a y^b : 0 <= a,b < n} over the companion function field (the
// norm fibration has degree n^2, so this basis is free). Exact zero tests come
// down to all coordinates vanishing.
// ---------------------------------------------------------------------------

class FuncField {
public:
    using CE = ConicField::Elem;

    struct Elem {
        std::map<std::pair<int, int>, CE> m;
    };

    explicit FuncField(const CurveFamily& curve)
        : k_(curve.field), n_(curve.n), s_(curve.s), cf_(make_cf(curve)) {
        if ((curve.n % curve.field.p()) == 0)
            throw Error("SeparatingVariableFailure", "p divides n; x is not separating");
        for (const auto& [ij, c] : curve.coeffs) gcoeffs_[ij] = c;
    }

    const ConicField& cf() const { return cf_; }
    const FieldSpec& base() const { return k_; }
    int n() const { return n_; }

    Elem zero() const { return Elem{}; }
    Elem one() const { return mono(0, 0, cf_.one()); }
    Elem mono(int a, int b, CE c) const {
        Elem e;
        if (!cf_.is_zero(c)) e.m[{a, b}] = std::move(c);
        return e;
    }

    bool is_zero(const Elem& e) const { return e.m.empty(); }
    bool eq(const Elem& a, const Elem& b) const { return is_zero(sub(a, b)); }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (const auto& [key, c] : b.m) {
            auto it = r.m.find(key);
            if (it == r.m.end()) {
                r.m[key] = c;
            } else {
                it->second = cf_.add(it->second, c);
                if (cf_.is_zero(it->second)) r.m.erase(it);
            }
        }
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r = a;
        for (auto& [key, c] : r.m) c = cf_.neg(c);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
    Elem scale(const CE& s, const Elem& a) const {
        Elem r;
        for (const auto& [key, c] : a.m) {
            auto v = cf_.mul(s, c);
            if (!cf_.is_zero(v)) r.m[key] = v;
        }
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        Elem r;
        for (const auto& [ka, ca] : a.m)
            for (const auto& [kb, cb] : b.m) {
                int ax = ka.first + kb.first, by = ka.second + kb.second;
                CE c = cf_.mul(ca, cb);
                if (ax >= n_) {
                    ax -= n_;
                    c = cf_.mul(c, cf_.X());
                }
                if (by >= n_) {
                    by -= n_;
                    c = cf_.mul(c, cf_.Y());
                }
                auto key = std::make_pair(ax, by);
                auto it = r.m.find(key);
                if (it == r.m.end()) r.m[key] = c;
                else {
                    it->second = cf_.add(it->second, c);
                    if (cf_.is_zero(it->second)) r.m.erase(it);
                }
            }
        return r;
    }

    // x^e and y^e for e >= 0, folding n-th powers into X resp. Y
    Elem x_pow(int64_t e) const {
        internal_check(e >= 0, "negative power needs pow_signed");
        return mono(static_cast<int>(e % n_), 0, cf_.pow(cf_.X(), static_cast<uint64_t>(e / n_)));
    }
    Elem y_pow(int64_t e) const {
        internal_check(e >= 0, "negative power needs pow_signed");
        return mono(0, static_cast<int>(e % n_), cf_.pow(cf_.Y(), static_cast<uint64_t>(e / n_)));
    }
    Elem x_pow_signed(int64_t e) const {
        if (e >= 0) return x_pow(e);
        return inv_monomial(x_pow(-e));
    }
    Elem y_pow_signed(int64_t e) const {
        if (e >= 0) return y_pow(e);
        return inv_monomial(y_pow(-e));
    }

    // inverse of a single-term element x^a y^b c
    Elem inv_monomial(const Elem& a) const {
        internal_check(a.m.size() == 1, "inv_monomial needs exactly one term");
        const auto& [key, c] = *a.m.begin();
        int ax = key.first, by = key.second;
        CE r = cf_.inv(c);
        int nax = 0, nby = 0;
        if (ax > 0) {
            nax = n_ - ax;
            r = cf_.mul(r, cf_.inv(cf_.X()));
        }
        if (by > 0) {
            nby = n_ - by;
            r = cf_.mul(r, cf_.inv(cf_.Y()));
        }
        return mono(nax, nby, r);
    }

    // df/dy as a function-field element: n y^{n-1} sum_{j>=1} j c_ij X^i Y^{j-1}
    Elem fy() const {
        CE acc = cf_.zero();
        for (const auto& [ij, c] : gcoeffs_) {
            int i = ij.first, j = ij.second;
            if (j == 0) continue;
            CE term = cf_.from_fq(k_.mul(k_.from_int(j), c));
            term = cf_.mul(term, cf_.pow(cf_.X(), i));
            term = cf_.mul(term, cf_.pow(cf_.Y(), j - 1));
            acc = cf_.add(acc, term);
        }
        acc = cf_.mul(acc, cf_.from_fq(k_.from_int(n_)));
        return mono(0, n_ - 1, acc);
    }

    // Hasse derivatives d_0..d_K of y with respect to x at the generic point,
    // produced by lifting f(x + T, sum d_i T^i) = 0 mod T^{K+1} order by order
    // (d_i is the i-th Hasse derivative; no factorial division is involved).
    std::vector<Elem> hasse_series(int K) const {
        std::vector<Elem> S(K + 1, zero());
        S[0] = y_pow(1);
        auto fyv = fy();
        internal_check(fyv.m.size() == 1, "df/dy must be a single fibration monomial");
        auto fy_inv = inv_monomial(fyv);
        for (int i = 1; i <= K; ++i) {
            auto R = eval_shifted(S, i + 1);
            S[i] = neg(mul(R[i], fy_inv));
        }
        auto R = eval_shifted(S, K + 1);
        for (int i = 0; i <= K; ++i)
            internal_check(is_zero(R[i]), "symbolic branch lifting residual is nonzero");
        return S;
    }

    // determinant by Laplace expansion (no division needed)
    Elem det(const std::vector<std::vector<Elem>>& m) const {
        const size_t nn = m.size();
        for (const auto& row : m) internal_check(row.size() == nn, "determinant needs a square matrix");
        return det_rec(m);
    }

private:
    static ConicField make_cf(const CurveFamily& curve) {
        std::map<std::pair<int, int>, FqElement> g;
        for (const auto& [ij, c] : curve.coeffs) g[ij] = c;
        return ConicField(curve.field, curve.s, g);
    }

    // f(x+T, S(T)) truncated at T^{prec-1}: f = sum c_ij (x+T)^{in} S^{jn}
    std::vector<Elem> eval_shifted(const std::vector<Elem>& S, int prec) const {
        int K = prec - 1;
        std::vector<Elem> acc(K + 1, zero());
        // series powers of S, cached by exponent
        std::map<int64_t, std::vector<Elem>> spow;
        auto series_mul = [&](const std::vector<Elem>& A, const std::vector<Elem>& B) {
            std::vector<Elem> r(K + 1, zero());
            for (int i = 0; i <= K; ++i) {
                if (is_zero(A[i])) continue;
                for (int j = 0; i + j <= K; ++j) {
                    if (is_zero(B[j])) continue;
                    r[i + j] = add(r[i + j], mul(A[i], B[j]));
                }
            }
            return r;
        };
        auto series_pow = [&](int64_t e) -> const std::vector<Elem>& {
            auto it = spow.find(e);
            if (it != spow.end()) return it->second;
            std::vector<Elem> r(K + 1, zero());
            r[0] = one();
            std::vector<Elem> base(S.begin(), S.begin() + std::min<size_t>(S.size(), K + 1));
            base.resize(K + 1, zero());
            int64_t ee = e;
            while (ee > 0) {
                if (ee & 1) r = series_mul(r, base);
                base = series_mul(base, base);
                ee >>= 1;
            }
            return spow.emplace(e, std::move(r)).first->second;
        };
        for (const auto& [ij, c] : gcoeffs_) {
            int64_t in = static_cast<int64_t>(ij.first) * n_;
            int64_t jn = static_cast<int64_t>(ij.second) * n_;
            const auto& ypow = series_pow(jn);
            // (x+T)^{in} = sum_r C(in, r) x^{in-r} T^r
            for (int r = 0; r <= K; ++r) {
                if (r > in) break;
                int64_t binom = binom_mod(in, r);
                if (binom == 0) continue;
                auto xterm = scale(cf_.from_fq(k_.from_int(binom)), x_pow(in - r));
                if (!k_.is_zero(c)) xterm = scale(cf_.from_fq(c), xterm);
                for (int t = 0; r + t <= K; ++t) {
                    if (is_zero(ypow[t])) continue;
                    acc[r + t] = add(acc[r + t], mul(xterm, ypow[t]));
                }
            }
        }
        return acc;
    }

    int64_t binom_mod(int64_t m, int r) const {
        // C(m, r) mod p for small r via the product formula (p > r required)
        internal_check(r < k_.p(), "binomial order must stay below the characteristic");
        int64_t p = k_.p();
        int64_t num = 1, den = 1;
        for (int i = 0; i < r; ++i) {
            num = num * (((m - i) % p + p) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        // den != 0 since r < p
        int64_t dinv = 1, base = den, e = p - 2;
        while (e > 0) {
            if (e & 1) dinv = dinv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return num * dinv % p;
    }

    Elem det_rec(const std::vector<std::vector<Elem>>& m) const {
        const size_t nn = m.size();
        if (nn == 1) return m[0][0];
        // expand along the column with the most zeros
        size_t best = 0, bestz = 0;
        for (size_t c = 0; c < nn; ++c) {
            size_t z = 0;
            for (size_t r = 0; r < nn; ++r)
                if (is_zero(m[r][c])) ++z;
            if (z >= bestz) {
                bestz = z;
                best = c;
            }
        }
        Elem acc = zero();
        for (size_t r = 0; r < nn; ++r) {
            if (is_zero(m[r][best])) continue;
            std::vector<std::vector<Elem>> minor;
            minor.reserve(nn - 1);
            for (size_t rr = 0; rr < nn; ++rr) {
                if (rr == r) continue;
                std::vector<Elem> row;
                row.reserve(nn - 1);
                for (size_t cc = 0; cc < nn; ++cc)
                    if (cc != best) row.push_back(m[rr][cc]);
                minor.push_back(std::move(row));
            }
            auto term = mul(m[r][best], det_rec(minor));
            if ((r + best) % 2 == 1) term = neg(term);
            acc = add(acc, term);
        }
        return acc;
    }

    FieldSpec k_;
    int n_;
    int s_;
    ConicField cf_;
    std::map<std::pair<int, int>, FqElement> gcoeffs_;
};

} // namespace frobcurves

#endif
