#ifndef FROBCURVES_GF_HPP
#define FROBCURVES_GF_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace frobcurves {

// Element of F_{p^h}: coordinates w.r.t. the power basis of the field modulus,
// constant term first. Canonical form: length h, every coordinate in [0, p).
struct FqElement {
    std::vector<int64_t> c;

    bool operator==(const FqElement& o) const { return c == o.c; }
    bool operator!=(const FqElement& o) const { return !(*this == o); }
};

namespace detail {

// Dense F_p[T] helpers used for modulus handling. Vectors are coefficient
// lists, constant term first, not necessarily trimmed.
inline void fp_trim(std::vector<int64_t>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<int64_t> fp_mul(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int64_t> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    fp_trim(r);
    return r;
}

// a mod m, m monic
inline std::vector<int64_t> fp_mod(std::vector<int64_t> a, const std::vector<int64_t>& m, int64_t p) {
    fp_trim(a);
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        int64_t lead = a.back();
        size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (size_t i = 0; i < dm; ++i)
                a[shift + i] = ((a[shift + i] - lead * m[i]) % p + p) % p;
        }
        a.pop_back();
        fp_trim(a);
    }
    fp_trim(a);
    return a;
}

inline std::vector<int64_t> fp_powmod(std::vector<int64_t> base, uint64_t e,
                                      const std::vector<int64_t>& m, int64_t p) {
    std::vector<int64_t> r{1};
    base = fp_mod(std::move(base), m, p);
    while (e > 0) {
        if (e & 1) r = fp_mod(fp_mul(r, base, p), m, p);
        base = fp_mod(fp_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

inline std::vector<int64_t> fp_gcd(std::vector<int64_t> a, std::vector<int64_t> b, int64_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // a mod b with b made monic on the fly
        int64_t lead = b.back();
        if (lead != 1) {
            // inverse of lead mod p
            int64_t inv = 1, base = lead % p, e = p - 2;
            while (e > 0) {
                if (e & 1) inv = inv * base % p;
                base = base * base % p;
                e >>= 1;
            }
            for (auto& x : b) x = x * inv % p;
        }
        a = fp_mod(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

inline bool is_prime_int(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Rabin test: m (monic, degree h) is irreducible over F_p iff
// T^{p^h} = T mod m and gcd(T^{p^{h/r}} - T, m) = 1 for every prime r | h.
inline bool fp_irreducible(const std::vector<int64_t>& m, int64_t p) {
    const int h = static_cast<int>(m.size()) - 1;
    if (h < 1) return false;
    if (h == 1) return true;
    std::vector<int64_t> t{0, 1};
    // frob[k] = T^{p^{k+1}} mod m
    std::vector<int64_t> cur = t;
    std::vector<std::vector<int64_t>> frob(h);
    for (int k = 0; k < h; ++k) {
        cur = fp_powmod(cur, static_cast<uint64_t>(p), m, p);
        frob[k] = cur;
    }
    std::vector<int64_t> top = frob[h - 1];
    // subtract T
    std::vector<int64_t> diff = top;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    fp_trim(diff);
    if (!diff.empty()) return false;
    for (int64_t r : prime_factors(h)) {
        std::vector<int64_t> d = frob[h / r - 1];
        if (d.size() < 2) d.resize(2, 0);
        d[1] = ((d[1] - 1) % p + p) % p;
        fp_trim(d);
        auto g = fp_gcd(d, m, p);
        if (g.size() > 1) return false;
    }
    return true;
}

} // namespace detail

// Description of F_{p^h} = F_p[T]/(modulus). Immutable value; all element
// operations are pure functions on this object.
class FieldSpec {
public:
    using Elem = FqElement;

    FieldSpec() = default;

    int64_t p() const { return p_; }
    int h() const { return h_; }
    int64_t q() const { return q_; }
    // modulus coefficients, constant term first, length h+1, monic
    const std::vector<int64_t>& modulus() const { return mod_; }

    bool same_field(const FieldSpec& o) const {
        return p_ == o.p_ && h_ == o.h_ && mod_ == o.mod_;
    }

    // ---- element constructors ----
    Elem zero() const { return Elem{std::vector<int64_t>(h_, 0)}; }
    Elem one() const { return from_int(1); }
    Elem from_int(int64_t v) const {
        Elem e = zero();
        e.c[0] = ((v % p_) + p_) % p_;
        return e;
    }
    // element from coordinate vector (validated, reduced mod p)
    Elem from_coords(std::vector<int64_t> c) const {
        if (static_cast<int>(c.size()) > h_)
            throw Error("FieldMismatch", "coordinate vector longer than extension degree");
        c.resize(h_, 0);
        for (auto& x : c) x = ((x % p_) + p_) % p_;
        return Elem{std::move(c)};
    }
    // generator T of the power basis (only useful for h >= 2)
    Elem gen() const {
        Elem e = zero();
        if (h_ >= 2) e.c[1] = 1;
        else e.c[0] = 1 % p_;
        return e;
    }

    // ---- predicates ----
    bool is_zero(const Elem& a) const {
        check(a);
        for (auto x : a.c)
            if (x != 0) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        return a.c == b.c;
    }

    // ---- arithmetic ----
    Elem add(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Elem r = a;
        for (int i = 0; i < h_; ++i) r.c[i] = (r.c[i] + b.c[i]) % p_;
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        Elem r = a;
        for (int i = 0; i < h_; ++i) r.c[i] = ((r.c[i] - b.c[i]) % p_ + p_) % p_;
        return r;
    }
    Elem neg(const Elem& a) const { return sub(zero(), a); }
    Elem mul(const Elem& a, const Elem& b) const {
        check(a);
        check(b);
        auto prod = detail::fp_mod(detail::fp_mul(a.c, b.c, p_), mod_, p_);
        prod.resize(h_, 0);
        return Elem{std::move(prod)};
    }
    Elem scale(int64_t k, const Elem& a) const { return mul(from_int(k), a); }
    Elem pow(const Elem& a, uint64_t e) const {
        check(a);
        Elem r = one(), base = a;
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw Error("DivisionByZero", "inverse of zero");
        return pow(a, static_cast<uint64_t>(q_ - 2));
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    // ---- subfield machinery (tower F_p in F_{p^v} in F_{p^h}) ----
    // True iff x lies in the subfield F_{p^v}, i.e. x^{p^v} = x.
    bool in_subfield(const Elem& x, int v) const {
        check_divisor(v);
        return eq(pow(x, ipow(p_, v)), x);
    }
    // Norm onto F_{p^v}: x -> x^{(q-1)/(p^v-1)}, with 0 -> 0.
    Elem norm_to_subfield(const Elem& x, int v) const {
        check_divisor(v);
        if (is_zero(x)) return zero();
        uint64_t e = static_cast<uint64_t>((q_ - 1) / (ipow(p_, v) - 1));
        return pow(x, e);
    }

    // ---- enumeration (deterministic: lexicographic on coordinate vectors) ----
    int64_t element_count() const { return q_; }
    int64_t index_of(const Elem& a) const {
        check(a);
        int64_t idx = 0;
        for (int i = 0; i < h_; ++i) idx = idx * p_ + a.c[i];
        return idx;
    }
    Elem elem_of(int64_t idx) const {
        Elem e = zero();
        for (int i = h_ - 1; i >= 0; --i) {
            e.c[i] = idx % p_;
            idx /= p_;
        }
        return e;
    }
    void for_each_element(const std::function<void(const Elem&)>& fn) const {
        for (int64_t i = 0; i < q_; ++i) fn(elem_of(i));
    }

    std::string to_string(const Elem& a) const {
        check(a);
        std::string s = "[";
        for (int i = 0; i < h_; ++i) {
            if (i) s += ",";
            s += std::to_string(a.c[i]);
        }
        return s + "]";
    }

    static int64_t ipow(int64_t b, int e) {
        int64_t r = 1;
        for (int i = 0; i < e; ++i) {
            internal_check(r <= (int64_t(1) << 62) / b, "field size overflow");
            r *= b;
        }
        return r;
    }

private:
    friend FieldSpec field_create(int64_t, int, const std::optional<std::vector<int64_t>>&);

    void check(const Elem& a) const {
        if (static_cast<int>(a.c.size()) != h_)
            throw Error("FieldMismatch", "element has wrong coordinate length for this field");
        for (auto x : a.c)
            if (x < 0 || x >= p_)
                throw Error("FieldMismatch", "element coordinate out of range");
    }
    void check_divisor(int v) const {
        if (v < 1 || h_ % v != 0)
            throw Error("NotADivisor", std::to_string(v) + " does not divide extension degree " + std::to_string(h_));
    }

    int64_t p_ = 0;
    int h_ = 0;
    int64_t q_ = 0;
    std::vector<int64_t> mod_;
};

// Builds F_{p^h}. When no modulus is supplied, the lexicographically smallest
// monic irreducible of degree h over F_p is selected (smallest when the
// coefficient vector (c_{h-1},...,c_0) is read as a base-p integer), so runs
// are reproducible.
inline FieldSpec field_create(int64_t p, int h,
                              const std::optional<std::vector<int64_t>>& modulus = std::nullopt) {
    if (!detail::is_prime_int(p)) throw Error("NotPrime", std::to_string(p) + " is not prime");
    if (h < 1) throw Error("DegreeMismatch", "extension degree must be >= 1");
    FieldSpec f;
    f.p_ = p;
    f.h_ = h;
    f.q_ = FieldSpec::ipow(p, h);
    if (modulus) {
        std::vector<int64_t> m = *modulus;
        if (static_cast<int>(m.size()) != h + 1)
            throw Error("DegreeMismatch", "modulus must have degree h");
        for (auto& x : m) x = ((x % p) + p) % p;
        if (m.back() != 1) throw Error("DegreeMismatch", "modulus must be monic");
        if (!detail::fp_irreducible(m, p))
            throw Error("ReducibleModulus", "supplied modulus is reducible over F_p");
        f.mod_ = std::move(m);
    } else if (h == 1) {
        f.mod_ = {0, 1}; // T
    } else {
        std::vector<int64_t> m(h + 1, 0);
        m[h] = 1;
        bool found = false;
        for (int64_t k = 0; k < f.q_ && !found; ++k) {
            int64_t v = k;
            for (int i = 0; i < h; ++i) {
                m[i] = v % p;
                v /= p;
            }
            if (detail::fp_irreducible(m, p)) found = true;
        }
        internal_check(found, "no irreducible modulus found");
        f.mod_ = m;
    }
    return f;
}

} // namespace frobcurves

#endif
