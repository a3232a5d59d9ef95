#ifndef FROBCURVES_EXTFIELD_HPP
#define FROBCURVES_EXTFIELD_HPP

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace frobcurves {

// Extension of an arbitrary base field by a monic irreducible of degree r:
// E = F[T]/(m). Elements are fixed-length coordinate vectors over the base,
// constant term first. The base field embeds as the constant coordinate, so
// no root hunting is needed to evaluate base-field data over the extension.
template <class F>
class ExtField {
public:
    using Elem = std::vector<typename F::Elem>;

    ExtField(const F& base, int r) : base_(base), r_(r) {
        internal_check(r >= 1, "extension degree must be >= 1");
        int64_t q = base.element_count();
        count_ = 1;
        for (int i = 0; i < r; ++i) {
            internal_check(count_ <= (int64_t(1) << 62) / q, "extension field too large");
            count_ *= q;
        }
        // deterministic modulus: first irreducible in index order
        if (r == 1) {
            mod_ = UniPoly<F>{{base.zero(), base.one()}};
        } else {
            bool found = false;
            for (int64_t idx = 0; idx < count_ && !found; ++idx) {
                UniPoly<F> cand;
                cand.c.resize(r + 1, base.zero());
                int64_t v = idx;
                for (int i = 0; i < r; ++i) {
                    cand.c[i] = base.elem_of(v % q);
                    v /= q;
                }
                cand.c[r] = base.one();
                if (up_irreducible(base, cand)) {
                    mod_ = cand;
                    found = true;
                }
            }
            internal_check(found, "no irreducible extension modulus found");
        }
    }

    const F& base() const { return base_; }
    int ext_degree() const { return r_; }
    const UniPoly<F>& modulus() const { return mod_; }

    Elem zero() const { return Elem(r_, base_.zero()); }
    Elem one() const { return from_base(base_.one()); }
    Elem from_int(int64_t v) const { return from_base(base_.from_int(v)); }
    Elem from_base(const typename F::Elem& b) const {
        Elem e = zero();
        e[0] = b;
        return e;
    }
    Elem gen() const {
        Elem e = zero();
        if (r_ >= 2) e[1] = base_.one();
        else e[0] = base_.one();
        return e;
    }

    bool is_zero(const Elem& a) const {
        for (const auto& x : a)
            if (!base_.is_zero(x)) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const {
        for (int i = 0; i < r_; ++i)
            if (!base_.eq(a[i], b[i])) return false;
        return true;
    }
    // true iff the element lies in the embedded base field
    bool in_base(const Elem& a) const {
        for (int i = 1; i < r_; ++i)
            if (!base_.is_zero(a[i])) return false;
        return true;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (int i = 0; i < r_; ++i) r[i] = base_.add(r[i], b[i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (int i = 0; i < r_; ++i) r[i] = base_.sub(r[i], b[i]);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r = a;
        for (auto& x : r) x = base_.neg(x);
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        UniPoly<F> pa = as_poly(a), pb = as_poly(b);
        auto prod = up_mod(base_, up_mul(base_, pa, pb), mod_);
        return from_poly(prod);
    }
    Elem pow(const Elem& a, uint64_t e) const {
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
        return pow(a, static_cast<uint64_t>(count_ - 2));
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    int64_t element_count() const { return count_; }
    int64_t index_of(const Elem& a) const {
        int64_t idx = 0;
        for (int i = 0; i < r_; ++i) idx = idx * base_.element_count() + base_.index_of(a[i]);
        return idx;
    }
    Elem elem_of(int64_t idx) const {
        Elem e = zero();
        int64_t q = base_.element_count();
        for (int i = r_ - 1; i >= 0; --i) {
            e[i] = base_.elem_of(idx % q);
            idx /= q;
        }
        return e;
    }

    std::string to_string(const Elem& a) const {
        std::string s = "[";
        for (int i = 0; i < r_; ++i) {
            if (i) s += ",";
            s += base_.to_string(a[i]);
        }
        return s + "]";
    }

private:
    UniPoly<F> as_poly(const Elem& a) const {
        UniPoly<F> p{a};
        up_trim(base_, p);
        return p;
    }
    Elem from_poly(const UniPoly<F>& p) const {
        Elem e = zero();
        for (size_t i = 0; i < p.c.size(); ++i) e[i] = p.c[i];
        return e;
    }

    F base_;
    int r_;
    int64_t count_ = 0;
    UniPoly<F> mod_;
};

} // namespace frobcurves

#endif
