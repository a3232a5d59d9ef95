#ifndef FROBCURVES_DENSEFIELD_HPP
#define FROBCURVES_DENSEFIELD_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"

namespace frobcurves {

// Table-backed view of a small field: elements are their enumeration indices,
// multiplication runs on discrete logs, addition on Zech logarithms. Built
// once per field; all tables are O(q). Index 0 is always the zero element.
template <class F>
class IndexedField {
public:
    static constexpr uint32_t npos = std::numeric_limits<uint32_t>::max();

    explicit IndexedField(const F& fld, int64_t table_cap = (int64_t(1) << 21)) : fld_(fld) {
        int64_t q = fld.element_count();
        internal_check(q >= 2, "field too small");
        if (q > table_cap)
            throw Error("BudgetExceeded",
                        "field of size " + std::to_string(q) + " exceeds the table cap " +
                            std::to_string(table_cap));
        q_ = static_cast<uint32_t>(q);
        internal_check(fld.is_zero(fld.elem_of(0)), "element 0 must have index 0");

        log_.assign(q_, npos);
        exp_.assign(q_ - 1, 0);
        zech_.assign(q_ - 1, npos);

        // smallest generator in enumeration order
        auto factors = detail::prime_factors(q_ - 1);
        int64_t gen_idx = -1;
        for (int64_t cand = 1; cand < q_; ++cand) {
            auto g = fld.elem_of(cand);
            bool ok = !fld.is_zero(g);
            for (auto l : factors) {
                if (!ok) break;
                auto t = fld.pow(g, static_cast<uint64_t>((q_ - 1) / l));
                if (fld.eq(t, fld.one())) ok = false;
            }
            if (ok) {
                gen_idx = cand;
                break;
            }
        }
        internal_check(gen_idx > 0, "no multiplicative generator found");
        gen_ = static_cast<uint32_t>(gen_idx);

        auto g = fld.elem_of(gen_idx);
        auto cur = fld.one();
        for (uint32_t k = 0; k < q_ - 1; ++k) {
            uint32_t idx = static_cast<uint32_t>(fld.index_of(cur));
            exp_[k] = idx;
            log_[idx] = k;
            cur = fld.mul(cur, g);
        }
        internal_check(fld.eq(cur, fld.one()), "generator order mismatch");
        // zech[k] = log(1 + g^k), npos when 1 + g^k = 0
        auto one = fld.one();
        for (uint32_t k = 0; k < q_ - 1; ++k) {
            auto s = fld.add(one, fld.elem_of(exp_[k]));
            zech_[k] = fld.is_zero(s) ? npos : log_[fld.index_of(s)];
        }
        one_ = static_cast<uint32_t>(fld.index_of(one));
        neg_one_ = (q_ % 2 == 0) ? one_ : exp_[(q_ - 1) / 2];
    }

    const F& field() const { return fld_; }
    uint32_t size() const { return q_; }
    uint32_t zero() const { return 0; }
    uint32_t one() const { return one_; }
    uint32_t generator() const { return gen_; }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        uint32_t s = log_[a] + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }
    uint32_t sq(uint32_t a) const { return mul(a, a); }
    uint32_t add(uint32_t a, uint32_t b) const {
        if (a == 0) return b;
        if (b == 0) return a;
        // a + b = a (1 + b/a)
        uint32_t la = log_[a], lb = log_[b];
        uint32_t d = lb >= la ? lb - la : lb + (q_ - 1) - la;
        uint32_t z = zech_[d];
        if (z == npos) return 0;
        uint32_t s = la + z;
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }
    uint32_t neg(uint32_t a) const { return mul(a, neg_one_); }
    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
    uint32_t inv(uint32_t a) const {
        if (a == 0) throw Error("DivisionByZero", "inverse of zero");
        uint32_t l = log_[a];
        return exp_[l == 0 ? 0 : q_ - 1 - l];
    }
    uint32_t pow(uint32_t a, uint64_t e) const {
        if (a == 0) return e == 0 ? one_ : 0;
        uint64_t l = (static_cast<uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
        return exp_[l];
    }
    // discrete log w.r.t. the stored generator; npos for zero
    uint32_t dlog(uint32_t a) const { return log_[a]; }

    // all solutions x of x^n = a, sorted; empty when none exist
    std::vector<uint32_t> nth_roots(uint64_t n, uint32_t a) const {
        std::vector<uint32_t> out;
        if (a == 0) {
            out.push_back(0);
            return out;
        }
        uint64_t m = q_ - 1;
        uint64_t g = gcd_u64(n % m == 0 ? m : n % m, m);
        if (n % m == 0) {
            // x^n = x^{m * ...} = 1 for all x != 0
            if (a == one_) {
                for (uint32_t x = 1; x < q_; ++x) out.push_back(x);
            }
            return out;
        }
        uint64_t e = log_[a];
        if (e % g != 0) return out;
        // solve (n/g) d = e/g mod m/g
        uint64_t n1 = (n % m) / g, m1 = m / g, e1 = (e / g) % m1;
        uint64_t d0 = (mulmod_u64(e1, inv_mod_u64(n1 % m1, m1), m1)) % m1;
        for (uint64_t t = 0; t < g; ++t) out.push_back(exp_[(d0 + t * m1) % m]);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static uint64_t gcd_u64(uint64_t a, uint64_t b) {
        while (b) {
            a %= b;
            std::swap(a, b);
        }
        return a;
    }
    static uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
    }
    static uint64_t inv_mod_u64(uint64_t a, uint64_t m) {
        // extended gcd; gcd(a, m) must be 1
        int64_t t = 0, newt = 1;
        int64_t r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
        while (newr != 0) {
            int64_t quo = r / newr;
            t -= quo * newt;
            std::swap(t, newt);
            r -= quo * newr;
            std::swap(r, newr);
        }
        internal_check(r == 1, "modular inverse of non-unit");
        if (t < 0) t += static_cast<int64_t>(m);
        return static_cast<uint64_t>(t);
    }

    F fld_;
    uint32_t q_ = 0, one_ = 0, neg_one_ = 0, gen_ = 0;
    std::vector<uint32_t> exp_, log_, zech_;
};

// Field-concept adapter over an IndexedField: elements are their indices, so
// the generic polynomial/series machinery runs on pure table lookups.
template <class F>
class IndexedFieldView {
public:
    using Elem = uint32_t;

    explicit IndexedFieldView(const IndexedField<F>& ix) : ix_(&ix) {}

    Elem zero() const { return 0; }
    Elem one() const { return ix_->one(); }
    Elem from_int(int64_t v) const {
        return static_cast<Elem>(ix_->field().index_of(ix_->field().from_int(v)));
    }
    Elem from_field(const typename F::Elem& e) const {
        return static_cast<Elem>(ix_->field().index_of(e));
    }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    Elem add(Elem a, Elem b) const { return ix_->add(a, b); }
    Elem sub(Elem a, Elem b) const { return ix_->sub(a, b); }
    Elem neg(Elem a) const { return ix_->neg(a); }
    Elem mul(Elem a, Elem b) const { return ix_->mul(a, b); }
    Elem inv(Elem a) const { return ix_->inv(a); }
    Elem div(Elem a, Elem b) const { return ix_->mul(a, ix_->inv(b)); }
    Elem pow(Elem a, uint64_t e) const { return ix_->pow(a, e); }
    int64_t element_count() const { return ix_->size(); }
    Elem elem_of(int64_t i) const { return static_cast<Elem>(i); }
    int64_t index_of(Elem e) const { return e; }

private:
    const IndexedField<F>* ix_;
};

} // namespace frobcurves

#endif
