#ifndef FROBCURVES_TEST_UTIL_HPP
#define FROBCURVES_TEST_UTIL_HPP

#include <cstdint>

#include <frobcurves/gf.hpp>

namespace testutil {

// deterministic pseudo-random stream so failures reproduce
struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed ^ 0xdeadbeefcafef00dull) {}
    uint64_t next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s >> 11;
    }
    int64_t below(int64_t n) { return static_cast<int64_t>(next() % static_cast<uint64_t>(n)); }
};

inline frobcurves::FqElement rand_elem(const frobcurves::FieldSpec& k, Rng& rng) {
    return k.elem_of(rng.below(k.element_count()));
}

inline frobcurves::FqElement rand_nonzero(const frobcurves::FieldSpec& k, Rng& rng) {
    return k.elem_of(1 + rng.below(k.element_count() - 1));
}

} // namespace testutil

#endif
