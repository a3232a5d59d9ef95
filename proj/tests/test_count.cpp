#include <doctest.h>

#include <map>
#include <tuple>

#include <frobcurves/count.hpp>
#include <frobcurves/curve.hpp>

#include "grid_common.hpp"
#include "test_util.hpp"

using namespace frobcurves;

TEST_CASE("worked example 2: 3640 points by brute force and by formula") {
    auto c = testutil::example_curve_2();
    CHECK(count_bruteforce(c) == 3640);
    auto rep = count_formula_case2(c, 1);
    CHECK(rep.N == 3640);
    CHECK(rep.eta == 0);
    CHECK(rep.exceeds_sv_conic);
}

TEST_CASE("smooth conics over the subfield have p^v + 1 points") {
    for (int64_t p : {11, 19, 43}) {
        auto f = field_create(p, 1);
        TriForm<FieldSpec> conic;
        conic.degree = 2;
        tf_set(f, conic, 2, 0, 0, f.one());
        tf_set(f, conic, 0, 2, 0, f.one());
        tf_set(f, conic, 0, 0, 2, f.one());
        CHECK(count_bruteforce_form(conic, f) == p + 1);
    }
    // the first worked example's companion conic over F_43
    auto f43 = field_create(43, 1);
    TriForm<FieldSpec> conic;
    conic.degree = 2;
    tf_set(f43, conic, 2, 0, 0, f43.one());
    tf_set(f43, conic, 1, 1, 0, f43.from_int(3));
    tf_set(f43, conic, 0, 2, 0, f43.one());
    tf_set(f43, conic, 1, 0, 1, f43.from_int(3));
    tf_set(f43, conic, 0, 1, 1, f43.from_int(3));
    tf_set(f43, conic, 0, 0, 2, f43.one());
    CHECK(count_bruteforce_form(conic, f43) == 44);
}

TEST_CASE("lifted Fermat: 1728 = d(d+q-1)/2, delta = 0") {
    auto f11 = field_create(11, 1);
    TriForm<FieldSpec> conic;
    conic.degree = 2;
    tf_set(f11, conic, 2, 0, 0, f11.one());
    tf_set(f11, conic, 0, 2, 0, f11.one());
    tf_set(f11, conic, 0, 0, 2, f11.one());
    auto lifted = lift_conic(f11, conic, 2);
    CHECK(lifted.n == 12);
    CHECK(lifted.degree() == 24);
    CHECK(count_bruteforce(lifted) == 1728);
    auto rep = count_formula_case1(lifted, 1);
    CHECK(rep.N == 1728);
    CHECK(rep.delta == 0);
    CHECK(rep.bound_set.sv_line == 1728); // the bound is attained
}

TEST_CASE("a coordinate-zero conic point drops the count by n(n-1) per point") {
    // conic x^2 + y^2 + yz + 9 z^2 over F_11 passes through (0:1:1)
    auto f11 = field_create(11, 1);
    TriForm<FieldSpec> conic;
    conic.degree = 2;
    tf_set(f11, conic, 2, 0, 0, f11.one());
    tf_set(f11, conic, 0, 2, 0, f11.one());
    tf_set(f11, conic, 0, 1, 1, f11.one());
    tf_set(f11, conic, 0, 0, 2, f11.from_int(9));
    CHECK(f11.is_zero(eval_form(f11, conic, f11.zero(), f11.one(), f11.one())));
    auto lifted = lift_conic(f11, conic, 2);
    auto rep = count_formula_case1(lifted, 1);
    CHECK(rep.delta == 2);
    CHECK(rep.N == 12 * (12 * 12 - 2 * 11)); // 1464
    CHECK(count_bruteforce(lifted) == rep.N);
}

TEST_CASE("eta = 2 instance over F_19 matches brute force") {
    auto f = field_create(19, 2);
    std::map<std::pair<int, int>, FqElement> m;
    m[{2, 0}] = f.from_int(1);
    m[{1, 1}] = f.from_int(7);
    m[{0, 2}] = f.from_int(1);
    m[{0, 0}] = f.from_int(1);
    auto c = make_curve(f, 2, 10, std::move(m));
    REQUIRE(is_smooth(c).status == Smoothness::Smooth);
    auto rep = count_formula_case2(c, 1);
    CHECK(rep.eta == 2);
    CHECK(rep.N == 10 * (361 + 3 - 19 * 2)); // 3260
    CHECK(count_bruteforce(c) == rep.N);
}

TEST_CASE("eta = 1 would need a vanishing discriminant, which kills smoothness") {
    // exhaustive sweep of one-mixed shapes a x^{2n} + b x^n y^n + c y^{2n} + z^{2n}
    // over F_19: whenever b^2 = 4ac the curve is singular, so eta = 1 never
    // occurs alongside a certified count
    auto f = field_create(19, 2);
    int checked = 0, eta1_smooth = 0;
    for (int64_t a = 1; a < 19; ++a)
        for (int64_t b = 1; b < 19; ++b)
            for (int64_t cc = 1; cc < 19; ++cc) {
                std::map<std::pair<int, int>, FqElement> m;
                m[{2, 0}] = f.from_int(a);
                m[{1, 1}] = f.from_int(b);
                m[{0, 2}] = f.from_int(cc);
                m[{0, 0}] = f.from_int(1);
                auto c = make_curve(f, 2, 10, std::move(m));
                bool disc_zero = (b * b - 4 * a * cc) % 19 == 0;
                bool smooth = is_smooth(c).status == Smoothness::Smooth;
                if (disc_zero && smooth) ++eta1_smooth;
                ++checked;
            }
    CHECK(checked == 18 * 18 * 18);
    CHECK(eta1_smooth == 0);
}

TEST_CASE("bound calculators") {
    auto b1 = bounds(88, 1849, 2);
    CHECK(b1.sv_conic == 80220);
    CHECK(b1.sv_line == 88 * (88 + 1848) / 2);
    CHECK(b1.hasse_weil == 1849 + 1 + 2 * 3741 * 43); // sqrt(q) = 43 exactly
    CHECK(b1.sv_general == 80220);                    // s = 2 reproduces the conic bound

    auto b2 = bounds(20, 361, 2);
    CHECK(b2.sv_conic == 3608);
    CHECK(b2.hasse_weil == 361 + 1 + 2 * 171 * 19);

    auto b3 = bounds(24, 121);
    CHECK(b3.sv_line == 1728);

    CHECK_THROWS_WITH_AS(bounds(2, 11), doctest::Contains("DegreeTooSmall"), Error);

    // the line bound for s = 1 from the general formula: M = 2
    auto b4 = bounds(24, 121, 1);
    CHECK(b4.sv_general == b4.sv_line);
}

TEST_CASE("maximality certification") {
    auto f11 = field_create(11, 1);
    TriForm<FieldSpec> conic;
    conic.degree = 2;
    tf_set(f11, conic, 2, 0, 0, f11.one());
    tf_set(f11, conic, 0, 2, 0, f11.one());
    tf_set(f11, conic, 0, 0, 2, f11.one());
    auto cert = certify_maximal(f11, conic, 2);
    CHECK(cert.attains_sv_line);
    CHECK(cert.subfield_count == 12);
    CHECK(cert.N == 1728);
    CHECK(count_bruteforce(lift_conic(f11, conic, 2)) == cert.N);

    // the first worked example's conic over F_43
    auto f43 = field_create(43, 1);
    TriForm<FieldSpec> c43;
    c43.degree = 2;
    tf_set(f43, c43, 2, 0, 0, f43.one());
    tf_set(f43, c43, 1, 1, 0, f43.from_int(3));
    tf_set(f43, c43, 0, 2, 0, f43.one());
    tf_set(f43, c43, 1, 0, 1, f43.from_int(3));
    tf_set(f43, c43, 0, 1, 1, f43.from_int(3));
    tf_set(f43, c43, 0, 0, 2, f43.one());
    auto cert43 = certify_maximal(f43, c43, 2);
    CHECK(cert43.N == 85184);
    CHECK(cert43.d == 88);

    // a conic through a coordinate-zero point fails the hypothesis
    TriForm<FieldSpec> bad;
    bad.degree = 2;
    tf_set(f11, bad, 2, 0, 0, f11.one());
    tf_set(f11, bad, 0, 2, 0, f11.one());
    tf_set(f11, bad, 0, 1, 1, f11.one());
    tf_set(f11, bad, 0, 0, 2, f11.from_int(9));
    CHECK_THROWS_WITH_AS(certify_maximal(f11, bad, 2), doctest::Contains("HypothesisFails"),
                         Error);

    CHECK_THROWS_WITH_AS(certify_maximal(f11, conic, 1), doctest::Contains("BadTower"), Error);
}

TEST_CASE("fiber sum: the norm projection partitions the rational points") {
    auto c = testutil::example_curve_2();
    const auto& k = c.field;
    auto F = family_form(c);

    // collect all rational points chartwise and group by the norm image
    std::map<std::tuple<int64_t, int64_t, int64_t>, int64_t> fibers;
    auto record = [&](const FqElement& x, const FqElement& y, const FqElement& z) {
        if (!k.is_zero(eval_form(k, F, x, y, z))) return;
        auto img = norm_projection(c, make_point(k, x, y, z));
        fibers[{k.index_of(img.x), k.index_of(img.y), k.index_of(img.z)}]++;
    };
    k.for_each_element([&](const FqElement& b) {
        k.for_each_element([&](const FqElement& cc) { record(k.one(), b, cc); });
    });
    k.for_each_element([&](const FqElement& cc) { record(k.zero(), k.one(), cc); });
    record(k.zero(), k.zero(), k.one());

    int64_t total = 0;
    int64_t n = c.n;
    auto G = g_form(c);
    int full = 0, partial = 0;
    for (const auto& [key, size] : fibers) {
        total += size;
        auto [xi, yi, zi] = key;
        auto x = k.elem_of(xi), y = k.elem_of(yi), z = k.elem_of(zi);
        CHECK(k.is_zero(eval_form(k, G, x, y, z))); // image lies on the companion curve
        bool coord_zero = k.is_zero(x) || k.is_zero(y) || k.is_zero(z);
        if (coord_zero) {
            CHECK(size == n);
            ++partial;
        } else {
            CHECK(size == n * n);
            ++full;
        }
    }
    CHECK(total == 3640);
    CHECK(full == 36);
    CHECK(partial == 4);
}

TEST_CASE("two-way split: thread count does not change the result") {
    auto c = testutil::example_curve_2();
    CHECK(count_bruteforce(c, 1, 100000000, 1) == count_bruteforce(c, 1, 100000000, 2));
    auto f11 = field_create(11, 1);
    TriForm<FieldSpec> conic;
    conic.degree = 2;
    tf_set(f11, conic, 2, 0, 0, f11.one());
    tf_set(f11, conic, 0, 2, 0, f11.one());
    tf_set(f11, conic, 0, 0, 2, f11.one());
    CHECK(count_bruteforce_form(conic, f11, 1, 100000000, 1) ==
          count_bruteforce_form(conic, f11, 1, 100000000, 2));
}

TEST_CASE("budget refusal and line counts over extensions") {
    auto f = field_create(11, 2);
    TriForm<FieldSpec> line;
    line.degree = 1;
    tf_set(f, line, 1, 0, 0, f.one());
    // the line x = 0 has q^r + 1 projective points
    CHECK(count_bruteforce_form(line, f, 1) == 122);
    auto f5 = field_create(5, 1);
    TriForm<FieldSpec> line5;
    line5.degree = 1;
    tf_set(f5, line5, 1, 0, 0, f5.one());
    CHECK(count_bruteforce_form(line5, f5, 2) == 25 + 1); // the line is a P^1 over F_{q^r}
    CHECK_THROWS_WITH_AS(count_bruteforce_form(line, f, 4), doctest::Contains("BudgetExceeded"),
                         Error);
}

TEST_CASE("brute-forced counts respect the Hasse-Weil bound") {
    for (const auto& inst : testutil::grid_instances()) {
        if (inst.curve.field.p() != 11 || inst.curve.n > 12) continue;
        auto N = count_bruteforce(inst.curve);
        auto b = bounds(inst.curve.degree(), inst.curve.field.q());
        CHECK(N <= b.hasse_weil);
    }
}
