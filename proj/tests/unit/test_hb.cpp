#include "pslab/error.hpp"
#include "pslab/hb.hpp"
#include "pslab/sieve.hpp"
#include "pslab/vdc.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

using namespace pslab;

namespace {

// Naive double loop in long double with the same summation conventions.
double naive_type_sum(const TypeSumInput& in, const Parameters& p) {
    const long double x = p.x;
    const long double x1 = in.x1 > 0 ? in.x1 : p.x;
    long double total = 0;
    for (int h = -in.H; h <= in.H; ++h) {
        if (h == 0) continue;
        std::complex<long double> s = 0;
        for (std::uint64_t m = in.box.M + 1; m <= in.box.M1; ++m)
            for (std::uint64_t l = in.box.L + 1; l <= in.box.L1; ++l) {
                const long double n = static_cast<long double>(m) * l;
                if (!(n > x / 2 && n <= x1)) continue;
                long double y = p.t * std::pow(n, static_cast<long double>(p.c)) +
                                h * std::pow(n, static_cast<long double>(p.gamma)) +
                                static_cast<long double>(in.k) / p.d * n;
                y -= std::floor(y);
                long double w = in.a ? in.a(m) : 1.0L;
                if (in.variant == TypeSumVariant::SII && in.b) w *= in.b(l);
                if (in.variant == TypeSumVariant::SIprime) w *= std::log(static_cast<long double>(l));
                const long double r = 2 * std::numbers::pi_v<long double> * y;
                s += w * std::complex<long double>(std::cos(r), std::sin(r));
            }
        total += std::abs(s);
    }
    return static_cast<double>(total);
}

} // namespace

TEST_CASE("identity small examples") {
    CHECK(hb_identity_value(1, 3, 1.0) == 0.0);
    CHECK(hb_identity_value(8, 3, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(hb_identity_value(7, 2, 3.0) == doctest::Approx(std::log(7.0)).epsilon(1e-14));
    CHECK(hb_identity_value(12, 2, 4.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(hb_identity_value(9, 2, 2.0), Error);   // 9 >= 3^2
    CHECK_THROWS_AS(hb_identity_value(27, 3, 2.0), Error);
    CHECK_THROWS_AS(hb_identity_value(10, 4, 10.0), Error);
    CHECK_NOTHROW(hb_identity_value(26, 3, 2.9999999999));
}

TEST_CASE("identity reproduces von Mangoldt for n <= 1e4") {
    const PrimeTable table = sieve_range(0, 10000);
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        const double z = std::cbrt(static_cast<double>(n));
        const double v = hb_identity_value(n, 3, z);
        const double expected = n == 1 ? 0.0 : table.lambda(n);
        INFO("n=" << n);
        REQUIRE(std::abs(v - expected) <= 1e-9 * (1.0 + std::log(static_cast<double>(n))));
    }
    // J = 2 with z = sqrt(n)
    for (std::uint64_t n = 2; n <= 3000; ++n) {
        const double v = hb_identity_value(n, 2, std::sqrt(static_cast<double>(n)));
        REQUIRE(std::abs(v - table.lambda(n)) <= 1e-9 * (1.0 + std::log(static_cast<double>(n))));
    }
}

TEST_CASE("term weights follow the binomial sign pattern") {
    const PrimeTable table = sieve_range(0, 5000);
    const double binom[4] = {0, 3, 3, 1};
    for (std::uint64_t n : {30u, 360u, 2310u, 4096u, 4999u}) {
        for (const auto& term : hb_terms(n, 3, std::cbrt(2.0 * n))) {
            int mu = 1;
            std::uint64_t prod = term.rest;
            for (auto m : term.m) {
                mu *= table.mu(m);
                prod *= m;
            }
            CHECK(prod == n);
            CHECK(static_cast<int>(term.m.size()) == term.j);
            CHECK(term.weight == (term.j % 2 ? 1 : -1) * binom[term.j] * mu);
            CHECK(term.sign == (term.weight < 0 ? -1 : 1));
        }
    }
}

TEST_CASE("window exponents and lemma conditions") {
    const auto r = uvz_preconditions(std::ldexp(1.0, 40), 1.2);
    CHECK(r.exponent_identities);
    CHECK(r.uz2_exp_const == 1);
    CHECK(r.uz2_exp_c == 0);
    CHECK(r.v3_exp == 1);
    CHECK(r.u_sq_le_z.holds);
    CHECK(r.u_sq_le_z.slack_log2 > 0);
    CHECK(r.uz2_le_p1.holds);
    CHECK(r.uz2_le_p1.slack_log2 == doctest::Approx(3.0));
    CHECK(r.p1_le_v3.holds);
    CHECK(r.p1_le_v3.slack_log2 == doctest::Approx(3.0));
    CHECK(r.lemma_conditions());
    // at this scale U < 2 and V > Z
    CHECK_FALSE(r.u_ge_2.holds);
    CHECK_FALSE(r.v_le_z.holds);
    CHECK_THROWS_AS(uvz_preconditions(1e6, 1.0), Error);
    CHECK_THROWS_AS(uvz_preconditions(1.5, 1.2), Error);

    // exact identity over a sweep of rational c
    for (int k = 1; k < 90; ++k) {
        const Rational c = 1 + Rational(k, 190);
        CHECK((56 - 38 * c) / 171 + 2 * (38 * c + 115) / 342 == 1);
    }
}

TEST_CASE("ordering threshold") {
    const auto t = uvz_threshold(Rational(6, 5));
    CHECK(t.log2_x_u_ge_2 == Rational(1881) / Rational(52, 5));
    CHECK(t.log2_x_v_le_z == Rational(2394) / Rational(233, 5));
    CHECK(t.log2_x_all == t.log2_x_u_ge_2);
    const double L0 = to_double(t.log2_x_all);
    const auto above = uvz_preconditions(std::ldexp(1.0, static_cast<int>(std::ceil(L0)) + 1), 1.2);
    CHECK(above.ordering());
    CHECK(above.lemma_conditions());
    const auto below = uvz_preconditions(std::ldexp(1.0, static_cast<int>(std::floor(L0)) - 1), 1.2);
    CHECK_FALSE(below.ordering());
}

TEST_CASE("classification") {
    const auto w = uvz_windows(std::ldexp(1.0, 200), 1.2);
    CHECK(classify_length(2 * w.Z, w) == BoxKind::TypeI);
    CHECK(classify_length(2 * w.U, w) == BoxKind::TypeII);
    CHECK(classify_length(w.U / 2, w) == BoxKind::Unclassified);
    DyadicBox box{10, 20, 5, 10};
    CHECK_NOTHROW(classify_box(box, w));
    box.L1 = 11;
    CHECK_THROWS_AS(classify_box(box, w), Error);

    // overlap prefers TypeII
    UVZWindows o;
    o.U = 4;
    o.V = 100;
    o.Z = 50;
    CHECK(classify_length(60, o) == BoxKind::TypeII);
    CHECK(classify_length(200, o) == BoxKind::TypeI);

    // above the threshold, [1, x] splits into below-U, TypeII, the (V, Z) gap and TypeI
    for (double c : {1.05, 1.2, 1.4}) {
        const auto t = uvz_threshold(rational_from_double(c));
        const double lx = std::ceil(to_double(t.log2_x_all)) + 5;
        const auto win = uvz_windows(std::ldexp(1.0, static_cast<int>(lx)), c);
        const auto cov = coverage(win);
        CHECK(cov.has_gap);
        for (const auto& row : classification_map(win)) {
            const double l2 = std::log2(row.L_lo);
            if (row.kind == BoxKind::Unclassified)
                CHECK((l2 < win.log2_U || (l2 > cov.gap_lo_log2 && l2 < cov.gap_hi_log2)));
        }
    }
    std::ostringstream os;
    write_classification_csv(os, {uvz_windows(1e6, 1.2)});
    CHECK(os.str().rfind("x,c,U,V,Z,L_lo,L_hi,kind\n", 0) == 0);
}

TEST_CASE("type sums against the naive double loop") {
    Parameters p = make_parameters(4e6, 1.1, 0.9, 0.5, 3, 1);
    TypeSumInput in;
    in.box = {1000, 2000, 1000, 2000};
    in.H = 0;
    CHECK(type_sums(in, p) == 0.0);

    in.H = 4;
    in.k = 1;
    const double v = type_sums(in, p);
    const double ref = naive_type_sum(in, p);
    CHECK(std::abs(v - ref) <= 1e-8 * std::max(1.0, ref));

    // degenerate gamma = 1, t = 0, theta = 0
    Parameters q = make_parameters(5000, 1.1, 1.0, 0.0, 1, 0);
    TypeSumInput g;
    g.box = {20, 40, 30, 60};
    g.H = 1;
    CHECK(type_sums(g, q) == doctest::Approx(naive_type_sum(g, q)).epsilon(1e-10));

    // weights and the other variants
    Parameters r = make_parameters(2e5, 1.3, 0.95, -0.7, 4, 3);
    TypeSumInput s;
    s.box = {100, 200, 300, 600};
    s.H = 3;
    s.k = 2;
    s.x1 = 1.5e5;
    s.a = [](std::uint64_t m) { return static_cast<double>(tau_k(m, 5)); };
    s.b = [](std::uint64_t l) { return (l % 3) ? 1.0 : -2.0; };
    for (auto variant : {TypeSumVariant::SI, TypeSumVariant::SIprime, TypeSumVariant::SII}) {
        s.variant = variant;
        const double ref2 = naive_type_sum(s, r);
        CHECK(std::abs(type_sums(s, r) - ref2) <= 1e-8 * std::max(1.0, ref2));
    }

    TypeSumInput big;
    big.box = {5000, 10000, 5000, 10000};
    CHECK_THROWS_AS(type_sums(big, p), Error);
}

TEST_CASE("type II inner sums obey the square-out inequality") {
    Parameters p = make_parameters(4e6, 1.1, 0.9, 0.5, 3, 1);
    TypeSumInput in;
    in.box = {1000, 2000, 1000, 2000};
    in.variant = TypeSumVariant::SII;
    in.k = 1;
    in.b = [](std::uint64_t l) { return 1.0 + 0.5 * std::sin(double(l)); };
    int checked = 0;
    for (std::uint64_t m : {1001u, 1500u, 1999u})
        for (std::int64_t h : {-3, 1, 4}) {
            const auto z = type2_inner(in, p, m, h);
            REQUIRE(!z.empty());
            for (std::uint64_t Q : {1u, 7u, 100u, 1000u}) {
                if (Q > z.size()) continue;
                CHECK(square_out_check(z, 1000.0, Q).holds);
                ++checked;
            }
        }
    CHECK(checked >= 20);
}
