#include "pslab/error.hpp"
#include "pslab/expsum.hpp"
#include "pslab/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <vector>

using namespace pslab;

namespace {

// Naive reference: trial division, long double powers, no compensation.
using cld = std::complex<long double>;

bool is_prime_naive(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

long double lambda_naive(std::uint64_t n) {
    if (n < 2) return 0.0L;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q != 0) continue;
        std::uint64_t m = n;
        while (m % q == 0) m /= q;
        return m == 1 ? std::log(static_cast<long double>(q)) : 0.0L;
    }
    return std::log(static_cast<long double>(n));
}

long double frac_l(long double y) { return y - std::floor(y); }
long double psi_l(long double y) { return frac_l(y) - 0.5L; }

cld e_l(long double y) {
    const long double r = 2.0L * std::numbers::pi_v<long double> * frac_l(y);
    return {std::cos(r), std::sin(r)};
}

long double powl_(std::uint64_t n, double c) { return std::pow(static_cast<long double>(n), static_cast<long double>(c)); }

long double phase_l(const Parameters& p, std::uint64_t n) { return static_cast<long double>(p.t) * powl_(n, p.c); }

bool in_ap(const Parameters& p, std::uint64_t n) { return n % p.d == p.a; }

double rel(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

Parameters P(double x, double c, double gamma, double t, std::uint64_t d, std::int64_t a) {
    return make_parameters(x, c, gamma, t, d, a);
}

} // namespace

TEST_CASE("pi_sum examples") {
    CHECK(pi_sum(P(20, 1.05, 0.995, 0.0, 4, 1)).value == std::complex<double>(3.0, 0.0));
    CHECK(pi_sum(P(1.5, 1.05, 0.995, 0.3, 1, 0)).value == std::complex<double>(0.0, 0.0));
    CHECK(pi_sum(P(1.5, 1.05, 0.995, 0.3, 1, 0)).n_terms == 0);
    const auto r = pi_sum(P(10, 1.0, 0.995, 1.0, 1, 0));
    CHECK(r.value == std::complex<double>(4.0, 0.0));
    CHECK(r.n_terms == 4);
}

TEST_CASE("pi_gamma_sum examples") {
    const auto p1 = P(5000, 1.1, 1.0, 0.37, 3, 2);
    CHECK(pi_gamma_sum(p1).value == pi_sum(p1).value);
    CHECK(pi_gamma_sum(P(1.9, 1.1, 0.9, 0.37, 1, 0)).value == std::complex<double>(0.0, 0.0));

    const double gamma = 0.95;
    std::set<std::uint64_t> marked;
    for (std::uint64_t n = 1;; ++n) {
        const auto v = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<long double>(n), 1.0L / gamma)));
        if (v > 100000) break;
        marked.insert(v);
    }
    std::uint64_t oracle = 0;
    for (auto v : marked) oracle += is_prime_naive(v);
    const auto r = pi_gamma_sum(P(1e5, 1.05, gamma, 0.0, 1, 0));
    CHECK(r.value.real() == static_cast<double>(oracle));
    CHECK(r.n_terms == oracle);
}

TEST_CASE("exact decomposition on random parameter sets") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uc(1.0, 1.47), ug(0.85, 1.0), ut(-10.0, 10.0), ux(2.0, 5.0);
    const std::uint64_t moduli[] = {1, 2, 3, 5, 7, 12};
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t d = moduli[i % 6];
        std::int64_t a = 1;
        if (d == 12) a = 7;
        const auto p = P(std::pow(10.0, ux(rng)), uc(rng), ug(rng), ut(rng), d, a);
        const auto s = prime_sums(p, false);
        const double weights = s.gamma1.weight_sum + s.gamma2.weight_sum + s.pi_gamma.weight_sum;
        INFO("x=" << p.x << " c=" << p.c << " gamma=" << p.gamma << " t=" << p.t << " d=" << d);
        CHECK(std::abs(s.pi_gamma.value - s.gamma1.value - s.gamma2.value) <= 1e-8 * (1.0 + weights));
        for (const SumReport* r : {&s.pi, &s.pi_gamma, &s.gamma1, &s.gamma2, &s.main_b})
            CHECK(std::abs(r->value) <= r->weight_sum + r->phase_error_bound);
        CHECK(s.gamma1_remainder <= 1.1 * s.taylor_bound);
        CHECK(std::abs(s.gamma1.value - s.main_b.value) <= 1.1 * s.taylor_bound);
    }
}

TEST_CASE("gamma = 1 degenerates") {
    const auto p = P(3000, 1.3, 1.0, 0.77, 5, 2);
    const auto s = prime_sums(p, true);
    CHECK(s.gamma1.value == s.pi.value);
    CHECK(s.gamma2.value == std::complex<double>(0.0, 0.0));
    CHECK(s.main_a == s.pi.value);
    CHECK(s.main_b.value == s.pi.value);
    const auto r = theorem_check(p);
    CHECK(r.abs_err <= 1e-9);
}

TEST_CASE("gamma1 and gamma2 against a naive oracle") {
    const auto p = P(100, 1.1, 0.9, 0.0, 1, 0);
    long double g1 = 0, g2 = 0;
    for (std::uint64_t n = 2; n <= 100; ++n) {
        if (!is_prime_naive(n)) continue;
        const long double a = powl_(n, 0.9), b = powl_(n + 1, 0.9);
        g1 += b - a;
        g2 += psi_l(-b) - psi_l(-a);
    }
    CHECK(std::abs(gamma1_sum(p).value - std::complex<double>(static_cast<double>(g1))) < 1e-12);
    CHECK(std::abs(gamma2_sum(p).value - std::complex<double>(static_cast<double>(g2))) < 1e-12);

    // with oscillation and a progression
    const auto q = P(2000, 1.2, 0.93, 0.61, 7, 3);
    cld o1 = 0, o2 = 0, pig = 0;
    for (std::uint64_t n = 2; n <= 2000; ++n) {
        if (!is_prime_naive(n) || !in_ap(q, n)) continue;
        const long double a = powl_(n, q.gamma), b = powl_(n + 1, q.gamma);
        const cld e = e_l(phase_l(q, n));
        o1 += (b - a) * e;
        o2 += (psi_l(-b) - psi_l(-a)) * e;
        pig += (std::ceil(b) - std::ceil(a)) * e;
    }
    const auto s = prime_sums(q, false);
    CHECK(rel(s.gamma1.value, std::complex<double>(o1)) < 1e-12);
    CHECK(rel(s.gamma2.value, std::complex<double>(o2)) < 1e-12);
    CHECK(rel(s.pi_gamma.value, std::complex<double>(pig)) < 1e-12);
}

TEST_CASE("rhs_main routes") {
    const auto deg = P(5000, 1.1, 1.0, 0.5, 3, 1);
    const auto m1 = rhs_main(deg);
    CHECK(m1.method_a == pi_sum(deg).value);
    CHECK(m1.method_b == pi_sum(deg).value);

    const auto p = P(1e4, 1.1, 0.9, 0.5, 3, 1);
    const auto m = rhs_main(p);
    CHECK(m.agree);
    CHECK(m.rel_diff <= 1e-6);

    cld b = 0;
    for (std::uint64_t n = 2; n <= 10000; ++n)
        if (is_prime_naive(n) && in_ap(p, n)) b += 0.9L * powl_(n, -0.1) * e_l(phase_l(p, n));
    CHECK(rel(m.method_b, std::complex<double>(b)) < 1e-12);

    // the step-function integral in closed form, prime by prime
    {
        std::vector<std::uint64_t> ps;
        for (std::uint64_t n = 2; n <= 10000; ++n)
            if (is_prime_naive(n) && in_ap(p, n)) ps.push_back(n);
        cld run = 0, integral = 0;
        const long double g = 0.9L;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            run += e_l(phase_l(p, ps[i]));
            const long double lo = ps[i];
            const long double hi = i + 1 < ps.size() ? ps[i + 1] : 10000.0L;
            integral += run * (std::pow(hi, g - 1) - std::pow(lo, g - 1)) / (g - 1);
        }
        const cld a = g * std::pow(10000.0L, g - 1) * run + g * (1 - g) * integral;
        CHECK(rel(m.method_a, std::complex<double>(a)) < 1e-10);
    }

    const auto tiny = rhs_main(P(1.7, 1.1, 0.9, 0.5, 1, 0));
    CHECK(tiny.method_a == std::complex<double>(0.0, 0.0));
    CHECK(tiny.method_b == std::complex<double>(0.0, 0.0));

    // non-integer x picks up the tail of the integral
    const auto frac_x = rhs_main(P(1000.5, 1.2, 0.8, 0.25, 1, 0));
    CHECK(frac_x.rel_diff <= 1e-6);
}

TEST_CASE("theorem_check") {
    Parameters p = P(1e4, 1.01, 0.999, 0.5, 3, 1);
    const auto r = theorem_check(p);
    CHECK(std::abs(r.claimed_exponent - 0.97374) < 5e-6);
    CHECK(r.err == r.lhs - r.main);
    CHECK(r.identity_ok);
    CHECK(r.main_term.agree);
    CHECK(r.n_primes > 0);

    const auto outside = P(1e4, 1.4, 0.91, 0.5, 1, 0);
    try {
        theorem_check(outside);
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
    CHECK_NOTHROW(theorem_check(outside, true));

    const auto rows = theorem_trend(P(1, 1.05, 0.995, 0.5, 3, 1), {1e3, 1e4});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].x == 1e3);
    std::ostringstream os;
    write_trend_csv(os, rows);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("results do not depend on segmentation or thread count") {
    const auto p = P(2e5, 1.17, 0.91, 3.3, 5, 4);
    set_worker_count(1);
    const auto base = prime_sums(p, true);
    EvalOptions small;
    small.segment_size = 997;
    set_worker_count(4);
    const auto split = prime_sums(p, true, small);
    const auto split_again = prime_sums(p, true, small);
    set_worker_count(0);
    CHECK(split.pi_gamma.value == split_again.pi_gamma.value);
    CHECK(split.main_a == split_again.main_a);
    CHECK(std::abs(base.pi_gamma.value - split.pi_gamma.value) <= base.pi_gamma.phase_error_bound);
    CHECK(std::abs(base.gamma2.value - split.gamma2.value) <= base.gamma2.phase_error_bound);
    CHECK(std::abs(base.main_a - split.main_a) <= 1e-9 * std::abs(base.main_a));
    set_worker_count(1);
    const auto g5a = gamma5_sum(1e5, p, small);
    set_worker_count(0);
    const auto g5b = gamma5_sum(1e5, p);
    CHECK(std::abs(g5a.value - g5b.value) <= g5a.phase_error_bound);
}

TEST_CASE("gamma5 family") {
    CHECK(gamma5_sum(1e4, P(1, 1.2, 1.0, 0.4, 1, 0)).value == std::complex<double>(0.0, 0.0));
    CHECK_THROWS_AS(gamma5_sum(3.0, P(1, 1.2, 0.9, 0.4, 1, 0)), Error);
    // d > x: at most one n in the class
    CHECK(gamma5_sum(50, P(1, 1.2, 0.9, 0.4, 101, 37)).n_terms <= 1);

    const auto p = P(1, 1.1, 0.9, 0.5, 3, 1);
    cld g5 = 0;
    for (std::uint64_t n = 5001; n <= 10000; ++n) {
        if (!in_ap(p, n)) continue;
        const long double L = lambda_naive(n);
        if (L == 0) continue;
        g5 += L * (psi_l(-powl_(n + 1, p.gamma)) - psi_l(-powl_(n, p.gamma))) * e_l(phase_l(p, n));
    }
    const auto r = gamma5_sum(1e4, p);
    CHECK(rel(r.value, std::complex<double>(g5)) < 1e-11);
    CHECK(std::abs(r.value) <= r.weight_sum + r.phase_error_bound);

    const auto sched = gamma5_schedule(1e4, p);
    CHECK(sched.size() == 12);
    CHECK(sched[0].second.value == r.value);
    std::ostringstream os;
    write_gamma5_csv(os, sched, p);
    CHECK(os.str().rfind("x,abs_gamma5,claimed_bound\n", 0) == 0);
}

TEST_CASE("gamma3 against gamma4") {
    const auto p = P(1e5, 1.1, 0.9, 0.5, 3, 1);
    const auto g3 = gamma3_sum(p);
    const auto g4 = gamma4_sum(p);
    // the difference is carried by proper prime powers, each |psi difference| <= 1
    long double higher = 0;
    for (std::uint64_t q = 2; q * q <= 100000; ++q) {
        if (!is_prime_naive(q)) continue;
        for (std::uint64_t n = q * q; n <= 100000; n *= q)
            if (in_ap(p, n)) higher += std::log(static_cast<long double>(q));
    }
    CHECK(std::abs(g4.value - g3.value) <= static_cast<double>(higher) + 1e-9);
    MESSAGE("|gamma3 - gamma4| = " << std::abs(g4.value - g3.value) << ", 3 sqrt(x) log x = "
                                   << 3 * std::sqrt(1e5) * std::log(1e5));
}

TEST_CASE("Vaaler split of gamma5") {
    const auto p = P(1, 1.1, 0.9, 0.5, 3, 1);
    for (int H : {1, 5, 20}) {
        const auto coeffs = build_coefficients(H);
        const auto s = gamma5_vaaler_split(2e4, coeffs, p);
        CHECK(rel(s.gamma5, gamma5_sum(2e4, p).value) < 1e-12);
        CHECK(std::abs(s.gamma5 - s.gamma6) <= s.gamma7 + s.gamma8 + s.error_bound);
        CHECK(s.gamma7 >= 0.0);
        CHECK(s.gamma8 >= 0.0);
        // the majorant averages to b(0) over the window
        CHECK(s.gamma7 <= 3.0 * coeffs.b_at(0) * s.lambda_sum);
    }
}

TEST_CASE("gamma11") {
    CHECK(gamma11_sum(0, P(1e4, 1.1, 0.9, 0.5, 1, 0)) == 0.0);
    const auto one = P(1e4, 1.1, 1.0, 0.5, 1, 0);
    long double lam = 0;
    for (std::uint64_t n = 5001; n <= 10000; ++n) lam += lambda_naive(n);
    CHECK(gamma11_sum(3, one) == doctest::Approx(6.0 * static_cast<double>(lam)).epsilon(1e-12));

    const auto p = P(1e4, 1.1, 0.9, 0.5, 1, 0);
    long double oracle = 0;
    for (int h = -4; h <= 4; ++h) {
        if (h == 0) continue;
        cld inner = 0;
        for (std::uint64_t n = 5001; n <= 10000; ++n) {
            const long double L = lambda_naive(n);
            if (L != 0) inner += L * e_l(-h * powl_(n, 0.9));
        }
        oracle += std::abs(inner);
    }
    const double got = gamma11_sum(4, p);
    CHECK(std::abs(got - static_cast<double>(oracle)) <= 1e-8 * std::max(1.0, got));
}

TEST_CASE("weighted lambda sums and gamma9 / gamma10") {
    const auto zero = P(1e4, 1.1, 0.9, 0.0, 5, 1);
    long double lam = 0;
    for (std::uint64_t n = 5001; n <= 10000; ++n) lam += lambda_naive(n);
    const auto w0 = weighted_lambda_expsum(1e4, 0, zero, 5);
    CHECK(w0.real() == doctest::Approx(static_cast<double>(lam)).epsilon(1e-12));
    CHECK(std::abs(w0.imag()) < 1e-9);

    const auto p = P(1e4, 1.1, 0.9, 0.5, 5, 1);
    cld oracle = 0;
    for (std::uint64_t n = 5001; n <= 10000; ++n) {
        const long double L = lambda_naive(n);
        if (L != 0) oracle += L * e_l(phase_l(p, n) + powl_(n, 0.9) + static_cast<long double>(n) / 5.0L);
    }
    const auto w = weighted_lambda_expsum(1e4, 1, p, 1);
    CHECK(std::abs(w - std::complex<double>(oracle)) <= 1e-8 * std::max(1.0, std::abs(w)));

    CHECK(weighted_lambda_expsum(5000, 1, p, 1) == std::complex<double>(0.0, 0.0));
    CHECK(weighted_lambda_expsum(4000, 1, p, 1) == std::complex<double>(0.0, 0.0));
    CHECK_THROWS_AS(weighted_lambda_expsum(2e4, 1, p, 1), Error);
    CHECK_THROWS_AS(weighted_lambda_expsum(1e4, 1, p, 6), Error);

    // gamma10 is the h-sum of |weighted_lambda_expsum|
    double direct = 0;
    for (int h = -3; h <= 3; ++h)
        if (h != 0) direct += std::abs(weighted_lambda_expsum(8000, h, p, 2));
    CHECK(gamma10_sum(8000, 3, p, 2) == doctest::Approx(direct).epsilon(1e-12));

    // gamma9 restricted to the progression equals its character expansion
    for (std::uint64_t d : {1ull, 3ull, 5ull}) {
        const auto q = P(1e4, 1.1, 0.9, 0.5, d, 1);
        const double g9 = gamma9_sum(9000, 3, q);
        CHECK(g9 == doctest::Approx(gamma9_via_characters(9000, 3, q)).epsilon(1e-10));
        CHECK(gamma9_sum(9000, 0, q) == 0.0);
    }
}
