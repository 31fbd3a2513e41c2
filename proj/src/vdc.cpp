#include "pslab/vdc.hpp"

#include "pslab/error.hpp"
#include "pslab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace pslab {

namespace {

void check_bound_args(double a, double b, double lambda, double C) {
    require(b > a, ErrorKind::Domain, "derivative test needs b > a");
    require(lambda > 0.0 && std::isfinite(lambda), ErrorKind::Domain, "derivative test needs lambda > 0");
    require(C > 0.0, ErrorKind::Domain, "derivative test needs C > 0");
}

constexpr int kSamples = 1000;

} // namespace

double second_derivative_bound(double a, double b, double lambda, double C) {
    check_bound_args(a, b, lambda, C);
    return C * ((b - a) * std::sqrt(lambda) + 1.0 / std::sqrt(lambda));
}

double third_derivative_bound(double a, double b, double lambda, double C) {
    check_bound_args(a, b, lambda, C);
    return C * ((b - a) * std::pow(lambda, 1.0 / 6.0) + std::pow(lambda, -1.0 / 3.0));
}

double second_derivative_argmin(double length) { return 1.0 / length; }

double third_derivative_argmin(double length) { return 4.0 / (length * length); }

double direct_sum_abs(const std::function<double(double)>& f, double a, double b) {
    ComplexAccumulator acc;
    const double first = std::floor(a) + 1.0;
    for (double n = first; n <= b; n += 1.0) acc += e_of(f(n)).value();
    return std::abs(acc.value());
}

BoundReport compare(const PhaseFunction& phase, double a, double b, DerivativeTest test, double C) {
    require(b > a, ErrorKind::Domain, "compare needs b > a");
    const auto& deriv = test == DerivativeTest::Second ? phase.d2 : phase.d3;
    const Bracket declared = test == DerivativeTest::Second ? phase.lambda2 : phase.lambda3;
    require(static_cast<bool>(deriv), ErrorKind::Domain, "phase lacks the derivative for this test");

    Bracket seen{std::numeric_limits<double>::infinity(), 0.0};
    for (int i = 0; i <= kSamples; ++i) {
        const double y = a + (b - a) * i / kSamples;
        const double v = std::abs(deriv(y));
        if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::NotMonomialLike, "not monomial-like: derivative vanishes");
        if (declared.set() && (v < declared.lo || v > declared.hi))
            fail(ErrorKind::NotMonomialLike, "not monomial-like: derivative leaves the declared bracket");
        seen.lo = std::min(seen.lo, v);
        seen.hi = std::max(seen.hi, v);
    }
    BoundReport r;
    r.bracket = declared.set() ? declared : seen;
    r.lambda = std::sqrt(r.bracket.lo * r.bracket.hi);
    r.empirical = direct_sum_abs(phase.eval, a, b);
    r.bound = test == DerivativeTest::Second ? second_derivative_bound(a, b, r.lambda, C)
                                             : third_derivative_bound(a, b, r.lambda, C);
    r.ratio = r.empirical / r.bound;
    return r;
}

SquareOutResult square_out_check(std::span<const std::complex<double>> z, double X, std::uint64_t Q) {
    require(Q >= 1, ErrorKind::Domain, "square-out needs Q >= 1");
    require(X >= 1.0, ErrorKind::Domain, "square-out needs X >= 1");
    const std::size_t len = z.size();
    require(static_cast<double>(len) <= X + 1.0, ErrorKind::Domain, "interval longer than (X, 2X]");
    SquareOutResult r;
    if (len == 0) return r;
    require(Q <= len, ErrorKind::Domain, "square-out needs Q <= |I|");

    ComplexAccumulator total;
    for (const auto& v : z) total += v;
    r.lhs = std::norm(total.value());

    // sum over |q| < Q of (1 - |q|/Q) sum_{n, n+q in I} z(n+q) conj z(n)
    ComplexAccumulator corr;
    const auto Qd = static_cast<double>(Q);
    for (std::int64_t q = -static_cast<std::int64_t>(Q) + 1; q < static_cast<std::int64_t>(Q); ++q) {
        ComplexAccumulator c;
        const std::size_t shift = static_cast<std::size_t>(std::abs(q));
        for (std::size_t n = 0; n + shift < len; ++n) {
            if (q >= 0)
                c += z[n + shift] * std::conj(z[n]);
            else
                c += z[n] * std::conj(z[n + shift]);
        }
        corr += (1.0 - std::abs(static_cast<double>(q)) / Qd) * c.value();
    }
    const std::complex<double> s = corr.value();
    r.rhs = (1.0 + X / Qd) * s.real();
    r.imag_residual = std::abs(s.imag());
    r.holds = r.lhs <= r.rhs + 1e-6 * std::abs(r.rhs);
    return r;
}

PhaseFunction quadratic_phase(double theta) {
    PhaseFunction f;
    f.eval = [theta](double n) { return theta * n * n; };
    f.d2 = [theta](double) { return 2.0 * theta; };
    f.d3 = [](double) { return 0.0; };
    std::ostringstream os;
    os << "quadratic theta=" << theta;
    f.label = os.str();
    return f;
}

PhaseFunction power_phase(double scale, double exponent) {
    PhaseFunction f;
    f.eval = [=](double n) { return scale * std::pow(n, exponent); };
    f.d2 = [=](double n) { return scale * exponent * (exponent - 1.0) * std::pow(n, exponent - 2.0); };
    f.d3 = [=](double n) {
        return scale * exponent * (exponent - 1.0) * (exponent - 2.0) * std::pow(n, exponent - 3.0);
    };
    std::ostringstream os;
    os << "power " << scale << "*n^" << exponent;
    f.label = os.str();
    return f;
}

PhaseFunction bilinear_phase(double t, double h, double m, double c, double gamma) {
    const double A = t * std::pow(m, c);
    const double B = h * std::pow(m, gamma);
    PhaseFunction f;
    f.eval = [=](double l) { return A * std::pow(l, c) + B * std::pow(l, gamma); };
    f.d2 = [=](double l) {
        return A * c * (c - 1.0) * std::pow(l, c - 2.0) + B * gamma * (gamma - 1.0) * std::pow(l, gamma - 2.0);
    };
    f.d3 = [=](double l) {
        return A * c * (c - 1.0) * (c - 2.0) * std::pow(l, c - 3.0) +
               B * gamma * (gamma - 1.0) * (gamma - 2.0) * std::pow(l, gamma - 3.0);
    };
    std::ostringstream os;
    os << "bilinear t=" << t << " h=" << h << " m=" << m;
    f.label = os.str();
    return f;
}

std::vector<SweepRow> derivative_sweep() {
    std::vector<SweepRow> rows;
    auto add = [&](const PhaseFunction& f, double a, double b, DerivativeTest test) {
        rows.push_back({f.label, a, b, test, compare(f, a, b, test)});
    };
    for (double theta : {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1})
        for (double N : {1e3, 3e3, 1e4}) add(quadratic_phase(theta), N, 2.0 * N, DerivativeTest::Second);
    add(quadratic_phase(0.01), 1.0, 1000.0, DerivativeTest::Second);
    add(power_phase(1e-3, 1.5), 1e3, 2e3, DerivativeTest::Second);
    add(power_phase(1e-3, 1.5), 1e3, 2e3, DerivativeTest::Third);
    // t and h of opposite sign keep the two f''' contributions from cancelling
    const double c = 1.1;
    const double gamma = 0.9;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0})
        for (double h : {-1.0, -2.0, -4.0, -8.0}) add(bilinear_phase(t, h, 100.0, c, gamma), 100.0, 200.0, DerivativeTest::Third);
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    const auto old = os.precision(17);
    os << "label,a,b,test,lambda,empirical,bound,ratio\n";
    for (const auto& r : rows)
        os << '"' << r.label << "\"," << r.a << ',' << r.b << ',' << (r.test == DerivativeTest::Second ? "second" : "third")
           << ',' << r.report.lambda << ',' << r.report.empirical << ',' << r.report.bound << ',' << r.report.ratio
           << '\n';
    os.precision(old);
}

SquareOutSweep square_out_random(std::uint64_t seed, std::uint64_t trials, std::size_t n, double X,
                                 const std::vector<std::uint64_t>& Qs) {
    require(n >= 1, ErrorKind::Domain, "square-out sweep needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SquareOutSweep s;
    s.worst_margin = -std::numeric_limits<double>::infinity();
    std::vector<std::complex<double>> z(n);
    for (std::uint64_t k = 0; k < trials; ++k) {
        for (auto& v : z) v = std::polar(1.0, 2.0 * std::numbers::pi * u(rng));
        for (std::uint64_t Q : Qs) {
            const auto r = square_out_check(z, X, std::min<std::uint64_t>(Q, n));
            const double scale = std::max(1.0, std::abs(r.rhs));
            ++s.trials;
            s.violations += !r.holds;
            s.worst_imag = std::max(s.worst_imag, r.imag_residual / scale);
            s.worst_margin = std::max(s.worst_margin, (r.lhs - r.rhs) / scale);
        }
    }
    return s;
}

} // namespace pslab
