#include "pslab/numerics.hpp"

#include "pslab/error.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace pslab {

namespace {

inline double two_sum(double a, double b, double& err) {
    const double s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
    return s;
}

inline double quick_two_sum(double a, double b, double& err) {
    const double s = a + b;
    err = b - (s - a);
    return s;
}

inline double two_prod(double a, double b, double& err) {
    const double p = a * b;
    err = std::fma(a, b, -p);
    return p;
}

constexpr ExtReal kLn2{6.931471805599452862e-01, 2.319046813846299558e-17};

// 1/k! for k = 3..16, each rounded to double-double.
const std::array<ExtReal, 14>& inverse_factorials() {
    static const std::array<ExtReal, 14> table = [] {
        std::array<ExtReal, 14> t{};
        double fact = 2.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            fact *= static_cast<double>(i + 3);
            t[i] = ExtReal(1.0) / ExtReal(fact);
        }
        return t;
    }();
    return table;
}

constexpr double kOneMinus = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;

inline double clamp_unit(double r) {
    if (r >= 1.0) return kOneMinus;
    if (r < 0.0) return 0.0;
    return r;
}

} // namespace

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::ScaleTooLarge: return "scale too large";
    case ErrorKind::Boundary: return "boundary";
    case ErrorKind::RangeTooLarge: return "range too large";
    case ErrorKind::Quadrature: return "quadrature";
    case ErrorKind::SizeCap: return "size cap";
    case ErrorKind::NotMonomialLike: return "not monomial-like";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

ExtReal ExtReal::from_sum(double a, double b) {
    double e = 0.0;
    const double s = two_sum(a, b, e);
    return {s, e};
}

ExtReal ExtReal::from_integer(std::uint64_t n) {
    const auto high = static_cast<double>(n & ~((std::uint64_t{1} << 32) - 1));
    const auto low = static_cast<double>(n & ((std::uint64_t{1} << 32) - 1));
    return from_sum(high, low);
}

ExtReal& ExtReal::operator+=(const ExtReal& o) {
    double s2 = 0.0;
    double t2 = 0.0;
    double s1 = two_sum(hi, o.hi, s2);
    const double t1 = two_sum(lo, o.lo, t2);
    s2 += t1;
    s1 = quick_two_sum(s1, s2, s2);
    s2 += t2;
    hi = quick_two_sum(s1, s2, lo);
    return *this;
}

ExtReal& ExtReal::operator-=(const ExtReal& o) { return *this += -o; }

ExtReal& ExtReal::operator*=(const ExtReal& o) {
    double p2 = 0.0;
    const double p1 = two_prod(hi, o.hi, p2);
    p2 += hi * o.lo + lo * o.hi;
    hi = quick_two_sum(p1, p2, lo);
    return *this;
}

ExtReal& ExtReal::operator/=(const ExtReal& o) {
    const double q1 = hi / o.hi;
    ExtReal r = *this - ExtReal(q1) * o;
    const double q2 = r.hi / o.hi;
    r -= ExtReal(q2) * o;
    const double q3 = r.hi / o.hi;
    double e = 0.0;
    const double s = quick_two_sum(q1, q2, e);
    *this = ExtReal(s, e) + ExtReal(q3);
    return *this;
}

ExtReal floor(const ExtReal& x) {
    const double fh = std::floor(x.hi);
    double fl = 0.0;
    if (fh == x.hi) fl = std::floor(x.lo);
    double e = 0.0;
    const double s = quick_two_sum(fh, fl, e);
    return {s, e};
}

ExtReal ldexp(const ExtReal& x, int e) { return {std::ldexp(x.hi, e), std::ldexp(x.lo, e)}; }

ExtReal exp(const ExtReal& x) {
    constexpr int kSquarings = 9;
    if (x.hi <= -708.0) return {};
    require(x.hi < 709.0, ErrorKind::ScaleTooLarge, "exp overflow");
    if (x.hi == 0.0 && x.lo == 0.0) return ExtReal(1.0);

    const double m = std::floor(x.hi / kLn2.hi + 0.5);
    const ExtReal r = ldexp(x - kLn2 * ExtReal(m), -kSquarings);

    // expm1(r) by Taylor series; |r| < 7e-4 so 12 terms are plenty.
    ExtReal power = r * r;
    ExtReal s = r + ldexp(power, -1);
    power *= r;
    for (const ExtReal& inv : inverse_factorials()) {
        const ExtReal term = power * inv;
        s += term;
        if (std::abs(term.hi) < 1e-36) break;
        power *= r;
    }
    // expm1(2r) = 2 expm1(r) + expm1(r)^2
    for (int i = 0; i < kSquarings; ++i) s = ldexp(s, 1) + s * s;
    s += ExtReal(1.0);
    return ldexp(s, static_cast<int>(m));
}

ExtReal log(const ExtReal& x) {
    require(x.hi > 0.0, ErrorKind::Domain, "log of non-positive value");
    ExtReal y(std::log(x.hi));
    // One Newton step on exp(y) = x doubles the number of correct bits.
    y = y + x * exp(-y) - ExtReal(1.0);
    return y;
}

ExtReal log_integer(std::uint64_t n) {
    require(n >= 1, ErrorKind::Domain, "log of a non-positive integer");
    if (n == 1) return {};
    return log(ExtReal::from_integer(n));
}

ExtReal pow_with_log(std::uint64_t n, const ExtReal& log_n, double c) {
    require(n >= 1, ErrorKind::Domain, "pow base must be positive");
    if (n == 1 || c == 0.0) return ExtReal(1.0);
    if (c == 1.0) return ExtReal::from_integer(n);
    return exp(log_n * ExtReal(c));
}

ExtReal pow(std::uint64_t n, double c) {
    require(n >= 1, ErrorKind::Domain, "pow base must be positive");
    if (n == 1 || c == 0.0) return ExtReal(1.0);
    if (c == 1.0) return ExtReal::from_integer(n);
    return pow_with_log(n, log_integer(n), c);
}

double frac(const ExtReal& x) {
    require(std::isfinite(x.hi), ErrorKind::Domain, "frac of non-finite value");
    require(std::abs(x.hi) < 0x1p100, ErrorKind::ScaleTooLarge, "scale too large");
    const ExtReal r = x - floor(x);
    return clamp_unit(r.hi + r.lo);
}

double frac(double x) {
    require(std::isfinite(x), ErrorKind::Domain, "frac of non-finite value");
    return clamp_unit(x - std::floor(x));
}

double psi(double y) { return frac(y) - 0.5; }

double psi(const ExtReal& y) { return frac(y) - 0.5; }

UnitComplex::UnitComplex(double re, double im) : re_(re), im_(im) {
    require(std::abs(re * re + im * im - 1.0) <= 1e-12, ErrorKind::Domain, "not on the unit circle");
}

UnitComplex operator*(const UnitComplex& a, const UnitComplex& b) {
    const double re = a.re_ * b.re_ - a.im_ * b.im_;
    const double im = a.re_ * b.im_ + a.im_ * b.re_;
    return {re, im};
}

UnitComplex e_of(double y) {
    require(std::isfinite(y), ErrorKind::Domain, "e(y) of non-finite value");
    const double r = y - std::floor(y);
    const double q = std::nearbyint(4.0 * r);
    const double f = r - 0.25 * q;
    const double angle = 2.0 * std::numbers::pi * f;
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    switch (static_cast<int>(q) & 3) {
    case 0: return {cs, sn};
    case 1: return {-sn, cs};
    case 2: return {-cs, -sn};
    default: return {sn, -cs};
    }
}

double phase_mod1_unchecked(double t, std::uint64_t n, double c, double* magnitude) {
    if (t == 0.0) {
        if (magnitude != nullptr) *magnitude = 0.0;
        return 0.0;
    }
    return phase_of_power(t, pow(n, c), magnitude);
}

double phase_of_power(double t, const ExtReal& power, double* magnitude) {
    if (t == 0.0) {
        if (magnitude != nullptr) *magnitude = 0.0;
        return 0.0;
    }
    const ExtReal v = ExtReal(t) * power;
    const double mag = std::abs(v.hi);
    if (magnitude != nullptr) *magnitude = mag;
    require(mag < 0x1p70, ErrorKind::Precision, "precision");
    return frac(v);
}

double phase_mod1(double t, std::uint64_t n, double c) {
    require(n >= 1 && n <= 1'000'000'000, ErrorKind::Domain, "phase_mod1: n out of [1, 1e9]");
    require(std::isfinite(t) && std::abs(t) <= 1e6, ErrorKind::Domain, "phase_mod1: |t| > 1e6");
    require(c > 0.0 && c <= 2.0, ErrorKind::Domain, "phase_mod1: c out of (0, 2]");
    return phase_mod1_unchecked(t, n, c);
}

double phase_error_bound(double mag) { return 0x1p-52 + mag * 0x1p-98; }

void CompensatedSum::add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

CompensatedSum& CompensatedSum::operator+=(const CompensatedSum& o) {
    add(o.sum_);
    comp_ += o.comp_;
    return *this;
}

} // namespace pslab
