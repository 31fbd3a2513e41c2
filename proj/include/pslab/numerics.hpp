#pragma once

#include <complex>
#include <cstdint>

namespace pslab {

/// Unevaluated sum hi + lo of two doubles (about 106 significand bits).
///
/// Used wherever a phase t*n^c has tens of integer bits and we still need
/// its fractional part to ~1e-20. Only the operations the evaluators need
/// are provided; this is not a general multiprecision type.
struct ExtReal {
    double hi = 0.0;
    double lo = 0.0;

    constexpr ExtReal() = default;
    constexpr ExtReal(double v) : hi(v), lo(0.0) {} // NOLINT: implicit widening is intended
    constexpr ExtReal(double h, double l) : hi(h), lo(l) {}

    /// Normalizes an arbitrary (h, l) pair so that |lo| <= ulp(hi)/2.
    static ExtReal from_sum(double a, double b);
    static ExtReal from_integer(std::uint64_t n);

    double to_double() const { return hi + lo; }

    ExtReal operator-() const { return {-hi, -lo}; }
    ExtReal& operator+=(const ExtReal& o);
    ExtReal& operator-=(const ExtReal& o);
    ExtReal& operator*=(const ExtReal& o);
    ExtReal& operator/=(const ExtReal& o);

    friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
    friend ExtReal operator-(ExtReal a, const ExtReal& b) { return a -= b; }
    friend ExtReal operator*(ExtReal a, const ExtReal& b) { return a *= b; }
    friend ExtReal operator/(ExtReal a, const ExtReal& b) { return a /= b; }

    friend bool operator<(const ExtReal& a, const ExtReal& b) {
        return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
    }
    friend bool operator==(const ExtReal& a, const ExtReal& b) = default;
};

ExtReal floor(const ExtReal& x);
ExtReal ldexp(const ExtReal& x, int e);
ExtReal exp(const ExtReal& x);
ExtReal log(const ExtReal& x);

/// n^c as exp(c * log n) in extended precision.
ExtReal pow(std::uint64_t n, double c);

/// log n for an integer n >= 1.
ExtReal log_integer(std::uint64_t n);

/// pow(n, c) given log_n = log_integer(n); bit-identical to pow(n, c).
ExtReal pow_with_log(std::uint64_t n, const ExtReal& log_n, double c);

/// Fractional part {x} in [0, 1). Throws ErrorKind::ScaleTooLarge when
/// |x| >= 2^100, where no fractional bits survive.
double frac(const ExtReal& x);
double frac(double x);

/// Sawtooth psi(y) = {y} - 1/2, in [-1/2, 1/2).
double psi(double y);
double psi(const ExtReal& y);

/// Point on the unit circle. Construction checks |z| = 1 to 1e-12.
class UnitComplex {
public:
    UnitComplex(double re, double im);

    double re() const { return re_; }
    double im() const { return im_; }
    std::complex<double> value() const { return {re_, im_}; }
    operator std::complex<double>() const { return value(); } // NOLINT

    friend UnitComplex operator*(const UnitComplex& a, const UnitComplex& b);

private:
    double re_;
    double im_;
};

/// e(y) = exp(2 pi i y); y is reduced mod 1 before any trig call, and the
/// quarter-turn is split off so e(k/4) is exact.
UnitComplex e_of(double y);

/// {t * n^c} with absolute error far below 1e-9.
/// Preconditions: 1 <= n <= 1e9, |t| <= 1e6, 0 < c <= 2 (ErrorKind::Domain).
/// Throws ErrorKind::Precision if |t * n^c| >= 2^70.
double phase_mod1(double t, std::uint64_t n, double c);

/// Same reduction without the argument-range checks, for internal callers
/// that already validated their inputs. Returns the phase and writes the
/// magnitude |t n^c| to *magnitude when non-null.
double phase_mod1_unchecked(double t, std::uint64_t n, double c, double* magnitude = nullptr);

/// {t * power} for a precomputed power = pow(n, c); shares the reduction of
/// phase_mod1_unchecked, including the 2^70 precision check.
double phase_of_power(double t, const ExtReal& power, double* magnitude = nullptr);

/// Error bound for a phase reduced from a value of magnitude `mag`.
double phase_error_bound(double mag);

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v);
    CompensatedSum& operator+=(double v) {
        add(v);
        return *this;
    }
    CompensatedSum& operator+=(const CompensatedSum& o);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexAccumulator {
public:
    void add(std::complex<double> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    ComplexAccumulator& operator+=(std::complex<double> v) {
        add(v);
        return *this;
    }
    ComplexAccumulator& operator+=(const ComplexAccumulator& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

} // namespace pslab
