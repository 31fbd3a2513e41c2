#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pslab {

/// C ((b - a) lambda^(1/2) + lambda^(-1/2)). Requires b > a, lambda > 0, C > 0.
double second_derivative_bound(double a, double b, double lambda, double C = 1.0);

/// C ((b - a) lambda^(1/6) + lambda^(-1/3)). Same preconditions.
double third_derivative_bound(double a, double b, double lambda, double C = 1.0);

/// Value of lambda that minimizes each bound for an interval of length L:
/// 1/L for the second-derivative test and 4/L^2 for the third.
double second_derivative_argmin(double length);
double third_derivative_argmin(double length);

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    bool set() const { return hi > 0.0; }
};

/// A phase f with its second and third derivatives. The optional brackets
/// bound |f''| and |f'''| on the interval; unset brackets are measured.
struct PhaseFunction {
    std::function<double(double)> eval;
    std::function<double(double)> d2;
    std::function<double(double)> d3;
    Bracket lambda2;
    Bracket lambda3;
    std::string label;
};

enum class DerivativeTest { Second, Third };

struct BoundReport {
    double empirical = 0.0; // |sum_{a < n <= b} e(f(n))|
    double bound = 0.0;
    double ratio = 0.0;     // empirical / bound
    double lambda = 0.0;
    Bracket bracket;
};

/// Samples |f''| (or |f'''|) at 1000 points of [a, b], takes lambda as the
/// geometric mean of the observed bracket and compares the direct sum with
/// the chosen bound. Throws ErrorKind::NotMonomialLike if the derivative
/// vanishes or leaves the declared bracket.
BoundReport compare(const PhaseFunction& phase, double a, double b, DerivativeTest test, double C = 1.0);

/// |sum_{a < n <= b} e(f(n))| by direct compensated summation.
double direct_sum_abs(const std::function<double(double)>& f, double a, double b);

struct SquareOutResult {
    double lhs = 0.0;          // |sum z(n)|^2
    double rhs = 0.0;          // (1 + X/Q) sum_{|q|<Q} (1 - |q|/Q) Re sum z(n+q) conj z(n)
    double imag_residual = 0.0; // imaginary part of the correlation sum
    bool holds = true;         // lhs <= rhs + 1e-6 rhs
};

/// Weyl-van der Corput inequality for z on an interval I inside (X, 2X].
/// Requires Q >= 1, X >= 1, |I| <= X + 1 and Q <= |I| when I is nonempty
/// (ErrorKind::Domain).
SquareOutResult square_out_check(std::span<const std::complex<double>> z, double X, std::uint64_t Q);

struct SquareOutSweep {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double worst_imag = 0.0;   // imag_residual / max(1, |rhs|)
    double worst_margin = 0.0; // max over trials of (lhs - rhs) / max(1, |rhs|)
};

/// Random unimodular sequences of length n on (X, 2X], one square-out check
/// per (trial, Q); Q values above n are clamped to n.
SquareOutSweep square_out_random(std::uint64_t seed, std::uint64_t trials, std::size_t n, double X,
                                 const std::vector<std::uint64_t>& Qs);

/// Monomial phase families used by the acceptance sweep.
PhaseFunction quadratic_phase(double theta);                 // theta n^2
PhaseFunction power_phase(double scale, double exponent);   // scale n^exponent
/// f(l) = t m^c l^c + h m^gamma l^gamma for fixed m.
PhaseFunction bilinear_phase(double t, double h, double m, double c, double gamma);

struct SweepRow {
    std::string label;
    double a = 0.0;
    double b = 0.0;
    DerivativeTest test = DerivativeTest::Second;
    BoundReport report;
};

/// The fixed sweep of (phase, interval, test) triples checked against the
/// ratio cap: quadratic phases on (N, 2N], power phases, and the bilinear
/// family with M = L = 100.
std::vector<SweepRow> derivative_sweep();

/// CSV: label, a, b, test, lambda, empirical, bound, ratio.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

} // namespace pslab
