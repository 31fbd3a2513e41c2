#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace pslab {

/// Trigonometric approximation of psi of degree H with a nonnegative
/// majorant:
///   |psi(t) - sum_{1<=|h|<=H} a(h) e(ht)| <= sum_{|h|<=H} b(h) e(ht).
///
/// a(h) = i phi(h/(H+1)) / (2 pi h) with Vaaler's weight
/// phi(u) = pi u (1 - u) cot(pi u) + u, and b(h) the Fejer coefficients
/// (1 - |h|/(H+1)) / (H+1).
struct VaalerCoefficients {
    int H = 0;
    std::vector<std::complex<double>> a; // a[h - 1] = a(h), 1 <= h <= H
    std::vector<double> b;               // b[h] = b(h), 0 <= h <= H

    std::complex<double> a_at(int h) const;
    double b_at(int h) const;
};

/// Vaaler's weight phi(u) for 0 <= u < 1; phi(0) = 1.
double vaaler_weight(double u);

/// Requires H >= 1 (ErrorKind::Domain).
VaalerCoefficients build_coefficients(int H);

struct PsiApprox {
    double approx = 0.0;
    double majorant = 0.0;
};

/// Truncated series and majorant at t, both by direct summation.
PsiApprox approx_psi(double t, const VaalerCoefficients& coeffs);

/// Largest |a(h)|*|h| and b(h)*H over the table.
struct CoefficientCaps {
    double kappa_a = 0.0;
    double kappa_b = 0.0;
};
CoefficientCaps measure_caps(const VaalerCoefficients& coeffs);

/// Worst value of |psi - approx| - majorant and the smallest majorant over
/// a uniform grid of `grid` points on [0, 1) plus `random_points` uniform
/// samples drawn from `seed`.
struct InequalitySweep {
    double worst_excess = 0.0;
    double worst_at = 0.0;
    double min_majorant = 0.0;
    double grid_mean_majorant = 0.0;
    std::uint64_t points = 0;
};
InequalitySweep sweep_inequality(const VaalerCoefficients& coeffs, std::uint64_t grid, std::uint64_t random_points,
                                 std::uint64_t seed);

/// CSV with columns h, re_a, im_a, b for 0 <= h <= H.
void write_coefficients_csv(std::ostream& os, const VaalerCoefficients& coeffs);

} // namespace pslab
