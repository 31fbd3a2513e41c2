#pragma once

#include "pslab/rational.hpp"

#include <cstdint>
#include <optional>

namespace pslab {

/// The tuple (x, c, gamma, t, d, a, delta) that drives every sum.
///
/// c and gamma may carry exact rational values (as typed on the command
/// line); when absent, the exact binary value of the double is used for
/// the region test.
struct Parameters {
    double x = 1e4;
    double c = 1.05;
    double gamma = 0.995;
    double t = 0.5;
    std::uint64_t d = 1;
    std::uint64_t a = 0; // normalized residue, 0 <= a < d
    double delta = 1e-3;

    std::optional<Rational> c_exact;
    std::optional<Rational> gamma_exact;

    /// Largest integer n with n <= x (0 for x < 1).
    std::uint64_t x_floor() const;

    /// Rejects parameter sets the evaluators cannot handle: 0 < c <= 2,
    /// 0 < gamma <= 1, |t| <= 10, d >= 1, gcd(a, d) = 1, delta > 0,
    /// x <= 1e9. Throws ErrorKind::Domain.
    void validate() const;

    /// 0 < gamma < 1 < c < 28/19, exact.
    bool in_theorem_box() const;

    /// 19(c - 1) + 171(1 - gamma) < 9, exact.
    bool region_ok() const;

    /// c/18 + gamma/2 + 143/342, exact before the final rounding.
    double claimed_exponent() const;

    Rational c_rational() const;
    Rational gamma_rational() const;
};

/// Builds Parameters with d, a normalized (a reduced mod d, possibly negative input).
Parameters make_parameters(double x, double c, double gamma, double t, std::uint64_t d, std::int64_t a,
                           double delta = 1e-3);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

} // namespace pslab
