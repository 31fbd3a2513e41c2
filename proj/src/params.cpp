#include "pslab/params.hpp"

#include "pslab/error.hpp"

#include <cmath>
#include <numeric>

namespace pslab {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t Parameters::x_floor() const {
    if (!(x >= 1.0)) return 0;
    return static_cast<std::uint64_t>(std::floor(x));
}

Rational Parameters::c_rational() const { return c_exact ? *c_exact : rational_from_double(c); }

Rational Parameters::gamma_rational() const { return gamma_exact ? *gamma_exact : rational_from_double(gamma); }

void Parameters::validate() const {
    require(std::isfinite(x) && x <= 1e9, ErrorKind::Domain, "x must be finite and at most 1e9");
    require(c > 0.0 && c <= 2.0, ErrorKind::Domain, "c must lie in (0, 2]");
    require(gamma > 0.0 && gamma <= 1.0, ErrorKind::Domain, "gamma must lie in (0, 1]");
    require(std::isfinite(t) && std::abs(t) <= 10.0, ErrorKind::Domain, "|t| must be at most 10");
    require(d >= 1, ErrorKind::Domain, "modulus d must be >= 1");
    require(a < d, ErrorKind::Domain, "residue a must be normalized to [0, d)");
    require(gcd_u64(a, d) == 1, ErrorKind::Domain, "gcd(a, d) must be 1");
    require(delta > 0.0, ErrorKind::Domain, "delta must be positive");
}

bool Parameters::in_theorem_box() const {
    const Rational cq = c_rational();
    const Rational gq = gamma_rational();
    return gq > 0 && gq < 1 && cq > 1 && cq < Rational(28, 19);
}

bool Parameters::region_ok() const {
    const Rational cq = c_rational();
    const Rational gq = gamma_rational();
    return 19 * (cq - 1) + 171 * (1 - gq) < 9;
}

double Parameters::claimed_exponent() const {
    const Rational e = c_rational() / 18 + gamma_rational() / 2 + Rational(143, 342);
    return to_double(e);
}

Parameters make_parameters(double x, double c, double gamma, double t, std::uint64_t d, std::int64_t a,
                           double delta) {
    require(d >= 1, ErrorKind::Domain, "modulus d must be >= 1");
    Parameters p;
    p.x = x;
    p.c = c;
    p.gamma = gamma;
    p.t = t;
    p.d = d;
    const auto sd = static_cast<std::int64_t>(d);
    p.a = static_cast<std::uint64_t>(((a % sd) + sd) % sd);
    p.delta = delta;
    return p;
}

} // namespace pslab
