#include "pslab/vaaler.hpp"

#include "pslab/error.hpp"
#include "pslab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

namespace pslab {

double vaaler_weight(double u) {
    if (u == 0.0) return 1.0;
    const double pu = std::numbers::pi * u;
    return pu * (1.0 - u) * std::cos(pu) / std::sin(pu) + u;
}

std::complex<double> VaalerCoefficients::a_at(int h) const {
    require(h != 0 && std::abs(h) <= H, ErrorKind::Domain, "a(h) needs 1 <= |h| <= H");
    const auto v = a[static_cast<std::size_t>(std::abs(h) - 1)];
    return h > 0 ? v : std::conj(v);
}

double VaalerCoefficients::b_at(int h) const {
    require(std::abs(h) <= H, ErrorKind::Domain, "b(h) needs |h| <= H");
    return b[static_cast<std::size_t>(std::abs(h))];
}

VaalerCoefficients build_coefficients(int H) {
    require(H >= 1, ErrorKind::Domain, "Vaaler approximation needs H >= 1");
    VaalerCoefficients out;
    out.H = H;
    const double n = H + 1.0;
    out.a.reserve(static_cast<std::size_t>(H));
    for (int h = 1; h <= H; ++h)
        out.a.emplace_back(0.0, vaaler_weight(h / n) / (2.0 * std::numbers::pi * h));
    out.b.reserve(static_cast<std::size_t>(H) + 1);
    for (int h = 0; h <= H; ++h) out.b.push_back((1.0 - h / n) / n);
    return out;
}

PsiApprox approx_psi(double t, const VaalerCoefficients& coeffs) {
    // Both series are real: pair h with -h.
    CompensatedSum approx;
    CompensatedSum major;
    major += coeffs.b[0];
    const double r = frac(t);
    for (int h = 1; h <= coeffs.H; ++h) {
        const std::complex<double> e = e_of(static_cast<double>(h) * r);
        const auto& ah = coeffs.a[static_cast<std::size_t>(h - 1)];
        approx += 2.0 * (ah * e).real();
        major += 2.0 * coeffs.b[static_cast<std::size_t>(h)] * e.real();
    }
    return {approx.value(), major.value()};
}

CoefficientCaps measure_caps(const VaalerCoefficients& coeffs) {
    CoefficientCaps caps;
    for (int h = 1; h <= coeffs.H; ++h)
        caps.kappa_a = std::max(caps.kappa_a, std::abs(coeffs.a[static_cast<std::size_t>(h - 1)]) * h);
    for (double b : coeffs.b) caps.kappa_b = std::max(caps.kappa_b, b * coeffs.H);
    return caps;
}

InequalitySweep sweep_inequality(const VaalerCoefficients& coeffs, std::uint64_t grid, std::uint64_t random_points,
                                 std::uint64_t seed) {
    InequalitySweep out;
    out.worst_excess = -std::numeric_limits<double>::infinity();
    out.min_majorant = std::numeric_limits<double>::infinity();
    auto visit = [&](double t) {
        const PsiApprox v = approx_psi(t, coeffs);
        const double excess = std::abs(psi(t) - v.approx) - v.majorant;
        if (excess > out.worst_excess) {
            out.worst_excess = excess;
            out.worst_at = t;
        }
        out.min_majorant = std::min(out.min_majorant, v.majorant);
        ++out.points;
        return v.majorant;
    };
    CompensatedSum mean;
    for (std::uint64_t i = 0; i < grid; ++i) mean += visit(static_cast<double>(i) / static_cast<double>(grid));
    out.grid_mean_majorant = grid == 0 ? 0.0 : mean.value() / static_cast<double>(grid);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t i = 0; i < random_points; ++i) visit(u(rng));
    return out;
}

void write_coefficients_csv(std::ostream& os, const VaalerCoefficients& coeffs) {
    os << "h,re_a,im_a,b\n";
    const auto old = os.precision(17);
    os << 0 << ',' << 0.0 << ',' << 0.0 << ',' << coeffs.b[0] << '\n';
    for (int h = 1; h <= coeffs.H; ++h) {
        const auto& a = coeffs.a[static_cast<std::size_t>(h - 1)];
        os << h << ',' << a.real() << ',' << a.imag() << ',' << coeffs.b[static_cast<std::size_t>(h)] << '\n';
    }
    os.precision(old);
}

} // namespace pslab
