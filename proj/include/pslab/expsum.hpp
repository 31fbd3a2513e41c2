#pragma once

#include "pslab/params.hpp"
#include "pslab/sieve.hpp"
#include "pslab/vaaler.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace pslab {

struct EvalOptions {
    std::uint64_t segment_size = kDefaultSegmentSize;
};

/// Result of one evaluator. phase_error_bound bounds the distance from
/// value to the exact sum; weight_sum is the sum of |weight| over the terms,
/// so |value| <= weight_sum + phase_error_bound.
struct SumReport {
    std::complex<double> value;
    std::uint64_t n_terms = 0;
    double phase_error_bound = 0.0;
    double weight_sum = 0.0;
    double elapsed = 0.0; // seconds
};

/// Everything one sweep over the primes p <= x, p = a (d) produces.
struct PrimeSums {
    SumReport pi;        // sum e(t p^c)
    SumReport pi_gamma;  // restricted to Piatetski-Shapiro primes
    SumReport gamma1;    // weights (p+1)^gamma - p^gamma
    SumReport gamma2;    // weights psi(-(p+1)^gamma) - psi(-p^gamma)
    SumReport gamma3;    // gamma2 weights times log p
    SumReport main_b;    // gamma * sum p^(gamma-1) e(t p^c)
    double taylor_bound = 0.0;    // sum p^(gamma-2)
    double gamma1_remainder = 0.0; // sum |(p+1)^gamma - p^gamma - gamma p^(gamma-1)|
    std::complex<double> main_a;   // quadrature route, when requested
    double quadrature_error = 0.0; // accumulated Gauss-Kronrod estimate
    bool has_main_a = false;
    double elapsed = 0.0;
};

/// One pass over the primes; with_quadrature also evaluates the main term by
/// adaptive quadrature (method A). Validates params.
PrimeSums prime_sums(const Parameters& params, bool with_quadrature, const EvalOptions& options = {});

SumReport pi_sum(const Parameters& params, const EvalOptions& options = {});
SumReport pi_gamma_sum(const Parameters& params, const EvalOptions& options = {});
SumReport gamma1_sum(const Parameters& params, const EvalOptions& options = {});
SumReport gamma2_sum(const Parameters& params, const EvalOptions& options = {});

/// Both routes to gamma x^(gamma-1) pi(x) + gamma (1-gamma) int_2^x y^(gamma-2) pi(y) dy.
struct MainTerm {
    std::complex<double> method_a; // quadrature of the step-function integral
    std::complex<double> method_b; // closed form gamma * sum p^(gamma-1) e(t p^c)
    double rel_diff = 0.0;         // |A - B| / max(|A|, |B|), 0 when both vanish
    bool agree = true;             // rel_diff <= 1e-6 (or both tiny)
    double quadrature_error = 0.0;
};

inline constexpr double kMainTermTolerance = 1e-6;

/// Throws ErrorKind::Quadrature if a piece of the integral does not converge.
MainTerm rhs_main(const Parameters& params, const EvalOptions& options = {});

struct TheoremReport {
    Parameters params;
    double x = 0.0;
    std::complex<double> lhs;  // pi_gamma
    std::complex<double> main; // method B
    std::complex<double> err;  // lhs - main
    double abs_err = 0.0;
    double ratio_err_main = 0.0;     // |err| / |main|
    double log_err_over_log_x = 0.0; // log|err| / log x; -inf when err = 0
    double err_over_x_gamma = 0.0;   // |err| / x^gamma
    double claimed_exponent = 0.0;

    // exact decomposition pi_gamma = gamma1 + gamma2
    double identity_residual = 0.0;
    double identity_tolerance = 0.0;
    bool identity_ok = true;

    MainTerm main_term;
    double gamma1_remainder = 0.0; // |gamma1 - main|
    double taylor_bound = 0.0;     // sum p^(gamma-2)
    std::uint64_t n_primes = 0;
    double elapsed = 0.0;
};

/// Requires region_ok() unless allow_outside (ErrorKind::Domain).
TheoremReport theorem_check(const Parameters& params, bool allow_outside = false, const EvalOptions& options = {});

/// theorem_check at each x of the schedule (other parameters fixed).
std::vector<TheoremReport> theorem_trend(const Parameters& params, const std::vector<double>& schedule,
                                         bool allow_outside = false, const EvalOptions& options = {});

/// CSV: x, re_lhs, im_lhs, re_main, im_main, abs_err, ratio_err_main,
/// log_err_over_log_x, err_over_x_gamma. No timings, so reruns are identical.
void write_trend_csv(std::ostream& os, const std::vector<TheoremReport>& rows);

/// Sum over n <= x, n = a (d) of Lambda(n) (psi(-(n+1)^gamma) - psi(-n^gamma)) e(t n^c).
SumReport gamma4_sum(const Parameters& params, const EvalOptions& options = {});
/// gamma3 alone (the log p weighted prime sum).
SumReport gamma3_sum(const Parameters& params, const EvalOptions& options = {});

/// The same Lambda-weighted sum over the dyadic window x/2 < n <= x.
/// Requires 4 <= x <= 1e9; params.x is ignored.
SumReport gamma5_sum(double x, const Parameters& params, const EvalOptions& options = {});

/// gamma5 over x, x/2, x/4, ... while the window stays above 4.
std::vector<std::pair<double, SumReport>> gamma5_schedule(double x, const Parameters& params,
                                                          const EvalOptions& options = {});

/// CSV: x, abs_gamma5, claimed_bound with claimed_bound = x^(c/18 + gamma/2 + 143/342).
void write_gamma5_csv(std::ostream& os, const std::vector<std::pair<double, SumReport>>& rows,
                      const Parameters& params);

/// Splitting of gamma5 through the Vaaler approximation of psi:
/// gamma6 uses the truncated series, gamma7 / gamma8 are the majorant sums
/// at -n^gamma and -(n+1)^gamma, and |gamma5 - gamma6| <= gamma7 + gamma8.
struct VaalerSplit {
    std::complex<double> gamma5;
    std::complex<double> gamma6;
    double gamma7 = 0.0;
    double gamma8 = 0.0;
    double lambda_sum = 0.0; // sum Lambda(n) over the window
    double error_bound = 0.0;
};
VaalerSplit gamma5_vaaler_split(double x, const VaalerCoefficients& coeffs, const Parameters& params,
                                const EvalOptions& options = {});

/// sum_{x/2 < n <= x1} Lambda(n) e(t n^c + h n^gamma + k n / d) over all n
/// (no congruence), with x = params.x. Requires 1 <= k <= d.
std::complex<double> weighted_lambda_expsum(double x1, std::int64_t h, const Parameters& params, std::uint64_t k,
                                            const EvalOptions& options = {});

/// sum_{1<=|h|<=H} |weighted_lambda_expsum(x1, h, params, k)|.
double gamma10_sum(double x1, int H, const Parameters& params, std::uint64_t k, const EvalOptions& options = {});

/// sum_{1<=|h|<=H} |sum_{x/2 < n <= x1, n = a (d)} Lambda(n) e(t n^c + h n^gamma)|.
double gamma9_sum(double x1, int H, const Parameters& params, const EvalOptions& options = {});

/// gamma9 rebuilt from the unrestricted sums through the orthogonality of
/// additive characters mod d.
double gamma9_via_characters(double x1, int H, const Parameters& params, const EvalOptions& options = {});

/// sum_{1<=|h|<=H} |sum_{x/2 < n <= x, n = a (d)} Lambda(n) e(-h n^gamma)|, x = params.x.
double gamma11_sum(int H, const Parameters& params, const EvalOptions& options = {});

} // namespace pslab
