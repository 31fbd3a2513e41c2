#include "pslab/expsum.hpp"

#include "pslab/error.hpp"
#include "pslab/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace pslab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Per-term rounding allowance for forming weight * e(phase) and adding it.
constexpr double kTermRounding = 0x1p-50;
constexpr double kNearInteger = 1e-9;
constexpr double kOneMinus = 1.0 - 0x1p-53;

struct TermAcc {
    ComplexAccumulator value;
    std::uint64_t n = 0;
    CompensatedSum weight;
    double err = 0.0;

    void add(double w, std::complex<double> e, double phase_err) {
        value += w * e;
        ++n;
        weight += std::abs(w);
        err += std::abs(w) * (kTwoPi * phase_err + kTermRounding);
    }
    void merge(const TermAcc& o) {
        value += o.value;
        n += o.n;
        weight += o.weight;
        err += o.err;
    }
    SumReport report(double elapsed) const { return {value.value(), n, err, weight.value(), elapsed}; }
};

/// psi(-m^gamma) with the floor decision certified when m^gamma sits within
/// 1e-9 of an integer.
double psi_neg_power(std::uint64_t m, double gamma, const ExtReal& y) {
    if (gamma == 1.0) return -0.5;
    const double k = std::nearbyint(y.hi);
    const double dist = (y - ExtReal(k)).to_double();
    if (std::abs(dist) >= kNearInteger) return psi(-y);
    const int s = compare_power(m, gamma, static_cast<std::uint64_t>(k));
    if (s == 0) return -0.5;
    const double f = s > 0 ? std::min(1.0 - std::abs(dist), kOneMinus) : std::abs(dist);
    return f - 0.5;
}

struct Point {
    double phase = 0.0; // {t n^c}
    double phase_err = 0.0;
    ExtReal n_gamma;
};

Point make_point(std::uint64_t n, const ExtReal& log_n, const Parameters& params) {
    Point pt;
    if (params.t != 0.0) {
        double mag = 0.0;
        pt.phase = phase_of_power(params.t, pow_with_log(n, log_n, params.c), &mag);
        pt.phase_err = phase_error_bound(mag);
    }
    pt.n_gamma = pow_with_log(n, log_n, params.gamma);
    return pt;
}

/// Segments (lo, hi] into sieve blocks, applies seg(table) -> Acc on the
/// worker pool and merges the block results in ascending order.
template <class Acc, class SegFn>
Acc scan(std::uint64_t lo, std::uint64_t hi, const EvalOptions& options, SegFn&& seg) {
    Acc total{};
    if (hi <= lo) return total;
    SieveOptions so;
    so.mobius = false;
    so.segment_size = options.segment_size;
    for (std::uint64_t s = lo; s < hi; s += kMaxSegmentSpan) {
        const std::uint64_t e = std::min(hi, s + kMaxSegmentSpan);
        const auto parts = map_segments<Acc>(s, e, so, seg);
        for (const auto& part : parts) total.merge(part);
    }
    return total;
}

std::uint64_t floor_u64(double x) { return x < 1.0 ? 0 : static_cast<std::uint64_t>(std::floor(x)); }

double integrate_power(double a, double b, double exponent, double& err_acc) {
    if (b <= a) return 0.0;
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [exponent](double y) { return std::pow(y, exponent); }, a, b, 15, 1e-13, &err);
    require(err <= 1e-9 * std::abs(v) + 1e-300, ErrorKind::Quadrature, "quadrature did not converge");
    err_acc += err;
    return v;
}

struct PrimeAcc {
    TermAcc pi, pig, g1, g2, g3, main_b;
    CompensatedSum taylor, remainder;

    // Method A. Inside a block: J = integral of y^(gamma-2) over the block,
    // K = sum of (block-local prefix of pi) * (integral over its piece).
    // Merging adds pi_before * J + K to the running integral.
    CompensatedSum J;
    ComplexAccumulator K;
    ComplexAccumulator integral;
    double quad_err = 0.0;

    void merge(const PrimeAcc& o) {
        const std::complex<double> before = pi.value.value();
        integral += before * o.J.value();
        integral += o.K;
        quad_err += o.quad_err;
        pi.merge(o.pi);
        pig.merge(o.pig);
        g1.merge(o.g1);
        g2.merge(o.g2);
        g3.merge(o.g3);
        main_b.merge(o.main_b);
        taylor += o.taylor;
        remainder += o.remainder;
    }
};

} // namespace

PrimeSums prime_sums(const Parameters& params, bool with_quadrature, const EvalOptions& options) {
    params.validate();
    const auto start = Clock::now();
    const double gamma = params.gamma;
    const std::uint64_t top = floor_u64(params.x);
    const bool quad = with_quadrature && gamma != 1.0;

    auto seg = [&](const PrimeTable& table) {
        PrimeAcc acc;
        ComplexAccumulator local;
        double prev = std::max<double>(static_cast<double>(table.lo()), 2.0);
        table.for_each_prime([&](std::uint64_t p) {
            if (p % params.d != params.a) return;
            const ExtReal log_p = log_integer(p);
            const ExtReal log_p1 = log_integer(p + 1);
            const Point pt = make_point(p, log_p, params);
            const ExtReal pg = pt.n_gamma;
            const ExtReal pg1 = pow_with_log(p + 1, log_p1, gamma);
            const std::complex<double> e = e_of(pt.phase).value();

            const int ind = ps_indicator(p, gamma, pg, pg1);
            const double w1 = (pg1 - pg).to_double();
            const double w2 = psi_neg_power(p + 1, gamma, pg1) - psi_neg_power(p, gamma, pg);
            const ExtReal pgm1 = pg / ExtReal::from_integer(p);
            const double mb = gamma * pgm1.to_double();

            acc.pi.add(1.0, e, pt.phase_err);
            if (ind != 0) acc.pig.add(ind, e, pt.phase_err);
            acc.g1.add(w1, e, pt.phase_err);
            acc.g2.add(w2, e, pt.phase_err);
            acc.g3.add(log_p.to_double() * w2, e, pt.phase_err);
            acc.main_b.add(mb, e, pt.phase_err);
            acc.taylor += (pgm1 / ExtReal::from_integer(p)).to_double();
            acc.remainder += std::abs(w1 - mb);

            if (quad) {
                const double pd = static_cast<double>(p);
                const double piece = integrate_power(prev, pd, gamma - 2.0, acc.quad_err);
                acc.J += piece;
                acc.K += local.value() * piece;
                local += e;
                prev = pd;
            }
        });
        if (quad && static_cast<double>(table.hi()) > prev) {
            const double piece = integrate_power(prev, static_cast<double>(table.hi()), gamma - 2.0, acc.quad_err);
            acc.J += piece;
            acc.K += local.value() * piece;
        }
        return acc;
    };

    PrimeAcc total = scan<PrimeAcc>(0, top, options, seg);
    const double elapsed = seconds_since(start);

    PrimeSums out;
    out.pi = total.pi.report(elapsed);
    out.pi_gamma = total.pig.report(elapsed);
    out.gamma1 = total.g1.report(elapsed);
    out.gamma2 = total.g2.report(elapsed);
    out.gamma3 = total.g3.report(elapsed);
    out.main_b = total.main_b.report(elapsed);
    out.taylor_bound = total.taylor.value();
    out.gamma1_remainder = total.remainder.value();
    if (with_quadrature) {
        out.has_main_a = true;
        const std::complex<double> pix = out.pi.value;
        if (gamma == 1.0 || top < 2) {
            out.main_a = params.x < 2.0 ? std::complex<double>{} : pix;
        } else {
            double qerr = total.quad_err;
            const double tail = integrate_power(static_cast<double>(top), params.x, gamma - 2.0, qerr);
            ComplexAccumulator integral = total.integral;
            integral += pix * tail;
            out.main_a = gamma * std::pow(params.x, gamma - 1.0) * pix + gamma * (1.0 - gamma) * integral.value();
            out.quadrature_error = qerr;
        }
    }
    out.elapsed = seconds_since(start);
    return out;
}

SumReport pi_sum(const Parameters& params, const EvalOptions& options) {
    return prime_sums(params, false, options).pi;
}
SumReport pi_gamma_sum(const Parameters& params, const EvalOptions& options) {
    return prime_sums(params, false, options).pi_gamma;
}
SumReport gamma1_sum(const Parameters& params, const EvalOptions& options) {
    return prime_sums(params, false, options).gamma1;
}
SumReport gamma2_sum(const Parameters& params, const EvalOptions& options) {
    return prime_sums(params, false, options).gamma2;
}
SumReport gamma3_sum(const Parameters& params, const EvalOptions& options) {
    return prime_sums(params, false, options).gamma3;
}

namespace {

MainTerm make_main_term(const PrimeSums& s) {
    MainTerm m;
    m.method_a = s.main_a;
    m.method_b = s.main_b.value;
    m.quadrature_error = s.quadrature_error;
    const double scale = std::max(std::abs(m.method_a), std::abs(m.method_b));
    const double diff = std::abs(m.method_a - m.method_b);
    m.rel_diff = scale == 0.0 ? 0.0 : diff / scale;
    // Both routes share the rounding floor of the sum itself.
    m.agree = m.rel_diff <= kMainTermTolerance || diff <= 1e-12 * (1.0 + s.main_b.weight_sum);
    return m;
}

} // namespace

MainTerm rhs_main(const Parameters& params, const EvalOptions& options) {
    return make_main_term(prime_sums(params, true, options));
}

TheoremReport theorem_check(const Parameters& params, bool allow_outside, const EvalOptions& options) {
    params.validate();
    if (!allow_outside)
        require(params.region_ok(), ErrorKind::Domain, "(c, gamma) outside the admissible region");
    const PrimeSums s = prime_sums(params, true, options);
    TheoremReport r;
    r.params = params;
    r.x = params.x;
    r.lhs = s.pi_gamma.value;
    r.main = s.main_b.value;
    r.err = r.lhs - r.main;
    r.abs_err = std::abs(r.err);
    const double am = std::abs(r.main);
    r.ratio_err_main = am == 0.0 ? std::numeric_limits<double>::infinity() : r.abs_err / am;
    r.log_err_over_log_x = r.abs_err == 0.0 ? -std::numeric_limits<double>::infinity()
                                            : std::log(r.abs_err) / std::log(params.x);
    r.err_over_x_gamma = r.abs_err / std::pow(params.x, params.gamma);
    r.claimed_exponent = params.claimed_exponent();

    const double weights = s.gamma1.weight_sum + s.gamma2.weight_sum + s.pi_gamma.weight_sum;
    r.identity_residual = std::abs(s.pi_gamma.value - s.gamma1.value - s.gamma2.value);
    r.identity_tolerance = 1e-8 * (1.0 + weights);
    r.identity_ok = r.identity_residual <= r.identity_tolerance;

    r.main_term = make_main_term(s);
    r.gamma1_remainder = std::abs(s.gamma1.value - s.main_b.value);
    r.taylor_bound = s.taylor_bound;
    r.n_primes = s.pi.n_terms;
    r.elapsed = s.elapsed;
    return r;
}

std::vector<TheoremReport> theorem_trend(const Parameters& params, const std::vector<double>& schedule,
                                         bool allow_outside, const EvalOptions& options) {
    std::vector<TheoremReport> rows;
    rows.reserve(schedule.size());
    for (double x : schedule) {
        Parameters p = params;
        p.x = x;
        rows.push_back(theorem_check(p, allow_outside, options));
    }
    return rows;
}

void write_trend_csv(std::ostream& os, const std::vector<TheoremReport>& rows) {
    const auto old = os.precision(17);
    os << "x,re_lhs,im_lhs,re_main,im_main,abs_err,ratio_err_main,log_err_over_log_x,err_over_x_gamma\n";
    for (const auto& r : rows) {
        os << r.x << ',' << r.lhs.real() << ',' << r.lhs.imag() << ',' << r.main.real() << ',' << r.main.imag()
           << ',' << r.abs_err << ',' << r.ratio_err_main << ',' << r.log_err_over_log_x << ','
           << r.err_over_x_gamma << '\n';
    }
    os.precision(old);
}

namespace {

struct LambdaTerm {
    std::uint64_t n;
    double lambda;
    Point pt;
    ExtReal n1_gamma;
};

/// Visits the prime powers n in (lo, hi] with n = a (d) (all n when
/// restrict_ap is false) as fn(acc, term).
template <class Acc, class Fn>
Acc scan_lambda(std::uint64_t lo, std::uint64_t hi, const Parameters& params, bool restrict_ap, bool need_n1,
                const EvalOptions& options, Fn&& fn) {
    auto seg = [&](const PrimeTable& table) {
        Acc acc{};
        table.for_each_prime_power([&](std::uint64_t n, std::uint64_t p) {
            if (restrict_ap && n % params.d != params.a) return;
            LambdaTerm term{n, std::log(static_cast<double>(p)), make_point(n, log_integer(n), params), {}};
            if (need_n1) term.n1_gamma = pow_with_log(n + 1, log_integer(n + 1), params.gamma);
            fn(acc, term);
        });
        return acc;
    };
    return scan<Acc>(lo, hi, options, seg);
}

SumReport psi_difference_sum(std::uint64_t lo, std::uint64_t hi, const Parameters& params,
                             const EvalOptions& options) {
    const auto start = Clock::now();
    const TermAcc acc = scan_lambda<TermAcc>(lo, hi, params, true, true, options, [&](TermAcc& a, const LambdaTerm& t) {
        const double w = t.lambda * (psi_neg_power(t.n + 1, params.gamma, t.n1_gamma) -
                                     psi_neg_power(t.n, params.gamma, t.pt.n_gamma));
        a.add(w, e_of(t.pt.phase).value(), t.pt.phase_err);
    });
    return acc.report(seconds_since(start));
}

std::uint64_t window_lo(double x) { return floor_u64(x / 2.0); }

void check_window_scale(double x) {
    require(std::isfinite(x) && x >= 4.0 && x <= 1e9, ErrorKind::Domain, "window scale must satisfy 4 <= x <= 1e9");
}

struct MultiAcc {
    std::vector<ComplexAccumulator> v;
    void merge(const MultiAcc& o) {
        if (v.empty()) v.resize(o.v.size());
        for (std::size_t i = 0; i < o.v.size(); ++i) v[i] += o.v[i];
    }
};

double frac_times(std::int64_t h, const ExtReal& y) { return frac(ExtReal(static_cast<double>(h)) * y); }

} // namespace

SumReport gamma4_sum(const Parameters& params, const EvalOptions& options) {
    params.validate();
    return psi_difference_sum(0, floor_u64(params.x), params, options);
}

SumReport gamma5_sum(double x, const Parameters& params, const EvalOptions& options) {
    params.validate();
    check_window_scale(x);
    return psi_difference_sum(window_lo(x), floor_u64(x), params, options);
}

std::vector<std::pair<double, SumReport>> gamma5_schedule(double x, const Parameters& params,
                                                          const EvalOptions& options) {
    std::vector<std::pair<double, SumReport>> rows;
    for (double y = x; y >= 4.0; y /= 2.0) rows.emplace_back(y, gamma5_sum(y, params, options));
    return rows;
}

void write_gamma5_csv(std::ostream& os, const std::vector<std::pair<double, SumReport>>& rows,
                      const Parameters& params) {
    const auto old = os.precision(17);
    const double exponent = params.claimed_exponent();
    os << "x,abs_gamma5,claimed_bound\n";
    for (const auto& [x, r] : rows) os << x << ',' << std::abs(r.value) << ',' << std::pow(x, exponent) << '\n';
    os.precision(old);
}

VaalerSplit gamma5_vaaler_split(double x, const VaalerCoefficients& coeffs, const Parameters& params,
                                const EvalOptions& options) {
    params.validate();
    check_window_scale(x);
    struct Acc {
        ComplexAccumulator g5, g6;
        CompensatedSum g7, g8, lambda, err;
        void merge(const Acc& o) {
            g5 += o.g5;
            g6 += o.g6;
            g7 += o.g7;
            g8 += o.g8;
            lambda += o.lambda;
            err += o.err;
        }
    };
    const Acc acc = scan_lambda<Acc>(window_lo(x), floor_u64(x), params, true, true, options,
                                     [&](Acc& a, const LambdaTerm& t) {
                                         const double f0 = psi_neg_power(t.n, params.gamma, t.pt.n_gamma) + 0.5;
                                         const double f1 = psi_neg_power(t.n + 1, params.gamma, t.n1_gamma) + 0.5;
                                         const PsiApprox v0 = approx_psi(f0, coeffs);
                                         const PsiApprox v1 = approx_psi(f1, coeffs);
                                         const std::complex<double> e = e_of(t.pt.phase).value();
                                         a.g5 += t.lambda * ((f1 - 0.5) - (f0 - 0.5)) * e;
                                         a.g6 += t.lambda * (v1.approx - v0.approx) * e;
                                         a.g7 += t.lambda * v0.majorant;
                                         a.g8 += t.lambda * v1.majorant;
                                         a.lambda += t.lambda;
                                         a.err += t.lambda * (kTwoPi * t.pt.phase_err + 1e-13 * coeffs.H);
                                     });
    VaalerSplit out;
    out.gamma5 = acc.g5.value();
    out.gamma6 = acc.g6.value();
    out.gamma7 = acc.g7.value();
    out.gamma8 = acc.g8.value();
    out.lambda_sum = acc.lambda.value();
    out.error_bound = acc.err.value();
    return out;
}

namespace {

void check_x1(double x1, const Parameters& params) {
    require(std::isfinite(x1) && x1 <= params.x, ErrorKind::Domain, "x1 must not exceed x");
}

/// W[(h index) * kcount + (k - k_lo)] for h in -H..-1, 1..H and k in [k_lo, k_hi].
std::vector<std::complex<double>> lambda_table(double x1, int H, const Parameters& params, std::uint64_t k_lo,
                                               std::uint64_t k_hi, bool restrict_ap, const EvalOptions& options) {
    const std::uint64_t lo = window_lo(params.x);
    const std::uint64_t hi = floor_u64(x1);
    const std::size_t kcount = k_hi - k_lo + 1;
    const std::size_t size = static_cast<std::size_t>(2 * H) * kcount;
    require(size <= 1'000'000, ErrorKind::SizeCap, "too many (h, k) pairs");
    if (hi <= lo || H <= 0) return std::vector<std::complex<double>>(size);
    MultiAcc acc = scan_lambda<MultiAcc>(lo, hi, params, restrict_ap, false, options,
                                         [&](MultiAcc& a, const LambdaTerm& t) {
                                             if (a.v.empty()) a.v.resize(size);
                                             std::size_t slot = 0;
                                             for (int s = -1; s <= 1; s += 2) {
                                                 for (int hh = 1; hh <= H; ++hh) {
                                                     const double fh = frac_times(s * hh, t.pt.n_gamma);
                                                     for (std::uint64_t k = k_lo; k <= k_hi; ++k, ++slot) {
                                                         const double fk = static_cast<double>((k * t.n) % params.d) /
                                                                           static_cast<double>(params.d);
                                                         a.v[slot] += t.lambda * e_of(t.pt.phase + fh + fk).value();
                                                     }
                                                 }
                                             }
                                         });
    std::vector<std::complex<double>> out(size);
    for (std::size_t i = 0; i < acc.v.size(); ++i) out[i] = acc.v[i].value();
    return out;
}

} // namespace

std::complex<double> weighted_lambda_expsum(double x1, std::int64_t h, const Parameters& params, std::uint64_t k,
                                            const EvalOptions& options) {
    params.validate();
    check_x1(x1, params);
    require(k >= 1 && k <= params.d, ErrorKind::Domain, "k must satisfy 1 <= k <= d");
    const std::uint64_t lo = window_lo(params.x);
    const std::uint64_t hi = floor_u64(x1);
    if (hi <= lo) return {};
    struct Acc {
        ComplexAccumulator v;
        void merge(const Acc& o) { v += o.v; }
    };
    const Acc acc = scan_lambda<Acc>(lo, hi, params, false, false, options, [&](Acc& a, const LambdaTerm& t) {
        const double fh = h == 0 ? 0.0 : frac_times(h, t.pt.n_gamma);
        const double fk = static_cast<double>((k * t.n) % params.d) / static_cast<double>(params.d);
        a.v += t.lambda * e_of(t.pt.phase + fh + fk).value();
    });
    return acc.v.value();
}

double gamma10_sum(double x1, int H, const Parameters& params, std::uint64_t k, const EvalOptions& options) {
    params.validate();
    check_x1(x1, params);
    require(H >= 0, ErrorKind::Domain, "H must be nonnegative");
    require(k >= 1 && k <= params.d, ErrorKind::Domain, "k must satisfy 1 <= k <= d");
    const auto table = lambda_table(x1, H, params, k, k, false, options);
    CompensatedSum total;
    for (const auto& w : table) total += std::abs(w);
    return total.value();
}

double gamma9_sum(double x1, int H, const Parameters& params, const EvalOptions& options) {
    params.validate();
    check_x1(x1, params);
    require(H >= 0, ErrorKind::Domain, "H must be nonnegative");
    // k = d contributes the phase k n / d = n, an integer
    const auto table = lambda_table(x1, H, params, params.d, params.d, true, options);
    CompensatedSum total;
    for (const auto& w : table) total += std::abs(w);
    return total.value();
}

double gamma9_via_characters(double x1, int H, const Parameters& params, const EvalOptions& options) {
    params.validate();
    check_x1(x1, params);
    require(H >= 0, ErrorKind::Domain, "H must be nonnegative");
    const std::uint64_t d = params.d;
    const auto table = lambda_table(x1, H, params, 1, d, false, options);
    CompensatedSum total;
    for (std::size_t row = 0; row < static_cast<std::size_t>(2 * H); ++row) {
        ComplexAccumulator inner;
        for (std::uint64_t k = 1; k <= d; ++k) {
            const double fa = static_cast<double>((d - (k * params.a) % d) % d) / static_cast<double>(d);
            inner += e_of(fa).value() * table[row * d + (k - 1)];
        }
        total += std::abs(inner.value()) / static_cast<double>(d);
    }
    return total.value();
}

double gamma11_sum(int H, const Parameters& params, const EvalOptions& options) {
    params.validate();
    require(H >= 0, ErrorKind::Domain, "H must be nonnegative");
    const std::uint64_t lo = window_lo(params.x);
    const std::uint64_t hi = floor_u64(params.x);
    if (H == 0 || hi <= lo) return 0.0;
    Parameters no_t = params;
    no_t.t = 0.0;
    const MultiAcc acc = scan_lambda<MultiAcc>(lo, hi, no_t, true, false, options,
                                               [&](MultiAcc& a, const LambdaTerm& t) {
                                                   if (a.v.empty()) a.v.resize(static_cast<std::size_t>(H));
                                                   for (int h = 1; h <= H; ++h)
                                                       a.v[static_cast<std::size_t>(h - 1)] +=
                                                           t.lambda * e_of(-frac_times(h, t.pt.n_gamma)).value();
                                               });
    // Lambda is real, so the -h inner sum is the conjugate of the h one.
    CompensatedSum total;
    for (const auto& s : acc.v) total += 2.0 * std::abs(s.value());
    return total.value();
}

} // namespace pslab
