#pragma once

#include "pslab/params.hpp"
#include "pslab/rational.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace pslab {

/// One summand of the identity at a fixed n: the m-tuple is fixed and the
/// n-variables are summed out, log_part = sum over n_1 ... n_j = rest of log n_1.
struct HBTerm {
    int j = 1;
    int sign = 1;
    double weight = 0.0; // (-1)^(j-1) binom(J, j) mu(m_1)...mu(m_j)
    std::vector<std::uint64_t> m;
    std::uint64_t rest = 1;
    double log_part = 0.0;
};

/// z is snapped to the nearest integer when within 1e-9 of it; the identity
/// then holds for n < (floor(z) + 1)^J. Requires 1 <= n <= 1e9 and J in {2, 3}.
std::vector<HBTerm> hb_terms(std::uint64_t n, int J, double z);
double hb_identity_value(std::uint64_t n, int J, double z);

/// Default z = (2x)^(1/3).
double hb_default_z(double x);

struct UVZWindows {
    double x = 0.0;
    double c = 0.0;
    double U = 0.0;
    double V = 0.0;
    double Z = 0.0;
    double log2_U = 0.0;
    double log2_V = 0.0;
    double log2_Z = 0.0;
};

/// U = 2^-10 x^((56-38c)/171), V = 2^7 x^(1/3), Z = x^((38c+115)/342).
UVZWindows uvz_windows(double x, double c);

struct Condition {
    const char* name = "";
    bool holds = false;
    double slack_log2 = 0.0; // log2(rhs / lhs); >= 0 iff holds
};

/// Conditions of the decomposition lemma with P = x/2, P1 = x.
struct UVZReport {
    UVZWindows windows;
    Condition u_sq_le_z;     // U^2 <= Z
    Condition uz2_le_p1;     // 128 U Z^2 <= P1
    Condition p1_le_v3;      // 2^18 P1 <= V^3
    // ordering 2 <= U < V <= Z <= P
    Condition u_ge_2;
    Condition u_lt_v;
    Condition v_le_z;
    Condition z_le_p;

    // x-exponents as const + coeff * c, exact
    Rational uz2_exp_const;
    Rational uz2_exp_c;
    Rational v3_exp;
    bool exponent_identities = false; // both equal 1 identically in c

    bool lemma_conditions() const { return u_sq_le_z.holds && uz2_le_p1.holds && p1_le_v3.holds; }
    bool ordering() const { return u_ge_2.holds && u_lt_v.holds && v_le_z.holds && z_le_p.holds; }
};

/// Requires 1 < c < 28/19 and x >= 2.
UVZReport uvz_preconditions(double x, double c);

/// Smallest log2 x from which each ordering condition holds, exact in c.
/// U < V holds for every x >= 1 and is omitted.
struct UVZThreshold {
    Rational c;
    Rational log2_x_u_ge_2;
    Rational log2_x_v_le_z;
    Rational log2_x_z_le_p;
    Rational log2_x_all;
};
UVZThreshold uvz_threshold(const Rational& c);

enum class BoxKind { TypeI, TypeII, Unclassified };
const char* to_string(BoxKind kind);

struct DyadicBox {
    std::uint64_t M = 1;
    std::uint64_t M1 = 2;
    std::uint64_t L = 1;
    std::uint64_t L1 = 2;
};

/// TypeII when U <= L <= V (preferred on overlap), TypeI when L >= Z.
/// Requires M1 <= 2M, L1 <= 2L (ErrorKind::Domain).
BoxKind classify_box(const DyadicBox& box, const UVZWindows& windows);
/// Same rule for a real L; used for the dyadic map at scales beyond 2^64.
BoxKind classify_length(double L, const UVZWindows& windows);

/// One dyadic band [L_lo, L_hi) of lengths, L_lo = 2^k.
struct ClassificationRow {
    double L_lo = 0.0;
    double L_hi = 0.0;
    BoxKind kind = BoxKind::Unclassified;
};

/// Classification of L = 2^k, k = 0 .. floor(log2 x).
std::vector<ClassificationRow> classification_map(const UVZWindows& windows);

/// Unclassified stretches of [1, x] as (lo, hi) in log2: [0, log2 U) and,
/// when V < Z, the gap (log2 V, log2 Z).
struct CoverageReport {
    double below_u_log2 = 0.0;    // width of [1, U) in log2, 0 if U <= 1
    double gap_lo_log2 = 0.0;
    double gap_hi_log2 = 0.0;
    bool has_gap = false;         // V < Z
};
CoverageReport coverage(const UVZWindows& windows);

/// CSV: x, c, U, V, Z, L_lo, L_hi, kind.
void write_classification_csv(std::ostream& os, const std::vector<UVZWindows>& windows);

enum class TypeSumVariant { SI, SIprime, SII };

struct TypeSumInput {
    DyadicBox box;
    int H = 1;
    double x1 = 0.0;      // upper cut on ml; 0 means params.x
    std::uint64_t k = 0;  // theta = k / d, 0 <= k <= d
    TypeSumVariant variant = TypeSumVariant::SI;
    std::function<double(std::uint64_t)> a; // defaults to 1
    std::function<double(std::uint64_t)> b; // SII only, defaults to 1
};

inline constexpr std::uint64_t kTypeSumCap = 10'000'000;

/// sum_{1<=|h|<=H} |sum_m a(m) sum_l [b(l)] e(t (ml)^c + h (ml)^gamma + theta ml) [log l]|
/// over M < m <= M1, L < l <= L1, x/2 < ml <= x1, with x = params.x.
/// Throws ErrorKind::SizeCap when (M1 - M)(L1 - L) > 1e7.
double type_sums(const TypeSumInput& input, const Parameters& params);

/// The inner sequence z(l) = b(l) e(t (ml)^c + h (ml)^gamma + theta ml) over
/// the admissible l for one m, in increasing l.
std::vector<std::complex<double>> type2_inner(const TypeSumInput& input, const Parameters& params,
                                              std::uint64_t m, std::int64_t h);

} // namespace pslab
