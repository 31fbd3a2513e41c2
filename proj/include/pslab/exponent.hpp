#pragma once

#include "pslab/rational.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pslab {

/// u + alpha c + beta gamma, exact.
struct AffineExponent {
    Rational u;
    Rational alpha;
    Rational beta;

    Rational at(const Rational& c, const Rational& gamma) const { return u + alpha * c + beta * gamma; }

    AffineExponent operator+(const AffineExponent& o) const { return {u + o.u, alpha + o.alpha, beta + o.beta}; }
    AffineExponent operator-(const AffineExponent& o) const { return {u - o.u, alpha - o.alpha, beta - o.beta}; }
    AffineExponent operator*(const Rational& k) const { return {u * k, alpha * k, beta * k}; }
    bool operator==(const AffineExponent& o) const { return u == o.u && alpha == o.alpha && beta == o.beta; }
};

/// "c/18 + gamma/2 + 143/342" style.
std::string to_string(const AffineExponent& e);

/// H^h x^xexp.
struct MonomialTerm {
    AffineExponent x;
    Rational h;
    std::string label; // provenance

    bool same_monomial(const MonomialTerm& o) const { return x == o.x && h == o.h; }
};

/// "H^(7/6) x^(gamma/6 + 3/4)".
std::string to_string(const MonomialTerm& t);

MonomialTerm term(const Rational& h, const Rational& u, const Rational& alpha, const Rational& beta,
                  std::string label = {});

/// Terms with pairwise distinct (x, h).
class TermSet {
public:
    TermSet() = default;
    TermSet(std::initializer_list<MonomialTerm> terms);

    /// False (and no insertion) when the monomial is already present.
    bool add(MonomialTerm t);
    const MonomialTerm* find(const AffineExponent& x, const Rational& h) const;
    const std::vector<MonomialTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Same monomials, order ignored.
    bool same_as(const TermSet& o) const;

private:
    std::vector<MonomialTerm> terms_;
};

/// H1 and H2 are x-powers (h = 0). Terms with h > 0 are the A_i H^(a_i),
/// with h < 0 the B_j H^(-b_j); h = 0 terms pass through. Every output has h = 0.
TermSet srinivasan_optimize(const TermSet& terms, const MonomialTerm& H1, const MonomialTerm& H2);

/// The same bound with numeric coefficients: terms are (coefficient, power of H).
std::vector<double> srinivasan_numeric(const std::vector<std::pair<double, double>>& terms, double H1, double H2);

struct ExpPoint {
    Rational c;
    Rational gamma;
};

/// Closure of 1 < c, gamma < 1, 19(c - 1) + 171(1 - gamma) < 9: a triangle.
std::vector<ExpPoint> region_vertices();
/// Closure of (1, 28/19) x (0, 1).
std::vector<ExpPoint> box_vertices();

/// 19(c - 1) + 171(1 - gamma) < 9 (with 1 < c < 28/19, 0 < gamma < 1).
bool in_region(const Rational& c, const Rational& gamma);

/// a >= b at every vertex (hence on the whole polygon, exponents being affine).
bool dominates(const AffineExponent& a, const AffineExponent& b, std::span<const ExpPoint> vertices);
/// a.h >= b.h (H >= 1) and a.x >= b.x on the polygon.
bool dominates(const MonomialTerm& a, const MonomialTerm& b, std::span<const ExpPoint> vertices);

/// Catalogues as printed: type_i, type_ii, gamma10_small_t, gamma10_large_t,
/// gamma10, gamma6, gamma11, gamma7, gamma5_pre, gamma5.
std::map<std::string, TermSet> paper_catalogues();

/// c/18 + gamma/2 + 143/342.
AffineExponent claimed_gamma5_exponent();

struct Finding {
    std::string term;
    std::string status;
    std::string detail;
    std::string witness_point; // "c,gamma" as rationals, empty when not applicable
};

/// Field-wise relations between the catalogues (shift, H^-1 scaling, union,
/// domination of the merged lists). One finding per relation.
std::vector<Finding> catalogue_consistency();

struct CatalogueDerivation {
    TermSet computed;                  // raw output of the optimization
    std::vector<MonomialTerm> matched; // computed terms equal to a printed one
    std::vector<std::pair<MonomialTerm, MonomialTerm>> computed_dominated; // (term, dominator)
    std::vector<MonomialTerm> computed_extra;    // neither printed nor dominated
    std::vector<std::pair<MonomialTerm, MonomialTerm>> paper_dominated;   // printed, not computed, dominated
    std::vector<MonomialTerm> paper_unmatched;   // printed, not computed, not dominated
    std::vector<Finding> findings;
};

/// Applies the optimization to gamma5_pre with H1 = 1 and H2 = x^10 and
/// compares with gamma5 over the region.
CatalogueDerivation derive_gamma5_catalogue();

struct Dominant {
    Rational value;
    std::vector<std::string> labels; // every maximizer
};

/// Requires (c, gamma) in (1, 28/19) x (0, 1) (ErrorKind::Domain).
Dominant dominant_exponent(const TermSet& set, const Rational& c, const Rational& gamma);

struct RegionRow {
    Rational c;
    Rational gamma;
    bool in_region = false;
    Dominant dominant;
    bool matches_claim = false; // claimed term among the maximizers
    bool below_gamma = false;   // dominant value < gamma
};

struct RegionReport {
    Rational step;
    std::vector<RegionRow> rows;
    bool equivalence_proved = false; // 342 (gamma - claimed) == 9 - (19(c-1) + 171(1-gamma)) field-wise
    std::size_t grid_mismatches = 0; // points where claimed < gamma and the condition disagree
    std::size_t dominance_failures = 0; // in-region points with dominant >= gamma
    std::vector<Finding> findings;      // in-region points whose dominant label is not the claim
};

/// Grid c = 1 + i step, gamma = j step strictly inside (1, 28/19) x (0, 1).
/// Requires step > 0 (ErrorKind::Domain).
RegionReport region_report(const Rational& step);

/// CSV: c, gamma, in_region, dominant_value_num, dominant_value_den,
/// dominant_label, matches_claim, below_gamma.
void write_region_csv(std::ostream& os, const RegionReport& report);

/// JSON array of {term, status, detail, witness_point}.
void write_findings_json(std::ostream& os, const std::vector<Finding>& findings);

} // namespace pslab
