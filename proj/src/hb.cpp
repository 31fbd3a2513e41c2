#include "pslab/hb.hpp"

#include "pslab/error.hpp"
#include "pslab/numerics.hpp"
#include "pslab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pslab {

namespace {

using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

Factorization factor(std::uint64_t n) {
    Factorization f;
    for (std::uint32_t p : base_primes()) {
        if (std::uint64_t{p} * p > n) break;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

std::vector<std::uint64_t> divisors(const Factorization& f) {
    std::vector<std::uint64_t> out{1};
    for (auto [p, e] : f) {
        const std::size_t base = out.size();
        std::uint64_t pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Factorization factor_of_divisor(const Factorization& f, std::uint64_t d) {
    Factorization g;
    for (auto [p, e] : f) {
        unsigned k = 0;
        while (d % p == 0) {
            d /= p;
            ++k;
        }
        if (k > 0) g.emplace_back(p, k);
    }
    return g;
}

std::uint64_t tau_from(const Factorization& f, unsigned k) {
    std::uint64_t r = 1;
    for (auto [p, e] : f) {
        std::uint64_t v = 1;
        for (unsigned i = 1; i <= k - 1; ++i) v = v * (e + i) / i;
        r *= v;
    }
    return r;
}

/// sum over n_1 ... n_j = N of log n_1 = sum_{n_1 | N} log n_1 tau_{j-1}(N / n_1).
double log_part(const Factorization& nf, std::uint64_t N, int j) {
    if (j == 1) return std::log(static_cast<double>(N));
    const Factorization f = factor_of_divisor(nf, N);
    long double s = 0.0L;
    for (std::uint64_t d : divisors(f)) {
        if (d == 1) continue;
        s += std::log(static_cast<long double>(d)) * tau_from(factor_of_divisor(f, N / d), j - 1);
    }
    return static_cast<double>(s);
}

double snap(double z) {
    const double r = std::round(z);
    return std::abs(z - r) <= 1e-9 * std::max(1.0, r) ? r : z;
}

double pow2(double e) { return std::exp2(e); }

} // namespace

std::vector<HBTerm> hb_terms(std::uint64_t n, int J, double z) {
    require(n >= 1 && n <= 1'000'000'000, ErrorKind::Domain, "hb identity needs 1 <= n <= 1e9");
    require(J == 2 || J == 3, ErrorKind::Domain, "hb identity needs J in {2, 3}");
    require(std::isfinite(z) && z >= 1.0, ErrorKind::Domain, "hb identity needs z >= 1");
    const double zs = snap(z);
    const std::uint64_t zf = static_cast<std::uint64_t>(std::min(std::floor(zs), 2e9));
    std::uint64_t bound = 1;
    for (int i = 0; i < J && bound <= n; ++i) bound *= zf + 1;
    require(n < bound, ErrorKind::Domain, "hb identity needs z >= n^(1/J)");

    const Factorization nf = factor(n);
    // squarefree divisors up to z, with mu
    std::vector<std::pair<std::uint64_t, int>> ms;
    for (std::uint64_t d : divisors(nf)) {
        if (d > zf) break;
        const Factorization g = factor_of_divisor(nf, d);
        if (std::all_of(g.begin(), g.end(), [](auto pe) { return pe.second == 1; }))
            ms.emplace_back(d, (g.size() % 2) ? -1 : 1);
    }

    std::vector<HBTerm> out;
    std::vector<std::uint64_t> tuple;
    for (int j = 1; j <= J; ++j) {
        const double binom = (J == 3 && (j == 1 || j == 2)) ? 3.0 : (j == 1 && J == 2) ? 2.0 : 1.0;
        const double base = (j % 2 ? 1.0 : -1.0) * binom;
        auto walk = [&](auto&& self, std::uint64_t prod, int mu) -> void {
            if (static_cast<int>(tuple.size()) == j) {
                HBTerm term;
                term.j = j;
                term.weight = base * mu;
                term.sign = term.weight < 0 ? -1 : 1;
                term.m = tuple;
                term.rest = n / prod;
                term.log_part = log_part(nf, term.rest, j);
                if (term.log_part != 0.0) out.push_back(std::move(term));
                return;
            }
            for (auto [m, mu_m] : ms) {
                if ((n / prod) % m != 0) continue;
                tuple.push_back(m);
                self(self, prod * m, mu * mu_m);
                tuple.pop_back();
            }
        };
        walk(walk, 1, 1);
    }
    return out;
}

double hb_identity_value(std::uint64_t n, int J, double z) {
    long double s = 0.0L;
    for (const auto& term : hb_terms(n, J, z)) s += static_cast<long double>(term.weight) * term.log_part;
    return static_cast<double>(s);
}

double hb_default_z(double x) { return std::cbrt(2.0 * x); }

UVZWindows uvz_windows(double x, double c) {
    require(x >= 1.0 && std::isfinite(x), ErrorKind::Domain, "uvz windows need x >= 1");
    UVZWindows w;
    w.x = x;
    w.c = c;
    const double lx = std::log2(x);
    w.log2_U = -10.0 + lx * (56.0 - 38.0 * c) / 171.0;
    w.log2_V = 7.0 + lx / 3.0;
    w.log2_Z = lx * (38.0 * c + 115.0) / 342.0;
    w.U = pow2(w.log2_U);
    w.V = pow2(w.log2_V);
    w.Z = pow2(w.log2_Z);
    return w;
}

UVZReport uvz_preconditions(double x, double c) {
    require(c > 1.0 && c < 28.0 / 19.0, ErrorKind::Domain, "uvz conditions need 1 < c < 28/19");
    require(x >= 2.0, ErrorKind::Domain, "uvz conditions need x >= 2");
    UVZReport r;
    r.windows = uvz_windows(x, c);
    const auto& w = r.windows;
    const double lx = std::log2(x);
    const double lP = lx - 1.0;
    auto cond = [](const char* name, double lhs, double rhs, bool strict = false) {
        Condition k;
        k.name = name;
        k.slack_log2 = rhs - lhs;
        k.holds = strict ? k.slack_log2 > 0.0 : k.slack_log2 >= 0.0;
        return k;
    };
    r.u_sq_le_z = cond("U^2 <= Z", 2.0 * w.log2_U, w.log2_Z);
    r.uz2_le_p1 = cond("128 U Z^2 <= P1", 7.0 + w.log2_U + 2.0 * w.log2_Z, lx);
    r.p1_le_v3 = cond("2^18 P1 <= V^3", 18.0 + lx, 3.0 * w.log2_V);
    r.u_ge_2 = cond("2 <= U", 1.0, w.log2_U);
    r.u_lt_v = cond("U < V", w.log2_U, w.log2_V, true);
    r.v_le_z = cond("V <= Z", w.log2_V, w.log2_Z);
    r.z_le_p = cond("Z <= P", w.log2_Z, lP);

    r.uz2_exp_const = Rational(56, 171) + 2 * Rational(115, 342);
    r.uz2_exp_c = Rational(-38, 171) + 2 * Rational(38, 342);
    r.v3_exp = 3 * Rational(1, 3);
    r.exponent_identities = r.uz2_exp_const == 1 && r.uz2_exp_c == 0 && r.v3_exp == 1;
    return r;
}

UVZThreshold uvz_threshold(const Rational& c) {
    require(c > 1 && c < Rational(28, 19), ErrorKind::Domain, "uvz threshold needs 1 < c < 28/19");
    UVZThreshold t;
    t.c = c;
    // -10 + L (56 - 38c)/171 >= 1
    t.log2_x_u_ge_2 = Rational(11 * 171) / (56 - 38 * c);
    // 7 + L/3 <= L (38c + 115)/342
    t.log2_x_v_le_z = Rational(7 * 342) / (38 * c + 1);
    // L (38c + 115)/342 <= L - 1
    t.log2_x_z_le_p = Rational(342) / (227 - 38 * c);
    t.log2_x_all = std::max({t.log2_x_u_ge_2, t.log2_x_v_le_z, t.log2_x_z_le_p});
    return t;
}

const char* to_string(BoxKind kind) {
    switch (kind) {
    case BoxKind::TypeI: return "TypeI";
    case BoxKind::TypeII: return "TypeII";
    case BoxKind::Unclassified: return "Unclassified";
    }
    return "?";
}

BoxKind classify_length(double L, const UVZWindows& windows) {
    if (windows.U <= L && L <= windows.V) return BoxKind::TypeII;
    if (L >= windows.Z) return BoxKind::TypeI;
    return BoxKind::Unclassified;
}

BoxKind classify_box(const DyadicBox& box, const UVZWindows& windows) {
    require(box.M >= 1 && box.L >= 1, ErrorKind::Domain, "box needs M, L >= 1");
    require(box.M1 <= 2 * box.M && box.L1 <= 2 * box.L, ErrorKind::Domain, "box needs M1 <= 2M and L1 <= 2L");
    return classify_length(static_cast<double>(box.L), windows);
}

std::vector<ClassificationRow> classification_map(const UVZWindows& windows) {
    std::vector<ClassificationRow> rows;
    const int top = static_cast<int>(std::floor(std::log2(windows.x)));
    for (int k = 0; k <= top; ++k) {
        ClassificationRow r;
        r.L_lo = std::ldexp(1.0, k);
        r.L_hi = std::ldexp(1.0, k + 1);
        r.kind = classify_length(r.L_lo, windows);
        rows.push_back(r);
    }
    return rows;
}

CoverageReport coverage(const UVZWindows& windows) {
    CoverageReport r;
    r.below_u_log2 = std::max(0.0, windows.log2_U);
    r.has_gap = windows.V < windows.Z;
    if (r.has_gap) {
        r.gap_lo_log2 = windows.log2_V;
        r.gap_hi_log2 = windows.log2_Z;
    }
    return r;
}

void write_classification_csv(std::ostream& os, const std::vector<UVZWindows>& windows) {
    const auto old = os.precision(17);
    os << "x,c,U,V,Z,L_lo,L_hi,kind\n";
    for (const auto& w : windows)
        for (const auto& r : classification_map(w))
            os << w.x << ',' << w.c << ',' << w.U << ',' << w.V << ',' << w.Z << ',' << r.L_lo << ',' << r.L_hi
               << ',' << to_string(r.kind) << '\n';
    os.precision(old);
}

namespace {

struct Cell {
    double weight;
    double base;   // frac(t n^c + theta n)
    double gfrac;  // frac(n^gamma)
};

void check_input(const TypeSumInput& in, const Parameters& params) {
    params.validate();
    const auto& b = in.box;
    require(b.M >= 1 && b.L >= 1 && b.M1 >= b.M && b.L1 >= b.L, ErrorKind::Domain, "type sums need a nonempty box");
    require(b.M1 <= 2 * b.M && b.L1 <= 2 * b.L, ErrorKind::Domain, "type sums need M1 <= 2M and L1 <= 2L");
    require(in.H >= 0, ErrorKind::Domain, "type sums need H >= 0");
    require(in.k <= params.d, ErrorKind::Domain, "type sums need 0 <= k <= d");
    const double x1 = in.x1 > 0.0 ? in.x1 : params.x;
    require(x1 <= params.x, ErrorKind::Domain, "type sums need x1 <= x");
    const double cells = static_cast<double>(b.M1 - b.M) * static_cast<double>(b.L1 - b.L);
    require(cells <= static_cast<double>(kTypeSumCap), ErrorKind::SizeCap, "type sums need (M1-M)(L1-L) <= 1e7");
}

/// l range with x/2 < ml <= x1 inside (L, L1].
std::pair<std::uint64_t, std::uint64_t> l_range(const TypeSumInput& in, double x, double x1, std::uint64_t m) {
    std::uint64_t lo = in.box.L + 1;
    const auto hi_cut = static_cast<std::uint64_t>(std::floor(x1 / static_cast<double>(m)));
    std::uint64_t hi = std::min(in.box.L1, hi_cut);
    const auto lo_cut = static_cast<std::uint64_t>(std::floor(x / (2.0 * static_cast<double>(m))));
    lo = std::max(lo, lo_cut > 0 ? lo_cut - 1 : 0);
    while (lo <= hi && !(2.0 * static_cast<double>(m * lo) > x)) ++lo;
    while (hi >= lo && hi > 0 && static_cast<double>(m * hi) > x1) --hi;
    return {lo, hi};
}

Cell make_cell(const Parameters& params, std::uint64_t k, std::uint64_t n, double weight) {
    const ExtReal ln = log_integer(n);
    Cell cell;
    cell.weight = weight;
    const double tc = phase_of_power(params.t, pow_with_log(n, ln, params.c));
    const double th = static_cast<double>((k % params.d) * (n % params.d) % params.d) / static_cast<double>(params.d);
    cell.base = frac(tc + th);
    cell.gfrac = frac(pow_with_log(n, ln, params.gamma));
    return cell;
}

} // namespace

double type_sums(const TypeSumInput& in, const Parameters& params) {
    check_input(in, params);
    const double x = params.x;
    const double x1 = in.x1 > 0.0 ? in.x1 : x;
    if (in.H == 0) return 0.0;

    std::vector<Cell> cells;
    for (std::uint64_t m = in.box.M + 1; m <= in.box.M1; ++m) {
        const auto [lo, hi] = l_range(in, x, x1, m);
        const double am = in.a ? in.a(m) : 1.0;
        for (std::uint64_t l = lo; l <= hi; ++l) {
            double w = am;
            if (in.variant == TypeSumVariant::SII && in.b) w *= in.b(l);
            if (in.variant == TypeSumVariant::SIprime) w *= std::log(static_cast<double>(l));
            cells.push_back(make_cell(params, in.k, m * l, w));
        }
    }

    CompensatedSum total;
    for (int h = -in.H; h <= in.H; ++h) {
        if (h == 0) continue;
        ComplexAccumulator s;
        for (const auto& cell : cells) {
            const double ph = cell.base + frac(static_cast<double>(h) * cell.gfrac);
            s += cell.weight * std::complex<double>(e_of(frac(ph)));
        }
        total += std::abs(s.value());
    }
    return total.value();
}

std::vector<std::complex<double>> type2_inner(const TypeSumInput& in, const Parameters& params, std::uint64_t m,
                                              std::int64_t h) {
    check_input(in, params);
    require(m > in.box.M && m <= in.box.M1, ErrorKind::Domain, "type2_inner needs M < m <= M1");
    const double x1 = in.x1 > 0.0 ? in.x1 : params.x;
    const auto [lo, hi] = l_range(in, params.x, x1, m);
    std::vector<std::complex<double>> z;
    for (std::uint64_t l = lo; l <= hi; ++l) {
        const double w = in.b ? in.b(l) : 1.0;
        const Cell cell = make_cell(params, in.k, m * l, w);
        const double ph = cell.base + frac(static_cast<double>(h) * cell.gfrac);
        z.push_back(w * std::complex<double>(e_of(frac(ph))));
    }
    return z;
}

} // namespace pslab
