#include "pslab/exponent.hpp"

#include "pslab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pslab {

namespace {

std::string coef_item(const Rational& k, const char* var, bool first) {
    std::string s;
    const bool neg = k < 0;
    if (!first) s += neg ? " - " : " + ";
    else if (neg) s += "-";
    const Rational a = neg ? Rational(-k) : k;
    const BigInt num = boost::multiprecision::numerator(a);
    const BigInt den = boost::multiprecision::denominator(a);
    if (*var) {
        if (num != 1) s += num.str();
        s += var;
    } else {
        s += num.str();
    }
    if (den != 1) s += "/" + den.str();
    return s;
}

std::string trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return std::string(s);
}

/// One summand without sign: "5gamma/4", "c/18", "143/342", "gamma", "1".
void parse_item(std::string item, bool neg, AffineExponent& e) {
    Rational* slot = &e.u;
    for (auto [name, target] : {std::pair<const char*, Rational*>{"gamma", &e.beta}, {"c", &e.alpha}}) {
        const auto pos = item.find(name);
        if (pos == std::string::npos) continue;
        item.erase(pos, std::string_view(name).size());
        if (item.empty() || item.front() == '/') item.insert(0, "1");
        slot = target;
        break;
    }
    require(!item.empty(), ErrorKind::Parse, "empty exponent item");
    const Rational v = parse_rational(item);
    *slot += neg ? Rational(-v) : v;
}

AffineExponent parse_affine(std::string_view text) {
    AffineExponent e;
    std::string cur;
    bool neg = false;
    auto flush = [&] {
        const std::string item = trim(cur);
        if (!item.empty()) parse_item(item, neg, e);
        cur.clear();
    };
    for (char ch : text) {
        if (ch == '+' || ch == '-') {
            flush();
            neg = ch == '-';
        } else {
            cur += ch;
        }
    }
    flush();
    return e;
}

std::string point_string(const ExpPoint& p) { return to_string(p.c) + "," + to_string(p.gamma); }

/// Vertex where a - b is smallest.
ExpPoint tightest(const AffineExponent& a, const AffineExponent& b, std::span<const ExpPoint> vertices) {
    const AffineExponent d = a - b;
    ExpPoint best = vertices.front();
    for (const auto& v : vertices)
        if (d.at(v.c, v.gamma) < d.at(best.c, best.gamma)) best = v;
    return best;
}

MonomialTerm parse_term(std::string_view text, std::string label = {}) {
    MonomialTerm t;
    std::string s = trim(text);
    if (s.rfind("H", 0) == 0) {
        t.h = 1;
        s.erase(0, 1);
        if (s.rfind("^(", 0) == 0) {
            const auto close = s.find(')');
            require(close != std::string::npos, ErrorKind::Parse, "unclosed H exponent");
            t.h = parse_rational(s.substr(2, close - 2));
            s.erase(0, close + 1);
        }
        s = trim(s);
    }
    if (s == "x") {
        t.x.u = 1;
    } else if (!s.empty()) {
        require(s.rfind("x^(", 0) == 0 && s.back() == ')', ErrorKind::Parse, "bad term: " + std::string(text));
        t.x = parse_affine(std::string_view(s).substr(3, s.size() - 4));
    }
    t.label = label.empty() ? to_string(t) : label;
    return t;
}

TermSet parse_set(std::initializer_list<const char*> items) {
    TermSet s;
    for (const char* item : items) {
        const bool fresh = s.add(parse_term(item));
        require(fresh, ErrorKind::Parse, std::string("duplicate catalogue term ") + item);
    }
    return s;
}

bool covered_by(const TermSet& sub, const TermSet& super, std::span<const ExpPoint> vertices, std::string& missing) {
    for (const auto& t : sub.terms()) {
        const bool ok = std::any_of(super.terms().begin(), super.terms().end(),
                                    [&](const MonomialTerm& s) { return dominates(s, t, vertices); });
        if (!ok) {
            missing = to_string(t);
            return false;
        }
    }
    return true;
}

} // namespace

std::string to_string(const AffineExponent& e) {
    std::string s;
    if (e.alpha != 0) s += coef_item(e.alpha, "c", s.empty());
    if (e.beta != 0) s += coef_item(e.beta, "gamma", s.empty());
    if (e.u != 0 || s.empty()) s += coef_item(e.u, "", s.empty());
    return s;
}

std::string to_string(const MonomialTerm& t) {
    std::string s;
    if (t.h == 1) s = "H";
    else if (t.h != 0) s = "H^(" + to_string(t.h) + ")";
    const bool x_one = t.x == AffineExponent{1, 0, 0};
    const bool x_zero = t.x == AffineExponent{};
    if (x_zero && !s.empty()) return s;
    if (!s.empty()) s += " ";
    s += x_one ? std::string("x") : "x^(" + to_string(t.x) + ")";
    return s;
}

MonomialTerm term(const Rational& h, const Rational& u, const Rational& alpha, const Rational& beta,
                  std::string label) {
    MonomialTerm t{{u, alpha, beta}, h, {}};
    t.label = label.empty() ? to_string(t) : std::move(label);
    return t;
}

TermSet::TermSet(std::initializer_list<MonomialTerm> terms) {
    for (const auto& t : terms) add(t);
}

bool TermSet::add(MonomialTerm t) {
    if (find(t.x, t.h)) return false;
    terms_.push_back(std::move(t));
    return true;
}

const MonomialTerm* TermSet::find(const AffineExponent& x, const Rational& h) const {
    for (const auto& t : terms_)
        if (t.x == x && t.h == h) return &t;
    return nullptr;
}

bool TermSet::same_as(const TermSet& o) const {
    if (size() != o.size()) return false;
    return std::all_of(terms_.begin(), terms_.end(), [&](const MonomialTerm& t) { return o.find(t.x, t.h); });
}

TermSet srinivasan_optimize(const TermSet& terms, const MonomialTerm& H1, const MonomialTerm& H2) {
    require(H1.h == 0 && H2.h == 0, ErrorKind::Domain, "H1 and H2 must be pure powers of x");
    std::vector<const MonomialTerm*> A, B;
    TermSet out;
    for (const auto& t : terms.terms()) {
        if (t.h > 0) A.push_back(&t);
        else if (t.h < 0) B.push_back(&t);
        else out.add(t);
    }
    for (const auto* a : A)
        out.add({a->x + H1.x * a->h, 0, "(" + a->label + ") at H1"});
    for (const auto* b : B)
        out.add({b->x + H2.x * b->h, 0, "(" + b->label + ") at H2"});
    for (const auto* a : A)
        for (const auto* b : B) {
            const Rational ai = a->h;
            const Rational bj = -b->h;
            const AffineExponent x = (a->x * bj + b->x * ai) * (Rational(1) / (ai + bj));
            out.add({x, 0, "cross(" + a->label + ", " + b->label + ")"});
        }
    return out;
}

std::vector<double> srinivasan_numeric(const std::vector<std::pair<double, double>>& terms, double H1, double H2) {
    require(H1 > 0 && H1 <= H2, ErrorKind::Domain, "srinivasan needs 0 < H1 <= H2");
    std::vector<double> out;
    std::vector<std::pair<double, double>> A, B;
    for (auto [k, p] : terms) {
        require(k > 0, ErrorKind::Domain, "srinivasan needs positive coefficients");
        if (p > 0) A.emplace_back(k, p);
        else if (p < 0) B.emplace_back(k, -p);
        else out.push_back(k);
    }
    for (auto [k, a] : A) out.push_back(k * std::pow(H1, a));
    for (auto [k, b] : B) out.push_back(k * std::pow(H2, -b));
    for (auto [ka, a] : A)
        for (auto [kb, b] : B) out.push_back(std::pow(std::pow(ka, b) * std::pow(kb, a), 1.0 / (a + b)));
    return out;
}

std::vector<ExpPoint> region_vertices() {
    return {{1, Rational(18, 19)}, {1, 1}, {Rational(28, 19), 1}};
}

std::vector<ExpPoint> box_vertices() {
    return {{1, 0}, {Rational(28, 19), 0}, {1, 1}, {Rational(28, 19), 1}};
}

bool in_region(const Rational& c, const Rational& gamma) {
    return c > 1 && c < Rational(28, 19) && gamma > 0 && gamma < 1 && 19 * (c - 1) + 171 * (1 - gamma) < 9;
}

bool dominates(const AffineExponent& a, const AffineExponent& b, std::span<const ExpPoint> vertices) {
    return std::all_of(vertices.begin(), vertices.end(),
                       [&](const ExpPoint& v) { return a.at(v.c, v.gamma) >= b.at(v.c, v.gamma); });
}

bool dominates(const MonomialTerm& a, const MonomialTerm& b, std::span<const ExpPoint> vertices) {
    return a.h >= b.h && dominates(a.x, b.x, vertices);
}

std::map<std::string, TermSet> paper_catalogues() {
    std::map<std::string, TermSet> cats;
    cats["type_i"] = parse_set({
        "H x^(c/9 + 569/684)",
        "H^(7/6) x^(gamma/6 - c/18 + 569/684)",
        "H x^(1 - gamma/3)",
    });
    cats["type_ii"] = parse_set({
        "H x^(c/4 + 7/12)",
        "H^(5/4) x^(gamma/4 + 7/12)",
        "H x^(c/9 + 143/171)",
        "H x^(1 - gamma/4)",
        "H x^(c/6 + 13/18)",
        "H^(7/6) x^(gamma/6 + 13/18)",
        "H^(9/8) x^(5/6)",
        "H^(7/8) x^(c/8 - gamma/8 + 5/6)",
    });
    cats["gamma10_small_t"] = parse_set({
        "H^(7/6) x^(gamma/6 + 3/4)",
        "H^(5/4) x^(gamma/4 + 5/8)",
        "H^(3/4) x^(1 - gamma/4)",
        "H x^(22/25)",
    });
    cats["gamma10_large_t"] = parse_set({
        "H x^(c/4 + 7/12)",
        "H^(5/4) x^(gamma/4 + 7/12)",
        "H x^(c/9 + 143/171)",
        "H x^(1 - gamma/4)",
        "H x^(c/6 + 13/18)",
        "H^(7/6) x^(gamma/6 + 13/18)",
        "H^(9/8) x^(5/6)",
        "H^(7/6) x^(gamma/6 - c/18 + 569/684)",
        "H^(7/8) x^(c/8 - gamma/8 + 5/6)",
    });
    cats["gamma10"] = parse_set({
        "H x^(c/4 + 7/12)",
        "H^(5/4) x^(gamma/4 + 5/8)",
        "H x^(c/9 + 143/171)",
        "H x^(1 - gamma/4)",
        "H x^(c/6 + 13/18)",
        "H^(7/6) x^(gamma/6 + 3/4)",
        "H^(9/8) x^(5/6)",
        "H^(7/6) x^(gamma/6 - c/18 + 569/684)",
        "H^(7/8) x^(c/8 - gamma/8 + 5/6)",
    });
    cats["gamma6"] = parse_set({
        "H x^(c/4 + gamma - 5/12)",
        "H^(5/4) x^(5gamma/4 - 3/8)",
        "H x^(c/9 + gamma - 28/171)",
        "H x^(3gamma/4)",
        "H x^(c/6 + gamma - 5/18)",
        "H^(7/6) x^(7gamma/6 - 1/4)",
        "H^(9/8) x^(gamma - 1/6)",
        "H^(7/6) x^(7gamma/6 - c/18 - 115/684)",
        "H^(7/8) x^(c/8 + 7gamma/8 - 1/6)",
    });
    cats["gamma11"] = parse_set({
        "H^(7/6) x^(gamma/6 + 3/4)",
        "H^(5/4) x^(gamma/4 + 5/8)",
        "H^(3/4) x^(1 - gamma/4)",
        "H x^(22/25)",
    });
    cats["gamma7"] = parse_set({
        "H^(-1) x",
        "H^(1/6) x^(gamma/6 + 3/4)",
        "H^(1/4) x^(gamma/4 + 5/8)",
        "H^(-1/4) x^(1 - gamma/4)",
        "x^(22/25)",
    });
    cats["gamma5_pre"] = parse_set({
        "H x^(c/4 + gamma - 5/12)",
        "H^(5/4) x^(5gamma/4 - 3/8)",
        "H x^(c/9 + gamma - 28/171)",
        "H x^(3gamma/4)",
        "H x^(c/6 + gamma - 5/18)",
        "H^(7/6) x^(7gamma/6 - 1/4)",
        "H^(9/8) x^(gamma - 1/6)",
        "H^(7/6) x^(7gamma/6 - c/18 - 115/684)",
        "H^(7/8) x^(c/8 + 7gamma/8 - 1/6)",
        "H^(1/6) x^(gamma/6 + 3/4)",
        "H^(1/4) x^(gamma/4 + 5/8)",
        "H^(-1/4) x^(1 - gamma/4)",
        "H^(-1) x",
        "x^(22/25)",
    });
    cats["gamma5"] = parse_set({
        "x^(c/4 + gamma - 5/12)",
        "x^(5gamma/4 - 3/8)",
        "x^(c/9 + gamma - 28/171)",
        "x^(3gamma/4)",
        "x^(c/6 + gamma - 5/18)",
        "x^(7gamma/6 - 1/4)",
        "x^(gamma - 1/6)",
        "x^(7gamma/6 - c/18 - 115/684)",
        "x^(c/8 + 7gamma/8 - 1/6)",
        "x^(gamma/6 + 3/4)",
        "x^(gamma/4 + 5/8)",
        "x^(22/25)",
        "x^(c/20 + 43/60)",
        "x^(37/48)",
        "x^(c/45 + 656/855)",
        "x^(4/5 - gamma/20)",
        "x^(c/30 + 67/90)",
        "x^(53/68)",
        "x^(26/33 - gamma/44)",
        "x^(20768/26163 - c/102)",
        "x^(c/36 + 20/27)",
        "x^(17/20)",
        "x^(13/16)",
        "x^(c/8 + gamma/2 + 7/24)",
        "x^(5gamma/9 + 7/18)",
        "x^(c/18 + gamma/2 + 143/342)",
        "x^(3gamma/8 + 1/2)",
        "x^(c/12 + gamma/2 + 13/36)",
        "x^(7gamma/13 + 11/26)",
        "x^(8gamma/17 + 23/51)",
        "x^(7gamma/13 - c/39 + 683/1482)",
        "x^(c/15 + 7gamma/15 + 17/45)",
        "x^(gamma/7 + 11/14)",
        "x^(gamma/5 + 7/10)",
    });
    return cats;
}

AffineExponent claimed_gamma5_exponent() { return {Rational(143, 342), Rational(1, 18), Rational(1, 2)}; }

std::vector<Finding> catalogue_consistency() {
    const auto cats = paper_catalogues();
    std::vector<Finding> out;
    auto record = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok ? "consistent" : "inconsistent", std::move(detail), {}});
    };

    TermSet shifted;
    for (auto t : cats.at("gamma10").terms()) {
        t.x = t.x + AffineExponent{-1, 0, 1};
        shifted.add(t);
    }
    record("gamma6", shifted.same_as(cats.at("gamma6")), "gamma10 multiplied by x^(gamma - 1)");

    TermSet scaled;
    scaled.add(term(-1, 1, 0, 0));
    for (auto t : cats.at("gamma11").terms()) {
        t.h -= 1;
        scaled.add(t);
    }
    record("gamma7", scaled.same_as(cats.at("gamma7")), "H^(-1) (x + gamma11)");

    TermSet merged = cats.at("gamma6");
    for (const auto& t : cats.at("gamma7").terms()) merged.add(t);
    record("gamma5_pre", merged.same_as(cats.at("gamma5_pre")), "gamma6 together with gamma7");

    record("gamma11", cats.at("gamma11").same_as(cats.at("gamma10_small_t")), "same list as gamma10 for small t");

    const auto box = box_vertices();
    std::string missing;
    TermSet both = cats.at("gamma10_small_t");
    for (const auto& t : cats.at("gamma10_large_t").terms()) both.add(t);
    const bool g10 = covered_by(both, cats.at("gamma10"), box, missing);
    record("gamma10", g10, g10 ? "every small-t and large-t term dominated on the box" : "not dominated: " + missing);

    TermSet types = cats.at("type_i");
    for (const auto& t : cats.at("type_ii").terms()) types.add(t);
    const bool g10l = covered_by(types, cats.at("gamma10_large_t"), box, missing);
    record("gamma10_large_t", g10l,
           g10l ? "every type I and type II term dominated on the box" : "not dominated: " + missing);
    return out;
}

CatalogueDerivation derive_gamma5_catalogue() {
    const auto cats = paper_catalogues();
    const TermSet& printed = cats.at("gamma5");
    const auto verts = region_vertices();
    CatalogueDerivation r;
    r.computed = srinivasan_optimize(cats.at("gamma5_pre"), term(0, 0, 0, 0, "H1 = 1"), term(0, 10, 0, 0, "H2 = x^10"));

    auto dominator_in = [&](const MonomialTerm& t, const TermSet& pool) -> const MonomialTerm* {
        for (const auto& s : pool.terms())
            if (!s.same_monomial(t) && dominates(s, t, verts)) return &s;
        return nullptr;
    };

    for (const auto& t : r.computed.terms()) {
        if (printed.find(t.x, t.h)) {
            r.matched.push_back(t);
            r.findings.push_back({to_string(t), "matched", t.label, {}});
        } else if (const auto* d = dominator_in(t, r.computed)) {
            r.computed_dominated.emplace_back(t, *d);
            r.findings.push_back({to_string(t), "computed_dominated", t.label + "; dominated by " + to_string(*d),
                                  point_string(tightest(d->x, t.x, verts))});
        } else {
            r.computed_extra.push_back(t);
            r.findings.push_back({to_string(t), "computed_extra", t.label + "; not printed and not dominated", {}});
        }
    }
    for (const auto& p : printed.terms()) {
        if (r.computed.find(p.x, p.h)) continue;
        // nearest computed candidate with the same c and gamma coefficients
        std::string nearest;
        for (const auto& t : r.computed.terms())
            if (t.x.alpha == p.x.alpha && t.x.beta == p.x.beta && !printed.find(t.x, t.h))
                nearest = "; computed " + to_string(t) + " (" + t.label + ") differs in the constant by " +
                          to_string(t.x.u - p.x.u);
        if (const auto* d = dominator_in(p, r.computed)) {
            r.paper_dominated.emplace_back(p, *d);
            r.findings.push_back({to_string(p), "paper_dominated",
                                  "no pairing reproduces it; dominated by " + to_string(*d) + nearest,
                                  point_string(tightest(d->x, p.x, verts))});
        } else {
            r.paper_unmatched.push_back(p);
            r.findings.push_back({to_string(p), "paper_unmatched", "no pairing reproduces it" + nearest, {}});
        }
    }
    r.findings.push_back({"H2", "model",
                          "H2 = x^10 stands in for an unbounded H; the H2 endpoint terms are pruned as dominated", {}});
    r.findings.push_back({"gamma5", "transcription_note",
                          "the printed list opens a bracket it never closes; terms taken as printed", {}});
    return r;
}

Dominant dominant_exponent(const TermSet& set, const Rational& c, const Rational& gamma) {
    require(c > 1 && c < Rational(28, 19) && gamma > 0 && gamma < 1, ErrorKind::Domain,
            "dominant_exponent needs (c, gamma) in (1, 28/19) x (0, 1)");
    require(set.size() > 0, ErrorKind::Domain, "dominant_exponent needs a nonempty set");
    Dominant d;
    bool first = true;
    for (const auto& t : set.terms()) {
        const Rational v = t.x.at(c, gamma);
        if (first || v > d.value) {
            d.value = v;
            d.labels.assign(1, t.label);
            first = false;
        } else if (v == d.value) {
            d.labels.push_back(t.label);
        }
    }
    return d;
}

RegionReport region_report(const Rational& step) {
    require(step > 0, ErrorKind::Domain, "region grid needs step > 0");
    RegionReport r;
    r.step = step;
    const AffineExponent claim = claimed_gamma5_exponent();
    // 342 (gamma - claim) against 9 - 19(c - 1) - 171(1 - gamma)
    const AffineExponent lhs = (AffineExponent{0, 0, 1} - claim) * 342;
    const AffineExponent rhs{9 + 19 - 171, -19, 171};
    r.equivalence_proved = lhs == rhs;

    const TermSet cat = paper_catalogues().at("gamma5");
    const std::string claim_label = to_string(term(0, claim.u, claim.alpha, claim.beta));

    // Every exponent is an integer-affine function of the grid indices (i, j)
    // once scaled by a common denominator D.
    BigInt D = boost::multiprecision::denominator(step);
    auto lcm_in = [&](const Rational& q) {
        const BigInt den = boost::multiprecision::denominator(q);
        D = D / boost::multiprecision::gcd(D, den) * den;
    };
    for (const auto& t : cat.terms()) {
        lcm_in(t.x.u + t.x.alpha);
        lcm_in(t.x.alpha * step);
        lcm_in(t.x.beta * step);
    }
    auto scaled = [&](const Rational& q) -> BigInt {
        const Rational s = q * D;
        return boost::multiprecision::numerator(s);
    };
    struct Lin {
        BigInt k0, ki, kj;
    };
    std::vector<Lin> lins;
    for (const auto& t : cat.terms())
        lins.push_back({scaled(t.x.u + t.x.alpha), scaled(t.x.alpha * step), scaled(t.x.beta * step)});
    const Lin claim_lin{scaled(claim.u + claim.alpha), scaled(claim.alpha * step), scaled(claim.beta * step)};
    const BigInt gstep = scaled(step);

    const Rational cmax(28, 19);
    for (long i = 1; 1 + i * step < cmax; ++i) {
        for (long j = 1; j * step < 1; ++j) {
            RegionRow row;
            row.c = 1 + i * step;
            row.gamma = j * step;
            row.in_region = in_region(row.c, row.gamma);
            BigInt best;
            for (std::size_t k = 0; k < lins.size(); ++k) {
                const BigInt v = lins[k].k0 + lins[k].ki * i + lins[k].kj * j;
                if (k == 0 || v > best) {
                    best = v;
                    row.dominant.labels.assign(1, cat.terms()[k].label);
                } else if (v == best) {
                    row.dominant.labels.push_back(cat.terms()[k].label);
                }
            }
            row.dominant.value = Rational(best, D);
            const BigInt claim_v = claim_lin.k0 + claim_lin.ki * i + claim_lin.kj * j;
            const BigInt gamma_v = gstep * j;
            row.matches_claim = claim_v == best;
            row.below_gamma = best < gamma_v;
            const bool claim_below = claim_v < gamma_v;
            if (claim_below != row.in_region) ++r.grid_mismatches;
            if (row.in_region && !row.below_gamma) ++r.dominance_failures;
            if (row.in_region && !row.matches_claim) {
                std::string labels;
                for (const auto& l : row.dominant.labels) labels += (labels.empty() ? "" : "; ") + l;
                r.findings.push_back({labels, "dominant_label_differs",
                                      "dominant value " + to_string(row.dominant.value) + " exceeds " + claim_label,
                                      to_string(row.c) + "," + to_string(row.gamma)});
            }
            r.rows.push_back(std::move(row));
        }
    }
    return r;
}

void write_region_csv(std::ostream& os, const RegionReport& report) {
    os << "c,gamma,in_region,dominant_value_num,dominant_value_den,dominant_label,matches_claim,below_gamma\n";
    for (const auto& r : report.rows) {
        std::string labels;
        for (const auto& l : r.dominant.labels) labels += (labels.empty() ? "" : "; ") + l;
        os << to_string(r.c) << ',' << to_string(r.gamma) << ',' << r.in_region << ','
           << boost::multiprecision::numerator(r.dominant.value) << ','
           << boost::multiprecision::denominator(r.dominant.value) << ",\"" << labels << "\"," << r.matches_claim
           << ',' << r.below_gamma << '\n';
    }
}

void write_findings_json(std::ostream& os, const std::vector<Finding>& findings) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : findings)
        arr.push_back({{"term", f.term}, {"status", f.status}, {"detail", f.detail}, {"witness_point", f.witness_point}});
    os << arr.dump(2) << '\n';
}

} // namespace pslab
