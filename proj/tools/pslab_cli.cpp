#include "pslab/config.hpp"
#include "pslab/error.hpp"
#include "pslab/exponent.hpp"
#include "pslab/expsum.hpp"
#include "pslab/hb.hpp"
#include "pslab/numerics.hpp"
#include "pslab/sieve.hpp"
#include "pslab/vaaler.hpp"
#include "pslab/vdc.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace pslab;

namespace {

constexpr int kPass = 0;
constexpr int kRuntime = 1;
constexpr int kPrecondition = 2;
constexpr int kInvariant = 3;

struct Overrides {
    std::optional<std::string> config_path;
    std::vector<std::pair<std::string, std::optional<std::string>>> values;
    bool allow_outside = false;

    Overrides() {
        for (const char* k : {"c", "gamma", "t", "d", "a", "x", "x_schedule", "H", "out", "seed", "grid_step", "fixture"})
            values.emplace_back(k, std::nullopt);
    }
};

void add_flags(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "key=value config file");
    for (auto& [key, value] : o.values) {
        std::string flag = "--" + key;
        for (auto& ch : flag)
            if (ch == '_') ch = '-';
        sub->add_option(flag, value);
    }
    sub->add_flag("--allow-outside", o.allow_outside, "run outside the admissible (c, gamma) region");
}

RunConfig build_config(const std::string& command, const Overrides& o) {
    RunConfig cfg;
    if (o.config_path) {
        std::ifstream in(*o.config_path);
        require(in.good(), ErrorKind::Io, "cannot read config " + *o.config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_config(ss.str());
    }
    cfg.command = command;
    for (const auto& [key, value] : o.values)
        if (value) set_key(cfg, key, *value);
    if (o.allow_outside) cfg.allow_outside = "true";
    return cfg;
}

std::string out_path(const RunConfig& cfg, const char* fallback) { return cfg.out.empty() ? fallback : cfg.out; }

std::string sibling(const std::string& path, const char* suffix) {
    const auto dot = path.rfind('.');
    const auto slash = path.rfind('/');
    const std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash))
                                 ? path.substr(0, dot)
                                 : path;
    return stem + suffix;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    require(os.good(), ErrorKind::Io, "cannot write " + path);
    return os;
}

int cmd_theorem(const RunConfig& cfg) {
    const Parameters p = cfg.parameters();
    const bool allow = cfg.allow_outside_value();
    if (!allow && !p.region_ok()) {
        std::cerr << "(c, gamma) = (" << cfg.c << ", " << cfg.gamma
                  << ") violates 19(c-1) + 171(1-gamma) < 9; pass --allow-outside to run anyway\n";
        return kPrecondition;
    }
    const auto rows = theorem_trend(p, cfg.schedule(), allow);
    const std::string path = out_path(cfg, "theorem.csv");
    auto os = open_out(path);
    write_comment_header(os, cfg);
    write_trend_csv(os, rows);

    bool ok = true;
    std::printf("%-12s %-14s %-12s %-12s %-10s %s\n", "x", "|err|/|main|", "identity", "A/B rel", "primes", "status");
    for (const auto& r : rows) {
        const bool row_ok = r.identity_ok && r.main_term.agree;
        ok = ok && row_ok;
        std::printf("%-12.6g %-14.6g %-12.3g %-12.3g %-10llu %s\n", r.x, r.ratio_err_main, r.identity_residual,
                    r.main_term.rel_diff, static_cast<unsigned long long>(r.n_primes), row_ok ? "ok" : "FAIL");
    }
    std::printf("claimed exponent %.6f; wrote %s\n", p.claimed_exponent(), path.c_str());
    return ok ? kPass : kInvariant;
}

int cmd_gamma5(const RunConfig& cfg) {
    Parameters p = cfg.parameters();
    const auto rows = gamma5_schedule(p.x, p);
    const std::string path = out_path(cfg, "gamma5.csv");
    auto os = open_out(path);
    write_comment_header(os, cfg);
    write_gamma5_csv(os, rows, p);
    std::printf("%-12s %-14s %s\n", "x", "|gamma5|", "x^claimed");
    for (const auto& [x, r] : rows)
        std::printf("%-12.6g %-14.6g %.6g\n", x, std::abs(r.value), std::pow(x, p.claimed_exponent()));
    std::printf("wrote %s\n", path.c_str());
    return kPass;
}

int cmd_vaaler(const RunConfig& cfg) {
    const int H = cfg.H_value();
    const auto coeffs = build_coefficients(H);
    const auto caps = measure_caps(coeffs);
    const auto sweep = sweep_inequality(coeffs, 10000, 1000, cfg.seed_value());
    const std::string path = out_path(cfg, "vaaler.csv");
    auto os = open_out(path);
    write_comment_header(os, cfg);
    write_coefficients_csv(os, coeffs);
    const bool ok = sweep.worst_excess <= 1e-10 && caps.kappa_a <= 1.0 && caps.kappa_b <= 4.0;
    std::printf("H=%d worst excess %.3g at %.6f, min majorant %.3g, grid mean %.6g, max|a(h)h| %.6f, max b(h)H %.6f\n",
                H, sweep.worst_excess, sweep.worst_at, sweep.min_majorant, sweep.grid_mean_majorant, caps.kappa_a,
                caps.kappa_b);
    std::printf("%s; wrote %s\n", ok ? "ok" : "FAIL", path.c_str());
    return ok ? kPass : kInvariant;
}

int cmd_vdc(const RunConfig& cfg) {
    const auto rows = derivative_sweep();
    const std::string path = out_path(cfg, "vdc.csv");
    auto os = open_out(path);
    write_comment_header(os, cfg);
    write_sweep_csv(os, rows);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.report.ratio);
    const bool ok = worst <= 10.0;
    std::printf("%zu (phase, interval) pairs, worst empirical/bound %.4f; %s; wrote %s\n", rows.size(), worst,
                ok ? "ok" : "FAIL", path.c_str());
    return ok ? kPass : kInvariant;
}

int cmd_hb(const RunConfig& cfg) {
    const Rational c = parse_rational(cfg.c);
    const double cd = to_double(c);
    const auto threshold = uvz_threshold(c);
    std::printf("c=%s: ordering 2 <= U < V <= Z <= P from log2 x >= %.4f (U >= 2: %.4f, V <= Z: %.4f)\n",
                cfg.c.c_str(), to_double(threshold.log2_x_all), to_double(threshold.log2_x_u_ge_2),
                to_double(threshold.log2_x_v_le_z));
    std::vector<UVZWindows> windows;
    bool ok = true;
    for (double x : cfg.schedule()) {
        const auto r = uvz_preconditions(x, cd);
        ok = ok && r.exponent_identities;
        const auto cov = coverage(r.windows);
        std::printf("x=%.6g log2 U=%.3f V=%.3f Z=%.3f | U^2<=Z %+.3f, 128UZ^2<=P1 %+.3f, 2^18P1<=V^3 %+.3f | "
                    "ordering %s%s\n",
                    x, r.windows.log2_U, r.windows.log2_V, r.windows.log2_Z, r.u_sq_le_z.slack_log2,
                    r.uz2_le_p1.slack_log2, r.p1_le_v3.slack_log2, r.ordering() ? "holds" : "fails",
                    cov.has_gap ? ", unclassified gap (V, Z)" : "");
        windows.push_back(r.windows);
    }
    const std::string path = out_path(cfg, "hb.csv");
    auto os = open_out(path);
    write_comment_header(os, cfg);
    write_classification_csv(os, windows);
    std::printf("exponent identities %s; wrote %s\n", ok ? "exact" : "FAIL", path.c_str());
    return ok ? kPass : kInvariant;
}

int cmd_region(const RunConfig& cfg) {
    const auto report = region_report(cfg.grid_step_value());
    const auto derivation = derive_gamma5_catalogue();
    std::vector<Finding> findings = catalogue_consistency();
    findings.insert(findings.end(), derivation.findings.begin(), derivation.findings.end());
    findings.insert(findings.end(), report.findings.begin(), report.findings.end());

    const std::string path = out_path(cfg, "region.csv");
    {
        auto os = open_out(path);
        write_comment_header(os, cfg);
        write_region_csv(os, report);
    }
    const std::string fpath = sibling(path, "_findings.json");
    {
        auto os = open_out(fpath);
        write_findings_json(os, findings);
    }
    std::size_t inside = 0;
    for (const auto& r : report.rows) inside += r.in_region;
    const bool ok = report.equivalence_proved && report.grid_mismatches == 0 && report.dominance_failures == 0 &&
                    derivation.paper_unmatched.size() <= 3;
    std::printf("grid step %s: %zu points, %zu inside; equivalence %s, mismatches %zu, dominance failures %zu\n",
                to_string(report.step).c_str(), report.rows.size(), inside,
                report.equivalence_proved ? "proved" : "FAILED", report.grid_mismatches, report.dominance_failures);
    std::printf("catalogue: %zu matched, %zu printed terms only dominated, %zu unmatched; %zu findings\n",
                derivation.matched.size(), derivation.paper_dominated.size(), derivation.paper_unmatched.size(),
                findings.size());
    std::printf("%s; wrote %s and %s\n", ok ? "ok" : "FAIL", path.c_str(), fpath.c_str());
    return ok ? kPass : kInvariant;
}

// ---- suite ----

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Check suite_sieve() {
    Check c{"sieve-oracles", true, ""};
    const auto t = sieve_range(0, 1'000'000, SieveOptions{true, 4096});
    std::vector<bool> ref(1'000'001, true);
    ref[0] = ref[1] = false;
    for (std::uint64_t i = 2; i * i <= 1'000'000; ++i)
        if (ref[i])
            for (std::uint64_t j = i * i; j <= 1'000'000; j += i) ref[j] = false;
    std::uint64_t bad = 0;
    for (std::uint64_t n = 1; n <= 1'000'000; ++n) bad += t.is_prime(n) != ref[n];
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        double lam = 0.0;
        int mus = 0;
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) {
                lam += t.lambda(d);
                mus += t.mu(d);
            }
        bad += std::abs(lam - std::log(static_cast<double>(n))) > 1e-9 || mus != (n == 1);
    }
    c.pass = bad == 0;
    c.detail = "segmented vs monolithic to 1e6, Lambda/mu convolutions to 1e4: " + std::to_string(bad) + " mismatches";
    return c;
}

Check suite_fixture(const RunConfig& cfg) {
    Check c{"phase-fixture", false, ""};
    const std::string path = cfg.fixture.empty() ? PSLAB_DEFAULT_FIXTURE : cfg.fixture;
    try {
        std::ifstream in(path);
        require(in.good(), ErrorKind::Io, "cannot read " + path);
        std::string line;
        std::getline(in, line);
        require(line == "t,n,c,frac", ErrorKind::Parse, "bad header");
        std::size_t rows = 0, bad = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string f[4];
            for (auto& s : f) require(static_cast<bool>(std::getline(ss, s, ',')), ErrorKind::Parse, "short row");
            const double tt = to_double(parse_rational(f[0]));
            const Rational nn = parse_rational(f[1]);
            require(boost::multiprecision::denominator(nn) == 1 && nn > 0, ErrorKind::Parse, "bad n " + f[1]);
            const double cc = to_double(parse_rational(f[2]));
            const double expected = to_double(parse_rational(f[3]));
            double mag = 0.0;
            const double got = phase_mod1_unchecked(tt, static_cast<std::uint64_t>(nn), cc, &mag);
            double dist = std::abs(got - expected);
            dist = std::min(dist, 1.0 - dist);
            bad += !(dist <= 1e-9 && dist <= phase_error_bound(mag));
            ++rows;
        }
        require(rows > 0, ErrorKind::Parse, "no rows");
        c.pass = bad == 0;
        c.detail = std::to_string(rows) + " rows, " + std::to_string(bad) + " outside the error bound";
    } catch (const std::exception& e) {
        c.detail = std::string("corrupted fixture: ") + e.what();
    }
    return c;
}

Check suite_vaaler(std::uint64_t seed) {
    Check c{"vaaler-grid", true, ""};
    double worst = -1.0, ka = 0.0, kb = 0.0;
    for (int H : {1, 10, 100, 1000}) {
        const auto coeffs = build_coefficients(H);
        const auto caps = measure_caps(coeffs);
        worst = std::max(worst, sweep_inequality(coeffs, 10000, 1000, seed).worst_excess);
        ka = std::max(ka, caps.kappa_a);
        kb = std::max(kb, caps.kappa_b);
    }
    c.pass = worst <= 1e-10 && ka <= 1.0 && kb <= 4.0;
    c.detail = "worst excess " + fmt("%.3g", worst) + ", max|a(h)h| " + fmt("%.4f", ka) + ", max b(h)H " +
               fmt("%.4f", kb);
    return c;
}

Check suite_square_out(std::uint64_t seed) {
    const auto s = square_out_random(seed, 1000, 500, 1000, {1, 5, 50, 500});
    return {"square-out", s.violations == 0 && s.worst_imag <= 1e-8,
            std::to_string(s.trials) + " checks, " + std::to_string(s.violations) + " violations, worst margin " +
                fmt("%.3g", s.worst_margin)};
}

Check suite_hb() {
    const auto t = sieve_range(0, 10000);
    std::uint64_t bad = 0;
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        const double err = std::abs(hb_identity_value(n, 3, std::cbrt(static_cast<double>(n))) -
                                    (n == 1 ? 0.0 : t.lambda(n)));
        worst = std::max(worst, err);
        bad += err > 1e-9 * (1.0 + std::log(static_cast<double>(n)));
    }
    return {"hb-identity", bad == 0, "n <= 1e4, worst error " + fmt("%.3g", worst)};
}

Check suite_vdc() {
    const auto rows = derivative_sweep();
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.report.ratio);
    return {"derivative-tests", rows.size() >= 40 && worst <= 10.0,
            std::to_string(rows.size()) + " pairs, worst ratio " + fmt("%.4f", worst)};
}

Check suite_decomposition() {
    const auto r = theorem_check(make_parameters(1e4, 1.05, 0.995, 0.5, 3, 1));
    return {"decomposition", r.identity_ok && r.main_term.agree,
            "x=1e4 identity residual " + fmt("%.3g", r.identity_residual) + ", A/B rel " +
                fmt("%.3g", r.main_term.rel_diff)};
}

Check suite_region() {
    const auto r = region_report(Rational(1, 200));
    return {"exponent-region", r.equivalence_proved && r.grid_mismatches == 0 && r.dominance_failures == 0,
            std::to_string(r.rows.size()) + " grid points, " + std::to_string(r.grid_mismatches) + " mismatches"};
}

int cmd_suite(const RunConfig& cfg) {
    const std::uint64_t seed = cfg.seed_value();
    std::vector<Check> checks;
    checks.push_back(suite_sieve());
    checks.push_back(suite_fixture(cfg));
    checks.push_back(suite_vaaler(seed));
    checks.push_back(suite_square_out(seed));
    checks.push_back(suite_hb());
    checks.push_back(suite_vdc());
    checks.push_back(suite_decomposition());
    checks.push_back(suite_region());
    bool ok = true;
    std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
    for (const auto& c : checks) {
        std::printf("%-18s %s  %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.detail.c_str());
        ok = ok && c.pass;
    }
    if (!ok) {
        std::string names;
        for (const auto& c : checks)
            if (!c.pass) names += (names.empty() ? "" : ", ") + c.name;
        std::fprintf(stderr, "failed: %s\n", names.c_str());
    }
    return ok ? kPass : kInvariant;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::Parse:
    case ErrorKind::RangeTooLarge:
    case ErrorKind::SizeCap: return kPrecondition;
    default: return kRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for exponential sums over Piatetski-Shapiro primes"};
    app.require_subcommand(1);
    Overrides overrides;
    const std::vector<std::pair<const char*, const char*>> commands = {
        {"theorem", "prime sum against its main term over an x schedule"},
        {"region", "admissible (c, gamma) map and catalogue findings"},
        {"gamma5", "dyadic Lambda-weighted sums against the claimed exponent"},
        {"vaaler", "trigonometric approximation of psi: coefficients and inequality sweep"},
        {"vdc", "derivative tests against direct sums"},
        {"hb", "decomposition windows, lemma conditions and the classification map"},
        {"suite", "full property suite"},
    };
    for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kPrecondition;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = build_config(command, overrides);
        if (command == "theorem") return cmd_theorem(cfg);
        if (command == "region") return cmd_region(cfg);
        if (command == "gamma5") return cmd_gamma5(cfg);
        if (command == "vaaler") return cmd_vaaler(cfg);
        if (command == "vdc") return cmd_vdc(cfg);
        if (command == "hb") return cmd_hb(cfg);
        return cmd_suite(cfg);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
}
