#include "pslab/config.hpp"

#include "pslab/error.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace pslab {

namespace {

struct Key {
    const char* name;
    std::string RunConfig::*field;
};

constexpr Key kKeys[] = {
    {"command", &RunConfig::command},     {"c", &RunConfig::c},
    {"gamma", &RunConfig::gamma},         {"t", &RunConfig::t},
    {"d", &RunConfig::d},                 {"a", &RunConfig::a},
    {"x", &RunConfig::x},                 {"x_schedule", &RunConfig::x_schedule},
    {"H", &RunConfig::H},                 {"out", &RunConfig::out},
    {"seed", &RunConfig::seed},           {"grid_step", &RunConfig::grid_step},
    {"allow_outside", &RunConfig::allow_outside}, {"fixture", &RunConfig::fixture},
};

template <class T>
T parse_integer(const std::string& s, const char* what) {
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc() && p == s.data() + s.size(), ErrorKind::Parse, std::string("bad ") + what + ": " + s);
    return v;
}

double parse_real(const std::string& s, const char* what) {
    try {
        return to_double(parse_rational(s));
    } catch (const Error&) {
        fail(ErrorKind::Parse, std::string("bad ") + what + ": " + s);
    }
}

} // namespace

Parameters RunConfig::parameters() const {
    const Rational ce = parse_rational(c);
    const Rational ge = parse_rational(gamma);
    Parameters p = make_parameters(parse_real(x, "x"), to_double(ce), to_double(ge), parse_real(t, "t"),
                                   parse_integer<std::uint64_t>(d, "d"), parse_integer<std::int64_t>(a, "a"));
    p.c_exact = ce;
    p.gamma_exact = ge;
    return p;
}

std::vector<double> RunConfig::schedule() const {
    if (x_schedule.empty()) return {parse_real(x, "x")};
    std::vector<double> out;
    std::stringstream ss(x_schedule);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item, "x_schedule"));
    return out;
}

int RunConfig::H_value() const { return parse_integer<int>(H, "H"); }
std::uint64_t RunConfig::seed_value() const { return parse_integer<std::uint64_t>(seed, "seed"); }

Rational RunConfig::grid_step_value() const {
    try {
        return parse_rational(grid_step);
    } catch (const Error&) {
        fail(ErrorKind::Parse, "bad grid_step: " + grid_step);
    }
}

bool RunConfig::allow_outside_value() const {
    if (allow_outside == "true" || allow_outside == "1") return true;
    if (allow_outside == "false" || allow_outside == "0") return false;
    fail(ErrorKind::Parse, "bad allow_outside: " + allow_outside);
}

void set_key(RunConfig& config, std::string_view key, std::string value) {
    for (const auto& k : kKeys)
        if (key == k.name) {
            config.*k.field = std::move(value);
            return;
        }
    fail(ErrorKind::Parse, "unknown config key: " + std::string(key));
}

std::string serialize(const RunConfig& config) {
    std::string out;
    for (const auto& k : kKeys) out += std::string(k.name) + "=" + config.*k.field + "\n";
    return out;
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        require(eq != std::string_view::npos, ErrorKind::Parse,
                "config line " + std::to_string(lineno) + " is not key=value");
        set_key(config, line.substr(0, eq), std::string(line.substr(eq + 1)));
    }
    return config;
}

void write_comment_header(std::ostream& os, const RunConfig& config) {
    std::stringstream ss(serialize(config));
    std::string line;
    while (std::getline(ss, line)) os << "# " << line << '\n';
}

} // namespace pslab
