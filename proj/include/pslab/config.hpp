#pragma once

#include "pslab/params.hpp"
#include "pslab/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pslab {

/// Run configuration of the command-line tool. Numeric fields keep the text
/// they were given so that a parsed file serializes back byte for byte.
struct RunConfig {
    std::string command = "theorem";
    std::string c = "1.05";
    std::string gamma = "0.995";
    std::string t = "0.5";
    std::string d = "3";
    std::string a = "1";
    std::string x = "1e4";
    std::string x_schedule; // comma-separated, empty means {x}
    std::string H = "10";
    std::string out;
    std::string seed = "1";
    std::string grid_step = "1/200";
    std::string allow_outside = "false";
    std::string fixture;

    /// Exact parameters; c and gamma keep their rational values.
    Parameters parameters() const;
    std::vector<double> schedule() const;
    int H_value() const;
    std::uint64_t seed_value() const;
    Rational grid_step_value() const;
    bool allow_outside_value() const;
};

/// key=value lines in a fixed key order.
std::string serialize(const RunConfig& config);

/// Accepts the serialize format plus blank lines and '#' comments.
/// Unknown keys and malformed lines raise ErrorKind::Parse.
RunConfig parse_config(std::string_view text);

/// Sets one key; ErrorKind::Parse for unknown keys.
void set_key(RunConfig& config, std::string_view key, std::string value);

/// The serialized config as '# '-prefixed lines, for CSV headers.
void write_comment_header(std::ostream& os, const RunConfig& config);

} // namespace pslab
