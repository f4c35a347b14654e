// cli.hpp
// Command-line front end: run a protocol, print derived outcome tables, run
// verification suites. Machine-readable output in JSON or CSV; enumerate
// mode is byte-deterministic, sample mode is byte-deterministic per seed.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "nlm/protocol.hpp"

namespace nlm::cli {

// Angles are accepted as radians or as fractions of pi ("pi/8", "3pi/16",
// "-pi/4", "0.5pi"); the symbolic spelling is kept for the output.
struct AngleValue {
    double value = 0.0;
    std::string symbolic; // empty when given as a plain number
};

AngleValue parse_angle(const std::string& text); // throws ValidationError

// exit codes: 0 success, 1 verification failure, 2 usage/validation error
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nlm::cli
