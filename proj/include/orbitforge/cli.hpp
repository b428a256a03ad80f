#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitforge/iteration.hpp"

namespace orbitforge::cli {

/// Bad flags or unparsable values; the CLI exits with status 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// "1.5-0.5i", "2i", "-i", "3", "1e-3+2e2i". Throws UsageError.
Scalar parse_complex(const std::string& text);
/// parse_complex or "inf".
ProjectivePoint parse_point(const std::string& text);
/// Comma-separated list of complex numbers.
std::vector<Scalar> parse_complex_list(const std::string& text);
std::vector<ProjectivePoint> parse_point_list(const std::string& text);

UpdateRule parse_rule(const std::string& text);
Schedule parse_schedule(const std::string& text);

/// Experiment seed: ORBITFORGE_SEED when set, else `fallback`.
std::uint64_t effective_seed(std::uint64_t fallback);

/// Runs the command line (without the program name). Exit status: 0 success,
/// 1 numerical failure or failed check, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbitforge::cli
