#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitforge/io.hpp"

namespace orbitforge::cli {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentOutcome {
    Json result;
    std::vector<Check> checks;
    /// Exported as CSV when present.
    std::optional<OrbitTrace> trace;
};

using Parameters = std::map<std::string, std::string>;

/// Names accepted by `paper`.
const std::vector<std::string>& experiment_names();

/// UsageError for unknown names or bad parameters.
ExperimentOutcome run_experiment(const std::string& name, const Parameters& params, std::uint64_t seed);

/// Distinct roots uniform in the disk of radius 2 with pairwise distance at
/// least 0.2, from an engine seeded by (seed, index).
std::vector<Scalar> random_roots(std::uint64_t seed, std::uint64_t index, std::size_t count);

}  // namespace orbitforge::cli
