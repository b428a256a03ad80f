#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "orbitforge/embedding.hpp"
#include "orbitforge/gsw.hpp"
#include "orbitforge/harmonic.hpp"
#include "orbitforge/orbit.hpp"

namespace orbitforge {

using Json = nlohmann::ordered_json;

// Report schema:
//   complex number      [re, im]
//   projective point    [re, im] of the affine value, or "inf"
//   configuration       array of points
//   matrix              array of rows of complex numbers
//   non-finite reals    "inf", "-inf", "nan"

Json to_json(Real x);
Json to_json(Scalar z);
Json to_json(const ProjectivePoint& p);
Json to_json(const Configuration& c);
Json to_json(const std::vector<Scalar>& v);
Json to_json(const Matrix& m);
Json to_json(const MonicPolynomial& p);
/// With include_states = false only the summary and per-state norms are kept.
Json to_json(const OrbitTrace& trace, bool include_states = true);
Json to_json(const RootFindResult& result);
Json to_json(const CycleReport& report);
Json to_json(const GswSolution& solution);
Json to_json(const PhiCycleReport& report);

/// JSON text with every floating-point number printed with 17 significant
/// digits, so equal inputs give byte-identical output.
std::string dump_json(const Json& j, int indent = 2);

/// One row per state: iteration, then for every coordinate re, im, modulus
/// and whether it lies in the inverted chart (chordal distance to infinity
/// below 0.5). Infinite coordinates print as inf.
void write_trace_csv(std::ostream& out, const OrbitTrace& trace);

}  // namespace orbitforge
