#pragma once

#include <string>

#include <json.hpp>

#include "fuzzband/analysis.hpp"
#include "fuzzband/solver.hpp"

namespace fuzzband {

// Strict parsers: unknown fields are rejected, ranges are validated.
ProblemSpec parse_problem(const nlohmann::json& j);
ProblemSpec parse_problem_file(const std::string& path);

// Canonical serialization of a resolved problem (defaults filled in).
// parse(problem_to_json(parse(x))) == parse(x).
nlohmann::json problem_to_json(const ProblemSpec& spec);

FamilySample parse_family(const nlohmann::json& j);
FamilySample parse_family_file(const std::string& path);

nlohmann::json report_to_json(const SolveReport& report,
                              const ProblemSpec& spec);
nlohmann::json compactness_to_json(const CompactnessReport& report,
                                   const std::string& label,
                                   size_t member_count, int alpha_cells,
                                   double refinement_delta);

// Band table rows (t, alpha, lower, upper), t-major then alpha ascending,
// with a mandatory header and >= 12 significant digits.
void write_band_csv(const std::string& path, const FuzzyTrajectory& bands);

// Re-reads an exported band table and checks the format and the
// lower <= upper invariant (tolerance 1e-9, matching band validity).
// Throws std::runtime_error on any violation.
void check_band_csv(const std::string& path);

}  // namespace fuzzband
