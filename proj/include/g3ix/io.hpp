#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "g3ix/spacetime.hpp"

namespace g3ix {

/// Fixed column order of the sample table.
extern const char* const kCsvHeader;

/// Serialize the sample table; doubles are written round-trip exact.
std::string solution_to_csv(const SpacetimeSolution& sol);

/// Parse a sample table. Derivatives are reconstructed from the solved
/// unknowns (alpha_dot = n beta, beta_dot = -n alpha).
std::vector<SampleRow> samples_from_csv(std::istream& in);

/// JSON export: {"header": {"case", "free_slots", "parameters"}, "samples": [...]}.
/// `parameters` is caller-supplied (a run configuration echo, typically).
nlohmann::ordered_json solution_to_json(const SpacetimeSolution& sol,
                                        nlohmann::ordered_json parameters);

struct ImportedSolution {
    std::string case_label;
    std::vector<SampleRow> samples;
    nlohmann::ordered_json parameters;
};

ImportedSolution solution_from_json(const nlohmann::ordered_json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace g3ix
