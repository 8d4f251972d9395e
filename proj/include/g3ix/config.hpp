#pragma once

#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "g3ix/io.hpp"
#include "g3ix/spacetime.hpp"
#include "g3ix/verify.hpp"

namespace g3ix {

/// A validated run configuration. Expressions stay as source strings here;
/// they are parsed when the curve is built so syntax errors carry the
/// offending field name.
struct RunConfig {
    nlohmann::ordered_json raw;

    std::optional<CaseId> forced_case;

    // Input style A: six expressions of t.
    bool has_expressions = false;
    std::array<std::string, 3> alpha_src{}, beta_src{};
    // Input style B: parallel parametrization through phi.
    bool has_phi = false;
    std::string phi_src;
    double e = 1.0, c2 = 0.0, c3 = 0.0;
    std::optional<double> c;  // third-axis amplitude; selects the 5b form

    ParamMap params;
    std::map<std::string, std::string> free_src;  // slot name -> expression

    TimeGrid time_grid;
    VerifyGrid verify_grid;
    double classify_tol = 1e-9;

    std::string out_dir = ".";
    std::string csv_name = "solution.csv";
    std::string json_name = "solution.json";
    std::string report_name = "report.json";
    std::uint64_t seed = 42;
};

/// Parse and validate a configuration document. Throws ConfigError.
RunConfig config_from_json(const nlohmann::ordered_json& j);
RunConfig load_config(const std::string& path);

/// Build the field curve from the configured input. Throws ConfigError.
FieldCurve curve_from_config(const RunConfig& cfg);

/// Classify (or check the forced case) over the configured time grid.
CaseId resolve_case(const RunConfig& cfg, const FieldCurve& curve);

/// Check the free-function list against the branch and parse it.
/// Throws ConfigError naming any missing or extraneous slot.
FreeFunctions free_functions_from_config(const RunConfig& cfg, CaseId id);

/// Full solve pipeline: classify, solve per sample, assemble.
SpacetimeSolution run_solve(const RunConfig& cfg);

/// Serialize a report (schema: checks / residual / typo_findings).
nlohmann::ordered_json report_to_json(const ResidualReport& rep);

}  // namespace g3ix
