#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "g3ix/config.hpp"
#include "g3ix/io.hpp"
#include "g3ix/verify.hpp"

namespace {

using namespace g3ix;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPattern = 3;
constexpr int kExitInconsistent = 4;

struct CommonOpts {
    std::string config_path;
    std::string solution_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string grid_overrides;
};

RunConfig prepare_config(const CommonOpts& opts) {
    ordered_json raw;
    try {
        raw = ordered_json::parse(read_text_file(opts.config_path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse configuration '" + opts.config_path +
                          "': " + e.what());
    }
    if (!opts.grid_overrides.empty()) {
        try {
            raw["verify_grid"].merge_patch(ordered_json::parse(opts.grid_overrides));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad --grid-overrides: ") + e.what());
        }
    }
    RunConfig cfg = config_from_json(raw);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.seed) cfg.seed = *opts.seed;
    return cfg;
}

std::string joined(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void print_checks(const ResidualReport& rep) {
    for (const auto& c : rep.checks)
        std::printf("%s %-24s max %.6e  tol %.1e\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.max, c.tol);
    std::printf("residual: max %.6e mean %.6e over %d events (%d skipped), h = %g\n",
                rep.residual.max, rep.residual.mean, rep.residual.events,
                rep.residual.skipped, rep.residual.h);
    for (const auto& f : rep.typo_findings)
        std::printf("finding: published inverse, case %d entry (%d,%d): transcribed "
                    "%.6g vs derived %.6g\n",
                    f.case_number, f.row, f.col, f.transcribed, f.derived);
}

int cmd_solve(const CommonOpts& opts) {
    RunConfig cfg = prepare_config(opts);
    SpacetimeSolution sol = run_solve(cfg);
    int valid = 0;
    for (const auto& r : sol.samples()) valid += r.valid ? 1 : 0;
    std::filesystem::create_directories(cfg.out_dir);
    const std::string csv_path = joined(cfg.out_dir, cfg.csv_name);
    const std::string json_path = joined(cfg.out_dir, cfg.json_name);
    write_text_file(csv_path, solution_to_csv(sol));
    write_text_file(json_path, solution_to_json(sol, cfg.raw).dump(2) + "\n");
    std::printf("branch: %s\n", case_name(sol.case_id()).c_str());
    std::printf("samples: %zu (%d valid), t in [%g, %g]\n", sol.samples().size(), valid,
                sol.grid().t0, sol.grid().t1);
    std::printf("seed: %llu\n", static_cast<unsigned long long>(cfg.seed));
    std::printf("wrote %s\n", csv_path.c_str());
    std::printf("wrote %s\n", json_path.c_str());
    return 0;
}

VerifyGrid clamp_grid_to_table(VerifyGrid grid, const SpacetimeSolution& sol) {
    const double lo = sol.samples().front().t + 2.02 * grid.h;
    const double hi = sol.samples().back().t - 2.02 * grid.h;
    grid.u0.lo = std::max(grid.u0.lo, lo);
    grid.u0.hi = std::min(grid.u0.hi, hi);
    if (!(grid.u0.hi >= grid.u0.lo))
        throw ConfigError("sample table too narrow for the verification grid");
    return grid;
}

int cmd_verify(const CommonOpts& opts) {
    std::optional<RunConfig> cfg;
    std::optional<SpacetimeSolution> sol;
    std::optional<CheckResult> table_consistency;

    if (!opts.config_path.empty()) {
        cfg = prepare_config(opts);
        sol = run_solve(*cfg);
    } else {
        const std::string& path = opts.solution_path;
        if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
            std::istringstream in(read_text_file(path));
            std::vector<SampleRow> rows = samples_from_csv(in);
            std::vector<FieldState> states;
            std::vector<double> times;
            for (const auto& r : rows) {
                states.push_back(r.state);
                times.push_back(r.t);
            }
            const CaseId id = classify_states(states, times, 1e-9);
            sol = SpacetimeSolution::from_samples(id, std::move(rows));
        } else {
            ordered_json j;
            try {
                j = ordered_json::parse(read_text_file(path));
            } catch (const nlohmann::json::exception& e) {
                throw IoError("cannot parse solution '" + path + "': " + e.what());
            }
            ImportedSolution imp = solution_from_json(j);
            if (imp.parameters.is_object() && imp.parameters.contains("schema_version")) {
                RunConfig c2 = config_from_json(imp.parameters);
                if (!opts.out_dir.empty()) c2.out_dir = opts.out_dir;
                if (opts.seed) c2.seed = *opts.seed;
                cfg = c2;
                sol = run_solve(*cfg);
                // The stored table must agree with the re-solved run.
                double worst = 0.0;
                const auto& rows = sol->samples();
                const std::size_t nn = std::min(rows.size(), imp.samples.size());
                for (std::size_t i = 0; i < nn; ++i)
                    for (int kk = 0; kk < Sym3::kPacked; ++kk) {
                        const double a = rows[i].n.packed(kk);
                        const double b = imp.samples[i].n.packed(kk);
                        if (std::isnan(a) || std::isnan(b)) continue;
                        worst = std::max(worst, std::abs(a - b) /
                                                    std::max({1.0, std::abs(a),
                                                              std::abs(b)}));
                    }
                if (rows.size() != imp.samples.size()) worst = 1.0;
                table_consistency =
                    CheckResult{"table_consistency", worst, 1e-9, worst <= 1e-9};
            } else {
                const auto id = case_from_name(imp.case_label);
                if (!id) throw IoError("solution header carries an unknown case label");
                sol = SpacetimeSolution::from_samples(*id, std::move(imp.samples));
            }
        }
    }

    VerifyGrid grid = cfg ? cfg->verify_grid : VerifyGrid{};
    if (!sol->analytic()) grid = clamp_grid_to_table(grid, *sol);
    const std::uint64_t seed = cfg ? cfg->seed : opts.seed.value_or(42);

    ResidualReport rep = residual_report(*sol, grid, seed);
    if (table_consistency) rep.checks.push_back(*table_consistency);

    const std::string out_dir =
        cfg ? cfg->out_dir : (opts.out_dir.empty() ? "." : opts.out_dir);
    std::filesystem::create_directories(out_dir);
    const std::string report_path =
        joined(out_dir, cfg ? cfg->report_name : std::string("report.json"));
    write_text_file(report_path, report_to_json(rep).dump(2) + "\n");

    print_checks(rep);
    std::printf("wrote %s\n", report_path.c_str());
    return rep.all_pass() ? 0 : kExitFailure;
}

int cmd_classify(const CommonOpts& opts) {
    RunConfig cfg = prepare_config(opts);
    const FieldCurve curve = curve_from_config(cfg);
    const CaseId id = resolve_case(cfg, curve);
    std::printf("branch: %s\n", case_name(id).c_str());
    std::printf("free slots:");
    for (NSlot s : free_slots(id)) std::printf(" %s", slot_name(s).c_str());
    std::printf("\n");
    return 0;
}

int cmd_selftest(std::uint64_t seed) {
    const SelftestSummary sum = run_selftest(seed);
    int passed = 0;
    for (const auto& c : sum.checks) {
        std::printf("%s %-24s max %.6e  tol %.1e\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.max, c.tol);
        passed += c.pass ? 1 : 0;
    }
    std::printf("%d/%zu checks passed (seed %llu)\n", passed, sum.checks.size(),
                static_cast<unsigned long long>(seed));
    return sum.all_pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "construct and verify invariant source-free electromagnetic fields on "
        "spatially homogeneous backgrounds"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::uint64_t selftest_seed = 12345;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", opts.config_path,
                                  "run configuration (JSON)");
        if (need_config) c->required();
        sub->add_option("--out-dir", opts.out_dir, "output directory override");
        sub->add_option("--seed", opts.seed, "seed override");
        sub->add_option("--grid-overrides", opts.grid_overrides,
                        "JSON object merged into verify_grid");
    };

    auto* solve = app.add_subcommand("solve", "solve a configuration, export tables");
    add_common(solve, true);

    auto* verify = app.add_subcommand(
        "verify", "residual-verify a configuration or an exported solution");
    add_common(verify, false);
    verify->add_option("--solution", opts.solution_path,
                       "exported solution (.json or .csv)");

    auto* classify_cmd =
        app.add_subcommand("classify", "report the solution branch of a configuration");
    add_common(classify_cmd, true);

    auto* selftest = app.add_subcommand("selftest", "run the fixed-seed invariant suite");
    selftest->add_option("--seed", selftest_seed, "seed (default 12345)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opts);
        if (verify->parsed()) {
            if (opts.config_path.empty() == opts.solution_path.empty())
                throw ConfigError("verify needs exactly one of --config or --solution");
            return cmd_verify(opts);
        }
        if (classify_cmd->parsed()) return cmd_classify(opts);
        if (selftest->parsed()) return cmd_selftest(selftest_seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitConfig;
    } catch (const CasePatternUnstableError& e) {
        std::fprintf(stderr, "classification error: %s\n", e.what());
        return kExitPattern;
    } catch (const NoAdmissibleCaseError& e) {
        std::fprintf(stderr, "classification error: %s\n", e.what());
        return kExitPattern;
    } catch (const InconsistentSystemError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitInconsistent;
    } catch (const DenominatorVanishesError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitInconsistent;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitFailure;
}
