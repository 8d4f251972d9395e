#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "g3ix/config.hpp"
#include "g3ix/io.hpp"

using namespace g3ix;
using ordered_json = nlohmann::ordered_json;

namespace {

namespace fs = std::filesystem;

ordered_json minimal_config() {
    return ordered_json{
        {"schema_version", 1},
        {"input", {{"phi", "t"}, {"c", 1.0}}},
        {"free", {{"n11", "1"}, {"n12", "0"}, {"n22", "1"}}},
        {"time_grid", {{"t0", 0.1}, {"t1", 1.3}, {"steps", 25}}},
        {"seed", 7}};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("g3ix_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter() {
        static int n = 0;
        return n++;
    }
    std::string file(const std::string& name, const std::string& content) const {
        const std::string p = (path / name).string();
        write_text_file(p, content);
        return p;
    }
};

int run_cli(const std::string& args, std::string* output = nullptr) {
    const TempDir tmp;
    const std::string log = (tmp.path / "out.txt").string();
    const std::string cmd = std::string(G3IX_CLI_PATH) + " " + args + " >" + log + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (output) *output = read_text_file(log);
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("configuration validation") {
    SUBCASE("round trip of a valid document") {
        const RunConfig cfg = config_from_json(minimal_config());
        CHECK(cfg.c.has_value());
        CHECK(cfg.seed == 7);
        CHECK(cfg.time_grid.steps == 25);
        const SpacetimeSolution sol = run_solve(cfg);
        CHECK(sol.case_id() == CaseId::Case5b);
    }
    SUBCASE("schema version is mandatory") {
        auto j = minimal_config();
        j.erase("schema_version");
        CHECK_THROWS_AS((void)config_from_json(j), ConfigError);
        j["schema_version"] = 2;
        CHECK_THROWS_AS((void)config_from_json(j), ConfigError);
    }
    SUBCASE("exactly one input style") {
        auto j = minimal_config();
        j["input"]["alpha"] = {"0", "0", "sin(t)"};
        j["input"]["beta"] = {"0", "0", "cos(t)"};
        CHECK_THROWS_AS((void)config_from_json(j), ConfigError);
        j["input"].erase("phi");
        j["input"].erase("c");
        CHECK_NOTHROW((void)config_from_json(j));
    }
    SUBCASE("unknown case and slot names") {
        auto j = minimal_config();
        j["case"] = "7";
        CHECK_THROWS_AS((void)config_from_json(j), ConfigError);
        j = minimal_config();
        j["free"]["n99"] = "0";
        CHECK_THROWS_AS((void)config_from_json(j), ConfigError);
    }
    SUBCASE("verification grid must fit the time hull and the chart") {
        auto j = minimal_config();
        j["verify_grid"] = {{"u0", {0.0, 1.2, 5}}};
        CHECK_THROWS_AS((void)config_from_json(j), ConfigError);
        j = minimal_config();
        j["verify_grid"] = {{"u1", {0.0, 2.0, 5}}};
        CHECK_THROWS_AS((void)config_from_json(j), ConfigError);
    }
    SUBCASE("missing free slot is named") {
        auto j = minimal_config();
        j["free"].erase("n12");
        const RunConfig cfg = config_from_json(j);
        try {
            (void)run_solve(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("n12") != std::string::npos);
        }
    }
    SUBCASE("extraneous free slot is rejected") {
        auto j = minimal_config();
        j["free"]["n33"] = "1";
        const RunConfig cfg = config_from_json(j);
        CHECK_THROWS_AS((void)run_solve(cfg), ConfigError);
    }
    SUBCASE("forced case must match the classified branch") {
        auto j = minimal_config();
        j["case"] = "1";
        const RunConfig cfg = config_from_json(j);
        CHECK_THROWS_AS((void)run_solve(cfg), ConfigError);
    }
    SUBCASE("bad expression is reported with its field") {
        auto j = minimal_config();
        j["free"]["n11"] = "1+*2";
        const RunConfig cfg = config_from_json(j);
        try {
            (void)run_solve(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("n11") != std::string::npos);
        }
    }
    SUBCASE("unbound parameter is a configuration error") {
        auto j = minimal_config();
        j["free"]["n11"] = "missing_constant";
        const RunConfig cfg = config_from_json(j);
        try {
            (void)run_solve(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("missing_constant") != std::string::npos);
        }
    }
}

TEST_CASE("cli: solve and verify the bundled closed-form run") {
    const TempDir tmp;
    std::string out;
    const std::string cfg = std::string(G3IX_CONFIG_DIR) + "/case5b_round.json";
    CHECK(run_cli("solve --config " + cfg + " --out-dir " + tmp.path.string(), &out) == 0);
    CHECK(out.find("branch: 5b") != std::string::npos);

    // every row of the exported table carries unit coefficients
    std::istringstream csv(read_text_file((tmp.path / "solution.csv").string()));
    const auto rows = samples_from_csv(csv);
    CHECK(rows.size() == 25);
    for (const auto& r : rows) {
        CHECK(r.valid);
        CHECK(r.eta == doctest::Approx(1.0));
        for (int k = 0; k < Sym3::kPacked; ++k)
            CHECK(r.eta_ab.packed(k) == doctest::Approx(Sym3::identity().packed(k)));
    }

    CHECK(run_cli("verify --config " + cfg + " --out-dir " + tmp.path.string(), &out) == 0);
    CHECK(out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(tmp.path / "report.json"));

    // verifying the exported table (both formats) also passes
    CHECK(run_cli("verify --solution " + (tmp.path / "solution.json").string() +
                      " --out-dir " + tmp.path.string(),
                  &out) == 0);
    CHECK(out.find("table_consistency") != std::string::npos);
    CHECK(run_cli("verify --solution " + (tmp.path / "solution.csv").string() +
                      " --out-dir " + tmp.path.string(),
                  &out) == 0);
}

TEST_CASE("cli: exit codes") {
    const TempDir tmp;
    std::string out;

    SUBCASE("missing free slot exits 2 and names it") {
        auto j = minimal_config();
        j["free"].erase("n22");
        const std::string p = tmp.file("bad1.json", j.dump(2));
        CHECK(run_cli("solve --config " + p + " --out-dir " + tmp.path.string(), &out) == 2);
        CHECK(out.find("n22") != std::string::npos);
    }
    SUBCASE("unparseable configuration exits 2") {
        const std::string p = tmp.file("bad2.json", "{not json");
        CHECK(run_cli("solve --config " + p, &out) == 2);
    }
    SUBCASE("unstable pattern exits 3") {
        ordered_json j{
            {"schema_version", 1},
            {"input",
             {{"alpha", {"t-0.7", "1", "0"}}, {"beta", {"0", "0", "1"}}}},
            {"free", {{"n11", "1"}}},
            {"time_grid", {{"t0", 0.1}, {"t1", 1.3}, {"steps", 25}}}};
        const std::string p = tmp.file("bad3.json", j.dump(2));
        CHECK(run_cli("solve --config " + p + " --out-dir " + tmp.path.string(), &out) == 3);
    }
    SUBCASE("conservation violation exits 4 citing the drift") {
        ordered_json j{
            {"schema_version", 1},
            {"input",
             {{"alpha", {"sin(t)", "0.2*t", "0"}}, {"beta", {"cos(t)", "0.1", "1"}}}},
            {"free", {{"n11", "1"}}},
            {"time_grid", {{"t0", 0.1}, {"t1", 1.3}, {"steps", 25}}}};
        const std::string p = tmp.file("bad4.json", j.dump(2));
        CHECK(run_cli("solve --config " + p + " --out-dir " + tmp.path.string(), &out) == 4);
        CHECK(out.find("conservation") != std::string::npos);
    }
    SUBCASE("verify of a tampered structured export exits 1") {
        const std::string cfg = std::string(G3IX_CONFIG_DIR) + "/case5b_round.json";
        REQUIRE(run_cli("solve --config " + cfg + " --out-dir " + tmp.path.string(),
                        &out) == 0);
        auto j = ordered_json::parse(
            read_text_file((tmp.path / "solution.json").string()));
        j["samples"][4]["n33"] = j["samples"][4]["n33"].get<double>() + 0.05;
        const std::string p = tmp.file("tampered.json", j.dump(2));
        CHECK(run_cli("verify --solution " + p + " --out-dir " + tmp.path.string(),
                      &out) == 1);
        CHECK(out.find("FAIL table_consistency") != std::string::npos);
    }
    SUBCASE("verify of a perturbed table exits 1") {
        const std::string cfg = std::string(G3IX_CONFIG_DIR) + "/case5b_round.json";
        REQUIRE(run_cli("solve --config " + cfg + " --out-dir " + tmp.path.string(),
                        &out) == 0);
        // bump n33 in every data row of the table
        std::istringstream csv(read_text_file((tmp.path / "solution.csv").string()));
        auto rows = samples_from_csv(csv);
        for (auto& r : rows) {
            r.n.at(2, 2) += 0.1;
            const EtaPair ep = eta_from_n(r.n);
            r.eta = ep.eta;
            r.eta_ab = ep.eta_ab;
        }
        const SpacetimeSolution bad =
            SpacetimeSolution::from_samples(CaseId::Case5b, std::move(rows));
        const std::string p = tmp.file("perturbed.csv", solution_to_csv(bad));
        CHECK(run_cli("verify --solution " + p + " --out-dir " + tmp.path.string(),
                      &out) == 1);
        CHECK(out.find("FAIL maxwell_residual") != std::string::npos);
    }
}

TEST_CASE("cli: classify, selftest, determinism") {
    const TempDir tmp;
    std::string out;

    const std::string cfg1 = std::string(G3IX_CONFIG_DIR) + "/case1_rotating.json";
    CHECK(run_cli("classify --config " + cfg1, &out) == 0);
    CHECK(out.find("branch: 1") != std::string::npos);
    CHECK(out.find("n11") != std::string::npos);

    CHECK(run_cli("selftest", &out) == 0);
    CHECK(out.find("14/14 checks passed") != std::string::npos);

    // same seed, same bytes
    const std::string cfg = std::string(G3IX_CONFIG_DIR) + "/case5b_round.json";
    const fs::path d1 = tmp.path / "a", d2 = tmp.path / "b";
    REQUIRE(run_cli("verify --config " + cfg + " --out-dir " + d1.string(), &out) == 0);
    REQUIRE(run_cli("verify --config " + cfg + " --out-dir " + d2.string(), &out) == 0);
    CHECK(read_text_file((d1 / "report.json").string()) ==
          read_text_file((d2 / "report.json").string()));

    // grid overrides are honored
    CHECK(run_cli("verify --config " + cfg + " --out-dir " + tmp.path.string() +
                      " --grid-overrides '{\"u0\":[0.3,1.1,3],\"h\":5e-4}'",
                  &out) == 0);
    CHECK(out.find("h = 0.0005") != std::string::npos);
}
