#include "g3ix/config.hpp"

#include <cmath>
#include <sstream>

namespace g3ix {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

AxisSpec axis_from_json(const ordered_json& j, const char* name) {
    if (!j.is_array() || j.size() != 3)
        bad(std::string("verify_grid.") + name + " must be [lo, hi, n]");
    AxisSpec ax;
    ax.lo = j[0].get<double>();
    ax.hi = j[1].get<double>();
    ax.n = j[2].get<int>();
    if (ax.n < 1) bad(std::string("verify_grid.") + name + ": n must be >= 1");
    if (!(ax.hi >= ax.lo)) bad(std::string("verify_grid.") + name + ": hi < lo");
    return ax;
}

Expr parse_field(const std::string& src, const std::string& field) {
    try {
        return Expr::parse(src);
    } catch (const SyntaxError& e) {
        bad("cannot parse " + field + " = '" + src + "': " + e.what());
    }
}

}  // namespace

RunConfig config_from_json(const ordered_json& j) {
    RunConfig cfg;
    cfg.raw = j;
    if (!j.is_object()) bad("configuration must be a JSON object");

    if (j.value("schema_version", -1) != 1)
        bad("schema_version must be present and equal to 1");

    if (j.contains("case")) {
        const auto name = j.at("case").get<std::string>();
        const auto id = case_from_name(name);
        if (!id) bad("unknown case '" + name + "' (expected 1, 2, 3, 4, 5a or 5b)");
        cfg.forced_case = *id;
    }

    if (!j.contains("input") || !j.at("input").is_object())
        bad("missing 'input' object");
    const auto& in = j.at("input");
    if (in.contains("alpha") || in.contains("beta")) {
        if (!in.contains("alpha") || !in.contains("beta"))
            bad("input must provide both alpha and beta expression triples");
        const auto& a = in.at("alpha");
        const auto& b = in.at("beta");
        if (!a.is_array() || a.size() != 3 || !b.is_array() || b.size() != 3)
            bad("input.alpha and input.beta must be arrays of 3 expressions");
        for (int i = 0; i < 3; ++i) {
            cfg.alpha_src[i] = a[i].get<std::string>();
            cfg.beta_src[i] = b[i].get<std::string>();
        }
        cfg.has_expressions = true;
    }
    if (in.contains("phi")) {
        cfg.phi_src = in.at("phi").get<std::string>();
        cfg.has_phi = true;
        if (in.contains("c")) cfg.c = in.at("c").get<double>();
        cfg.e = in.value("e", 1.0);
        cfg.c2 = in.value("c2", 0.0);
        cfg.c3 = in.value("c3", 0.0);
        if (cfg.c && (in.contains("e") || in.contains("c2") || in.contains("c3")))
            bad("input: give either c (third-axis form) or e/c2/c3 (general form)");
    }
    if (cfg.has_expressions == cfg.has_phi)
        bad("input must provide exactly one of: alpha/beta expressions, or phi");

    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items())
            cfg.params[k] = v.get<double>();

    if (j.contains("free"))
        for (const auto& [k, v] : j.at("free").items()) {
            if (!slot_from_name(k)) bad("free: unknown slot '" + k + "'");
            cfg.free_src[k] = v.get<std::string>();
        }

    if (j.contains("time_grid")) {
        const auto& tg = j.at("time_grid");
        cfg.time_grid.t0 = tg.value("t0", cfg.time_grid.t0);
        cfg.time_grid.t1 = tg.value("t1", cfg.time_grid.t1);
        cfg.time_grid.steps = tg.value("steps", cfg.time_grid.steps);
    }
    if (cfg.time_grid.steps < 2) bad("time_grid.steps must be >= 2");
    if (!(cfg.time_grid.t1 > cfg.time_grid.t0)) bad("time_grid: t1 must exceed t0");

    if (j.contains("verify_grid")) {
        const auto& vg = j.at("verify_grid");
        if (vg.contains("u0")) cfg.verify_grid.u0 = axis_from_json(vg.at("u0"), "u0");
        if (vg.contains("u1")) cfg.verify_grid.u1 = axis_from_json(vg.at("u1"), "u1");
        if (vg.contains("u2")) cfg.verify_grid.u2 = axis_from_json(vg.at("u2"), "u2");
        if (vg.contains("u3")) cfg.verify_grid.u3 = axis_from_json(vg.at("u3"), "u3");
        cfg.verify_grid.h = vg.value("h", cfg.verify_grid.h);
        if (!(cfg.verify_grid.h > 0.0)) bad("verify_grid.h must be positive");
    }

    if (j.contains("tolerances")) {
        cfg.classify_tol = j.at("tolerances").value("classify", cfg.classify_tol);
        if (!(cfg.classify_tol > 0.0)) bad("tolerances.classify must be positive");
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        cfg.csv_name = o.value("csv", cfg.csv_name);
        cfg.json_name = o.value("json", cfg.json_name);
        cfg.report_name = o.value("report", cfg.report_name);
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.seed = j.value("seed", cfg.seed);

    // The verification stencil must stay inside the solved time hull and the
    // chart margins.
    const double h = cfg.verify_grid.h;
    if (cfg.verify_grid.u0.lo - 2 * h < cfg.time_grid.t0 - 1e-12 ||
        cfg.verify_grid.u0.hi + 2 * h > cfg.time_grid.t1 + 1e-12)
        bad("verify_grid.u0 plus the stencil width must lie inside the time grid");
    if (cfg.verify_grid.u1.lo - 2 * h <= kChartEps ||
        cfg.verify_grid.u1.hi + 2 * h >= 3.14159265358979323846 - kChartEps)
        bad("verify_grid.u1 plus the stencil width must stay inside (0, pi)");

    return cfg;
}

RunConfig load_config(const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        bad("cannot parse configuration '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

namespace {

// Surface unbound parameters and domain faults as configuration errors by
// probing the expression once at the start of the window.
void probe_field(const Expr& e, const ParamMap& params, double t0,
                 const std::string& field) {
    try {
        (void)e.eval_dual(t0, params);
    } catch (const UnboundParameterError& err) {
        bad("cannot evaluate " + field + ": " + err.what());
    } catch (const DomainError& err) {
        bad("cannot evaluate " + field + " at t0: " + err.what());
    }
}

}  // namespace

FieldCurve curve_from_config(const RunConfig& cfg) {
    const double t0 = cfg.time_grid.t0;
    if (cfg.has_expressions) {
        std::array<Expr, 3> alpha, beta;
        for (int i = 0; i < 3; ++i) {
            alpha[i] = parse_field(cfg.alpha_src[i], "input.alpha[" + std::to_string(i) + "]");
            beta[i] = parse_field(cfg.beta_src[i], "input.beta[" + std::to_string(i) + "]");
            probe_field(alpha[i], cfg.params, t0, "input.alpha[" + std::to_string(i) + "]");
            probe_field(beta[i], cfg.params, t0, "input.beta[" + std::to_string(i) + "]");
        }
        return FieldCurve::from_expressions(alpha, beta, cfg.params);
    }
    const Expr phi = parse_field(cfg.phi_src, "input.phi");
    probe_field(phi, cfg.params, t0, "input.phi");
    if (cfg.c) return FieldCurve::parallel_third_axis(*cfg.c, phi, cfg.params);
    return FieldCurve::parallel_general(cfg.e, cfg.c2, cfg.c3, phi, cfg.params);
}

CaseId resolve_case(const RunConfig& cfg, const FieldCurve& curve) {
    const auto times = grid_times(cfg.time_grid);
    const CaseId found = classify(curve, times, cfg.classify_tol);
    if (cfg.forced_case && *cfg.forced_case != found)
        bad("configured case " + case_name(*cfg.forced_case) +
            " does not match the classified branch " + case_name(found));
    return found;
}

FreeFunctions free_functions_from_config(const RunConfig& cfg, CaseId id) {
    FreeFunctions out;
    out.params = cfg.params;
    for (NSlot slot : free_slots(id)) {
        const std::string name = slot_name(slot);
        auto it = cfg.free_src.find(name);
        if (it == cfg.free_src.end())
            bad("branch " + case_name(id) + " requires a free function for slot '" +
                name + "'");
        Expr e = parse_field(it->second, "free." + name);
        probe_field(e, cfg.params, cfg.time_grid.t0, "free." + name);
        out.entries.emplace_back(slot, std::move(e));
    }
    if (cfg.free_src.size() != out.entries.size())
        for (const auto& [name, src] : cfg.free_src) {
            bool needed = false;
            for (NSlot slot : free_slots(id))
                if (name == slot_name(slot)) needed = true;
            if (!needed)
                bad("slot '" + name + "' is not free in branch " + case_name(id));
        }
    return out;
}

SpacetimeSolution run_solve(const RunConfig& cfg) {
    const FieldCurve curve = curve_from_config(cfg);
    const CaseId id = resolve_case(cfg, curve);
    const FreeFunctions free = free_functions_from_config(cfg, id);
    return SpacetimeSolution::assemble(id, curve, free, cfg.time_grid);
}

nlohmann::ordered_json report_to_json(const ResidualReport& rep) {
    ordered_json j;
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks)
        checks.push_back(
            {{"name", c.name}, {"max", c.max}, {"tol", c.tol}, {"pass", c.pass}});
    j["checks"] = std::move(checks);
    j["residual"] = {{"max", rep.residual.max},
                     {"mean", rep.residual.mean},
                     {"max_time_component", rep.residual.max_time_component},
                     {"events", rep.residual.events},
                     {"skipped", rep.residual.skipped},
                     {"grid",
                      {{"u0", {rep.grid.u0.lo, rep.grid.u0.hi, rep.grid.u0.n}},
                       {"u1", {rep.grid.u1.lo, rep.grid.u1.hi, rep.grid.u1.n}},
                       {"u2", {rep.grid.u2.lo, rep.grid.u2.hi, rep.grid.u2.n}},
                       {"u3", {rep.grid.u3.lo, rep.grid.u3.hi, rep.grid.u3.n}}}},
                     {"h", rep.residual.h},
                     {"tol", rep.residual_tol}};
    ordered_json findings = ordered_json::array();
    for (const auto& f : rep.typo_findings)
        findings.push_back({{"case", std::to_string(f.case_number)},
                            {"row", f.row},
                            {"col", f.col},
                            {"transcribed", f.transcribed},
                            {"derived", f.derived},
                            {"rel_diff", f.rel_diff}});
    j["typo_findings"] = std::move(findings);
    j["seed"] = rep.seed;
    return j;
}

}  // namespace g3ix
