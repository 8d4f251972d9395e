// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Runs at desk scale (well under two minutes).

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "g3ix/config.hpp"
#include "g3ix/io.hpp"
#include "g3ix/verify.hpp"

using namespace g3ix;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass, double value,
            double bound) {
    std::printf("%s  criterion %d: %-52s (value %.3e, bound %.1e)\n",
                pass ? "PASS" : "FAIL", criterion, what.c_str(), value, bound);
    if (!pass) ++g_failures;
}

double next_unit(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double uniform(std::uint64_t& state, double lo, double hi) {
    return lo + (hi - lo) * next_unit(state);
}

// --- criterion 1: annulling identity, computed directly --------------------

void criterion_1() {
    std::uint64_t rng = 1001;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        FieldState s;
        for (int a = 0; a < 3; ++a) {
            s.alpha[a] = uniform(rng, -10, 10);
            s.beta[a] = uniform(rng, -10, 10);
        }
        const Mat v = build_V(s);
        const Mat w = build_W(s);
        const Mat vw = v * w;
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) {
                double termscale = 0.0;
                for (int i = 0; i < 6; ++i)
                    termscale += std::abs(v(r, i)) * std::abs(w(i, c));
                worst = std::max(worst, std::abs(vw(r, c)) / (1.0 + termscale));
            }
    }
    report(1, "annulling identity V W = 0 (1000 states, entrywise scaled)",
           worst <= 1e-12, worst, 1e-12);
}

// --- criterion 2: frame algebra ------------------------------------------------

void criterion_2() {
    const StructureConstants& sc = structure_constants();
    const double frame = max_commutator_residual(1002, 20, false, sc);
    const double kill = max_commutator_residual(1003, 20, true, sc);
    report(2, "frame commutators close on the structure constants",
           std::max(frame, kill) <= 1e-7, std::max(frame, kill), 1e-7);
    const double dual = max_duality_residual(1004, 100);
    report(2, "frame duality at 100 random chart points", dual <= 1e-14, dual, 1e-14);
}

// --- criterion 3: Killing residual ---------------------------------------------

void criterion_3() {
    const double worst = max_killing_residual(1005, 10, 5);
    report(3, "Killing residual, 10 random positive-definite families",
           worst <= 1e-6, worst, 1e-6);
}

// --- criterion 4: rho -----------------------------------------------------------

void criterion_4() {
    const double worst = max_rho_residual(1006, 100);
    report(4, "rho vanishes at 100 random chart points", worst <= 1e-12, worst, 1e-12);
}

// --- criterion 5: branch solvers against the rank-revealing oracle --------------

void criterion_5() {
    const CaseId cases[6] = {CaseId::Case1, CaseId::Case2,  CaseId::Case3,
                             CaseId::Case4, CaseId::Case5a, CaseId::Case5b};
    for (int i = 0; i < 6; ++i) {
        std::uint64_t rng = 2000 + i;
        double worst_diff = 0.0, worst_resid = 0.0;
        const auto slots = free_slots(cases[i]);
        for (int k = 0; k < 1000; ++k) {
            const FieldState s = random_admissible_state(cases[i], rng);
            std::vector<double> fv;
            for (std::size_t q = 0; q < slots.size(); ++q)
                fv.push_back(uniform(rng, -2, 2));
            const Sym3 n1 = solve_case(cases[i], s, fv);
            const Sym3 n2 = generic_solve(s, slots, fv);
            double scale = 1.0;
            for (int p = 0; p < Sym3::kPacked; ++p)
                scale = std::max({scale, std::abs(n1.packed(p)), std::abs(n2.packed(p))});
            for (int p = 0; p < Sym3::kPacked; ++p)
                worst_diff = std::max(
                    worst_diff, std::abs(n1.packed(p) - n2.packed(p)) / scale);

            Vec nhat(6);
            for (int p = 0; p < Sym3::kPacked; ++p) nhat[p] = n1.packed(p);
            const Mat w = build_W(s);
            const Vec om = build_omega(s);
            const double rscale =
                std::max({1.0, om.norm_inf(), w.max_abs() * nhat.norm_inf()});
            worst_resid =
                std::max(worst_resid, (w * nhat - om).norm_inf() / rscale);
        }
        const bool pass = worst_diff <= 1e-9 && worst_resid <= 1e-10;
        report(5,
               "branch " + case_name(cases[i]) +
                   " solver vs oracle, 1000 admissible states",
               pass, std::max(worst_diff, worst_resid * 10), 1e-9);
    }
}

// --- criteria 6 and 7: end-to-end residual and conservation ---------------------

double grid_max_residual(const SpacetimeSolution& sol, const VerifyGrid& grid) {
    double worst = 0.0;
    for (double t : grid.u0.points())
        for (double u1 : grid.u1.points())
            for (double u2 : grid.u2.points())
                for (double u3 : grid.u3.points()) {
                    const auto r =
                        maxwell_residual(sol, Event{t, SpacePoint{u1, u2, u3}}, grid.h);
                    for (double x : r) worst = std::max(worst, std::abs(x));
                }
    return worst;
}

void criteria_6_and_7() {
    const char* configs[6] = {"case1_rotating.json",  "case2_rotating.json",
                              "case3_crossed.json",   "case4_planar.json",
                              "case5a_parallel.json", "case5b_round.json"};
    const VerifyGrid grid;  // defaults: 5^4 events, h = 1e-3
    for (const char* name : configs) {
        const RunConfig cfg =
            load_config(std::string(G3IX_CONFIG_DIR) + "/" + name);
        const SpacetimeSolution sol = run_solve(cfg);
        const double worst = grid_max_residual(sol, grid);
        const bool is_round = std::string(name) == "case5b_round.json";
        const double bound = is_round ? 1e-8 : 1e-6;
        report(6,
               "field-equation residual, branch " + case_name(sol.case_id()) + " (" +
                   name + ")",
               worst <= bound, worst, bound);

        double drift = 0.0;
        const double c0 = sol.samples().front().c2;
        for (const auto& r : sol.samples())
            drift = std::max(drift, std::abs(r.c2 - c0) / (1.0 + c0));
        report(7, "conservation along the accepted run (" + std::string(name) + ")",
               drift <= 1e-8, drift, 1e-8);
    }

    // the documented rejection of a conservation-violating input
    bool rejected = false;
    std::string message;
    try {
        auto E = [](const char* s) { return Expr::parse(s); };
        FieldCurve bad = FieldCurve::from_expressions(
            {E("sin(t)"), E("0.2*t"), E("0")}, {E("cos(t)"), E("0.1"), E("1")});
        FreeFunctions free;
        free.entries = {{NSlot::n11, E("0.5")}};
        (void)SpacetimeSolution::assemble(CaseId::Case1, bad, free, TimeGrid{0.1, 1.3, 25});
    } catch (const InconsistentSystemError& e) {
        rejected = true;
        message = e.what();
    }
    const bool named = message.find("conservation") != std::string::npos;
    report(7, "violating input rejected with the documented error",
           rejected && named, rejected && named ? 0.0 : 1.0, 0.5);
}

// --- criterion 8: convergence under h-halving ------------------------------------

void criterion_8() {
    FieldCurve curve = FieldCurve::parallel_third_axis(1.0, Expr::parse("t+0.2*t^2"));
    FreeFunctions free;
    free.entries = {{NSlot::n11, Expr::parse("1")},
                    {NSlot::n12, Expr::parse("0")},
                    {NSlot::n22, Expr::parse("1")}};
    const SpacetimeSolution sol =
        SpacetimeSolution::assemble(CaseId::Case5b, curve, free, TimeGrid{0.1, 1.3, 25});
    std::uint64_t rng = 3000;
    double worst_ratio = 1e30;
    for (int k = 0; k < 5; ++k) {
        const Event ev{uniform(rng, 0.3, 1.1),
                       SpacePoint{uniform(rng, 0.5, 2.6), uniform(rng, 0.3, 6.0),
                                  uniform(rng, 0.3, 6.0)}};
        double big = 0.0, small = 0.0;
        for (double x : maxwell_residual(sol, ev, 0.04)) big = std::max(big, std::abs(x));
        for (double x : maxwell_residual(sol, ev, 0.02))
            small = std::max(small, std::abs(x));
        worst_ratio = std::min(worst_ratio, big / small);
    }
    report(8, "halving h cuts the truncation residual by at least 8x",
           worst_ratio >= 8.0, worst_ratio, 8.0);
}

// --- criterion 9: transcription audit ---------------------------------------------

void criterion_9() {
    const auto findings = audit_transcribed_inverses(4001, 40);
    bool has_case3 = false;
    for (const auto& f : findings)
        if (f.case_number == 3 && f.row == 1 && f.col == 2) has_case3 = true;
    const bool pass = has_case3 && audit_matches_known_defects(findings);
    report(9, "audit reports the known misprint set incl. case 3 (1,2)", pass,
           pass ? 0.0 : 1.0, 0.5);
    for (const auto& f : findings)
        std::printf("        finding: case %d entry (%d,%d), transcribed %.6g vs "
                    "derived %.6g\n",
                    f.case_number, f.row, f.col, f.transcribed, f.derived);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criteria_6_and_7();
    criterion_8();
    criterion_9();
    if (g_failures) {
        std::printf("%d criterion check(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
