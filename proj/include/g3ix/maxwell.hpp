#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "g3ix/frame.hpp"
#include "g3ix/smallmat.hpp"
#include "g3ix/timefunc.hpp"
#include "g3ix/types.hpp"

namespace g3ix {

/// Residual bound for a solved sample: |W n - omega| <= kSolveResidTol * scale.
inline constexpr double kSolveResidTol = 1e-10;

/// Conservation rate bound per sample: |d/dt sum(alpha^2 + beta^2)| must not
/// exceed kConstraintRateTol * (1 + c^2).
inline constexpr double kConstraintRateTol = 1e-8;

/// Amplitudes of the invariant potential and their reduced first-order
/// companions, with time derivatives, at one instant.
struct FieldState {
    GroupVec alpha{}, beta{}, alpha_dot{}, beta_dot{};
};

/// sigma_a = C^a-contraction of alpha (identity map for this group),
/// gamma = eta . sigma.
struct ReducedSources {
    GroupVec sigma{}, gamma{};
};

enum class CaseId { Case1, Case2, Case3, Case4, Case5a, Case5b };

std::string case_name(CaseId id);  // "1".."4", "5a", "5b"
std::optional<CaseId> case_from_name(std::string_view name);

/// Packed index into (n11, n12, n13, n22, n23, n33); matches the column
/// order of the reduced system.
enum class NSlot : int { n11 = 0, n12, n13, n22, n23, n33 };

std::string slot_name(NSlot s);
std::optional<NSlot> slot_from_name(std::string_view name);

/// The free entries of n_ab that each case leaves undetermined.
std::span<const NSlot> free_slots(CaseId id);

// ---- time dependence --------------------------------------------------------

/// Analytic time-dependence of (alpha, beta) on a u0 interval. Either backed
/// by six expressions or by one of the two parallel-field parametrizations.
class FieldCurve {
public:
    static FieldCurve from_expressions(std::array<Expr, 3> alpha,
                                       std::array<Expr, 3> beta,
                                       ParamMap params = {});
    /// alpha = e (1, c2, c3) sin(phi), beta = e (1, c2, c3) cos(phi).
    static FieldCurve parallel_general(double e, double c2, double c3, Expr phi,
                                       ParamMap params = {});
    /// alpha = (0, 0, c sin(phi)), beta = (0, 0, c cos(phi)).
    static FieldCurve parallel_third_axis(double c, Expr phi, ParamMap params = {});

    FieldState state(double t) const;

private:
    struct ExprForm {
        std::array<Expr, 3> alpha, beta;
        ParamMap params;
    };
    struct ParallelGeneral {
        double e, c2, c3;
        Expr phi;
        ParamMap params;
    };
    struct ParallelThird {
        double c;
        Expr phi;
        ParamMap params;
    };
    std::variant<ExprForm, ParallelGeneral, ParallelThird> impl_;

    explicit FieldCurve(std::variant<ExprForm, ParallelGeneral, ParallelThird> impl)
        : impl_(std::move(impl)) {}
};

// ---- reduced system ----------------------------------------------------------

/// sigma_a from the structure-constant contraction, gamma = eta . sigma.
ReducedSources reduced_sources(const GroupVec& alpha, const Sym3& eta);

/// The 6x6 coefficient matrix of the reduced system W n = omega,
/// unknowns ordered (n11, n12, n13, n22, n23, n33).
Mat build_W(const FieldState& s);

/// Right-hand side (-db1, da1, -db2, da2, -db3, da3).
Vec build_omega(const FieldState& s);

/// V_a = (alpha x beta)_a; the row scale of the annulling matrix.
GroupVec cross_V(const FieldState& s);

/// Rank-one annulling matrix: V W = 0 identically in (alpha, beta).
Mat build_V(const FieldState& s);

/// c^2 = sum_a (alpha_a^2 + beta_a^2).
double constraint_c2(const FieldState& s);

/// d(c^2)/dt = 2 sum_a (alpha_a alpha_dot_a + beta_a beta_dot_a).
double constraint_drift(const FieldState& s);

/// Grid-global classification into one of the six solution branches.
/// A quantity counts as nonzero when it exceeds tol (scaled by the sample
/// magnitudes) at every grid time; as zero when it never does. Throws
/// CasePatternUnstableError when the pattern changes across the grid and
/// NoAdmissibleCaseError when alpha vanishes or nothing matches.
CaseId classify(const FieldCurve& curve, std::span<const double> times, double tol);

/// Classification from already-sampled states (used for imported tables).
CaseId classify_states(std::span<const FieldState> states,
                       std::span<const double> times, double tol);

/// Solve the reduced system for one sample along the branch `id`, with the
/// case's free entries pinned to `free_values` (aligned with free_slots(id)).
/// Throws DenominatorVanishesError and InconsistentSystemError.
Sym3 solve_case(CaseId id, const FieldState& s, std::span<const double> free_values);

/// First-principles solver: rank-revealing elimination of the full 6x6
/// system with the given slots pinned. Validates every transcribed branch
/// solution. Throws SlotsNotFreeError and InconsistentSystemError.
Sym3 generic_solve(const FieldState& s, std::span<const NSlot> pinned,
                   std::span<const double> values);

/// State of the general parallel-field parametrization at time t.
FieldState case5a_parametrize(double e, double c2, double c3, const Expr& phi, double t);

// ---- transcribed closed-form inverses and their audit ------------------------

/// The 5x5 minor of W that the branch solution inverts (cases 1-4).
Mat case_minor(CaseId id, const FieldState& s);

/// The branch right-hand side with the pinned entry moved across (cases 1-4).
Vec case_rhs(CaseId id, const FieldState& s, double free_value);

/// The unknown slots, in order, of the 5x5 branch system (cases 1-4).
std::array<NSlot, 5> case_unknowns(CaseId id);

/// The published closed-form inverse of case_minor, transcribed verbatim,
/// evaluated at the given state with the supplied V vector (cases 1-4).
Mat transcribed_inverse(CaseId id, const FieldState& s, const GroupVec& v);

/// One divergent entry between the transcribed inverse and the numerically
/// inverted minor. Indices are 1-based to match the printed matrices.
struct OmegaFinding {
    int case_number;  // 1..4
    int row, col;     // 1-based
    double transcribed, derived;
    double rel_diff;
};

/// Compare transcribed_inverse against invert(case_minor) on seeded random
/// admissible states. `swap_cross` feeds beta x alpha instead of
/// alpha x beta into the transcribed formulas (a deliberate fault hook).
std::vector<OmegaFinding> audit_transcribed_inverses(std::uint64_t seed,
                                                     int states_per_case,
                                                     bool swap_cross = false);

/// Entries known to be misprinted in the published closed forms,
/// as {case, row, col}, 1-based.
std::span<const std::array<int, 3>> known_transcription_defects();

/// Audit passes when the divergent set is exactly the known defect list.
bool audit_matches_known_defects(const std::vector<OmegaFinding>& findings);

/// Seeded random admissible state following the branch pattern, with the
/// conservation rate identically zero. Components stay in [-10, 10] with the
/// branch denominators bounded away from zero.
FieldState random_admissible_state(CaseId id, std::uint64_t& rng_state);

}  // namespace g3ix
