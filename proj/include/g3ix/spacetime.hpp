#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "g3ix/maxwell.hpp"

namespace g3ix {

/// Samples with |det n| at or below this are flagged invalid.
inline constexpr double kDegenerateNTol = 1e-12;

/// Spacetime event: time u0 plus a point on the hypersurface.
struct Event {
    double u0 = 0.0;
    SpacePoint p;
};

struct EtaPair {
    double eta;   // 1 / det n
    Sym3 eta_ab;  // eta * n_ab
};

/// Invert the scaled-unknown relation: eta = 1/det n, eta_ab = eta n_ab.
/// Throws DegenerateNError when |det n| <= kDegenerateNTol.
EtaPair eta_from_n(const Sym3& n);

/// One time sample of a constructed solution. eta and eta_ab are NaN-filled
/// when the sample is degenerate; `valid` additionally requires eta_ab to be
/// positive definite.
struct SampleRow {
    double t = 0.0;
    FieldState state;
    Sym3 n;
    double eta = 0.0;
    Sym3 eta_ab;
    double c2 = 0.0;
    bool valid = false;
};

struct TimeGrid {
    double t0 = 0.1, t1 = 1.3;
    int steps = 25;
};

std::vector<double> grid_times(const TimeGrid& g);

/// Time dependence of the free n_ab entries of one run, aligned with
/// free_slots(case).
struct FreeFunctions {
    std::vector<std::pair<NSlot, Expr>> entries;
    ParamMap params;

    std::vector<double> values_at(double t) const;
};

/// A fully constructed solution: branch id, sampled table, and pointwise
/// evaluators. Expression-backed solutions evaluate analytically at any time
/// inside the grid hull; imported tables interpolate (cubic Hermite for
/// alpha/beta, linear for n).
class SpacetimeSolution {
public:
    /// Solve the reduced system on the grid and assemble the table.
    /// Throws the solver errors plus InconsistentSystemError when
    /// c^2 drifts across the window beyond kConstraintRateTol * (1 + c^2).
    static SpacetimeSolution assemble(CaseId id, FieldCurve curve, FreeFunctions free,
                                      const TimeGrid& grid);

    /// Wrap an imported sample table.
    static SpacetimeSolution from_samples(CaseId id, std::vector<SampleRow> rows);

    CaseId case_id() const { return case_; }
    const std::vector<SampleRow>& samples() const { return samples_; }
    bool analytic() const { return curve_.has_value(); }
    const TimeGrid& grid() const { return grid_; }

    /// Field state at any time in the grid hull.
    FieldState state_at(double u0) const;
    /// Scaled unknowns at any time in the grid hull.
    Sym3 n_at(double u0) const;
    /// eta and eta_ab at u0; throws InvalidSampleError when degenerate.
    EtaPair eta_at(double u0) const;

    /// 4x4 metric, g_00 = -1, g_0alpha = 0, spatial block eta_ab l^a l^b.
    Mat metric(const Event& ev) const;
    /// Covariant potential (A_0, A_1, A_2, A_3); A_0 = 0.
    std::array<double, 4> potential(const Event& ev) const;
    /// Covariant field strength F_ij, antisymmetric.
    Mat field_strength(const Event& ev) const;
    /// sqrt(-g) F^{ij}: the density whose coordinate divergence must vanish.
    Mat field_density_upper(const Event& ev) const;

private:
    SpacetimeSolution() = default;
    void require_in_hull(double u0) const;
    const SampleRow* bracket(double u0, const SampleRow** next) const;

    CaseId case_ = CaseId::Case1;
    std::vector<SampleRow> samples_;
    std::optional<FieldCurve> curve_;
    FreeFunctions free_;
    TimeGrid grid_;
};

}  // namespace g3ix
