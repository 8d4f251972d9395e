#include "g3ix/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace g3ix {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Sym3 nan_sym3() {
    Sym3 s;
    for (int k = 0; k < Sym3::kPacked; ++k) s.packed(k) = kNaN;
    return s;
}

// Cubic Hermite value and derivative on [t0, t1].
void hermite(double t0, double f0, double d0, double t1, double f1, double d1,
             double t, double& value, double& deriv) {
    const double dt = t1 - t0;
    const double s = (t - t0) / dt;
    const double s2 = s * s, s3 = s2 * s;
    value = (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * dt * d0 +
            (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * dt * d1;
    deriv = ((6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * dt * d0 +
             (-6 * s2 + 6 * s) * f1 + (3 * s2 - 2 * s) * dt * d1) /
            dt;
}

}  // namespace

EtaPair eta_from_n(const Sym3& n) {
    const double d = n.det();
    if (!(std::abs(d) > kDegenerateNTol)) {
        std::ostringstream os;
        os << "degenerate scaled unknowns: |det n| = " << std::abs(d)
           << " at or below " << kDegenerateNTol;
        throw DegenerateNError(os.str());
    }
    const double eta = 1.0 / d;
    return EtaPair{eta, n.scaled(eta)};
}

std::vector<double> grid_times(const TimeGrid& g) {
    if (g.steps < 2) throw Error("time grid needs at least 2 samples");
    if (!(g.t1 > g.t0)) throw Error("time grid endpoints out of order");
    std::vector<double> ts(g.steps);
    for (int i = 0; i < g.steps; ++i)
        ts[i] = g.t0 + (g.t1 - g.t0) * static_cast<double>(i) / (g.steps - 1);
    return ts;
}

std::vector<double> FreeFunctions::values_at(double t) const {
    std::vector<double> out;
    out.reserve(entries.size());
    for (const auto& [slot, expr] : entries) {
        (void)slot;
        out.push_back(expr.value(t, params));
    }
    return out;
}

SpacetimeSolution SpacetimeSolution::assemble(CaseId id, FieldCurve curve,
                                              FreeFunctions free, const TimeGrid& grid) {
    const auto need = free_slots(id);
    if (free.entries.size() != need.size())
        throw Error("free-function list does not match the branch free slots");
    for (std::size_t i = 0; i < need.size(); ++i)
        if (free.entries[i].first != need[i])
            throw Error("free-function list does not match the branch free slots");

    SpacetimeSolution sol;
    sol.case_ = id;
    sol.grid_ = grid;

    const std::vector<double> times = grid_times(grid);
    sol.samples_.reserve(times.size());
    for (double t : times) {
        SampleRow row;
        row.t = t;
        row.state = curve.state(t);
        row.n = solve_case(id, row.state, free.values_at(t));
        row.c2 = constraint_c2(row.state);
        const double d = row.n.det();
        if (std::abs(d) > kDegenerateNTol) {
            const EtaPair ep = eta_from_n(row.n);
            row.eta = ep.eta;
            row.eta_ab = ep.eta_ab;
            row.valid = ep.eta_ab.positive_definite();
        } else {
            row.eta = kNaN;
            row.eta_ab = nan_sym3();
            row.valid = false;
        }
        sol.samples_.push_back(row);
    }

    // Conservation across the window.
    const double c0 = sol.samples_.front().c2;
    for (const auto& row : sol.samples_) {
        if (std::abs(row.c2 - c0) > kConstraintRateTol * (1.0 + c0)) {
            std::ostringstream os;
            os << "conservation constraint violated across the window: "
                  "|c^2(t) - c^2(t0)| = "
               << std::abs(row.c2 - c0) << " at t = " << row.t << " exceeds "
               << kConstraintRateTol * (1.0 + c0);
            throw InconsistentSystemError(os.str(), std::abs(row.c2 - c0));
        }
    }

    sol.curve_ = std::move(curve);
    sol.free_ = std::move(free);
    return sol;
}

SpacetimeSolution SpacetimeSolution::from_samples(CaseId id, std::vector<SampleRow> rows) {
    if (rows.size() < 2) throw Error("sample table needs at least 2 rows");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].t > rows[i - 1].t))
            throw Error("sample table times must be strictly increasing");
    SpacetimeSolution sol;
    sol.case_ = id;
    sol.grid_ = TimeGrid{rows.front().t, rows.back().t, static_cast<int>(rows.size())};
    sol.samples_ = std::move(rows);
    return sol;
}

void SpacetimeSolution::require_in_hull(double u0) const {
    const double t0 = samples_.front().t;
    const double t1 = samples_.back().t;
    const double slack = 1e-9 * std::max({1.0, std::abs(t0), std::abs(t1)});
    if (u0 < t0 - slack || u0 > t1 + slack) {
        std::ostringstream os;
        os << "time u0 = " << u0 << " outside the solution grid hull [" << t0 << ", "
           << t1 << "]";
        throw InvalidSampleError(os.str());
    }
}

const SampleRow* SpacetimeSolution::bracket(double u0, const SampleRow** next) const {
    auto it = std::lower_bound(samples_.begin(), samples_.end(), u0,
                               [](const SampleRow& r, double t) { return r.t < t; });
    if (it == samples_.begin()) ++it;
    if (it == samples_.end()) --it;
    *next = &*it;
    return &*(it - 1);
}

FieldState SpacetimeSolution::state_at(double u0) const {
    require_in_hull(u0);
    if (curve_) return curve_->state(u0);
    const SampleRow* hi = nullptr;
    const SampleRow* lo = bracket(u0, &hi);
    FieldState s;
    for (int a = 0; a < 3; ++a) {
        hermite(lo->t, lo->state.alpha[a], lo->state.alpha_dot[a], hi->t,
                hi->state.alpha[a], hi->state.alpha_dot[a], u0, s.alpha[a],
                s.alpha_dot[a]);
        hermite(lo->t, lo->state.beta[a], lo->state.beta_dot[a], hi->t,
                hi->state.beta[a], hi->state.beta_dot[a], u0, s.beta[a], s.beta_dot[a]);
    }
    return s;
}

Sym3 SpacetimeSolution::n_at(double u0) const {
    require_in_hull(u0);
    if (curve_)
        return solve_case(case_, curve_->state(u0), free_.values_at(u0));
    const SampleRow* hi = nullptr;
    const SampleRow* lo = bracket(u0, &hi);
    if (!lo->valid || !hi->valid)
        throw InvalidSampleError("interpolation across a sample flagged invalid");
    const double w = (u0 - lo->t) / (hi->t - lo->t);
    Sym3 n;
    for (int k = 0; k < Sym3::kPacked; ++k)
        n.packed(k) = (1.0 - w) * lo->n.packed(k) + w * hi->n.packed(k);
    return n;
}

EtaPair SpacetimeSolution::eta_at(double u0) const {
    EtaPair ep;
    try {
        ep = eta_from_n(n_at(u0));
    } catch (const DegenerateNError& e) {
        throw InvalidSampleError(std::string("sample invalid at requested time: ") +
                                 e.what());
    }
    if (!ep.eta_ab.positive_definite())
        throw InvalidSampleError(
            "sample invalid at requested time: eta_ab is not positive definite");
    return ep;
}

Mat SpacetimeSolution::metric(const Event& ev) const {
    const EtaPair ep = eta_at(ev.u0);
    const Mat l = frame_matrix(ev.p);
    Mat g(4, 4);
    g(0, 0) = -1.0;
    for (int al = 0; al < 3; ++al)
        for (int be = 0; be < 3; ++be) {
            double s = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    s += ep.eta_ab(a, b) * l(al, a) * l(be, b);
            g(1 + al, 1 + be) = s;
        }
    return g;
}

std::array<double, 4> SpacetimeSolution::potential(const Event& ev) const {
    const FieldState s = state_at(ev.u0);
    const Mat l = frame_matrix(ev.p);
    std::array<double, 4> a{0.0, 0.0, 0.0, 0.0};
    for (int al = 0; al < 3; ++al)
        for (int gi = 0; gi < 3; ++gi) a[1 + al] += s.alpha[gi] * l(al, gi);
    return a;
}

Mat SpacetimeSolution::field_strength(const Event& ev) const {
    const FieldState s = state_at(ev.u0);
    const Mat l = frame_matrix(ev.p);
    const StructureConstants& cc = structure_constants();
    Mat f(4, 4);
    for (int al = 0; al < 3; ++al) {
        double f0a = 0.0;
        for (int a = 0; a < 3; ++a) f0a += s.alpha_dot[a] * l(al, a);
        f(0, 1 + al) = f0a;
        f(1 + al, 0) = -f0a;
    }
    for (int al = 0; al < 3; ++al)
        for (int be = al + 1; be < 3; ++be) {
            double s_ab = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c)
                        s_ab += cc(c, b, a) * l(al, a) * l(be, b) * s.alpha[c];
            f(1 + al, 1 + be) = s_ab;
            f(1 + be, 1 + al) = -s_ab;
        }
    return f;
}

Mat SpacetimeSolution::field_density_upper(const Event& ev) const {
    const EtaPair ep = eta_at(ev.u0);
    const Mat eta_inv = invert(ep.eta_ab.full());
    const Mat lup = inverse_frame(ev.p);
    // Inverse spatial metric g^{alpha beta} = eta^{ab} l_a^alpha l_b^beta.
    Mat ginv(3, 3);
    for (int al = 0; al < 3; ++al)
        for (int be = 0; be < 3; ++be) {
            double s = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) s += eta_inv(a, b) * lup(a, al) * lup(b, be);
            ginv(al, be) = s;
        }
    const Mat f = field_strength(ev);
    const double sqrtg = std::abs(ep.eta * std::sin(ev.p.u1));
    Mat out(4, 4);
    for (int be = 0; be < 3; ++be) {
        double s = 0.0;
        for (int ga = 0; ga < 3; ++ga) s += ginv(be, ga) * f(0, 1 + ga);
        out(0, 1 + be) = -sqrtg * s;  // g^{00} = -1
        out(1 + be, 0) = -out(0, 1 + be);
    }
    for (int al = 0; al < 3; ++al)
        for (int be = 0; be < 3; ++be) {
            double s = 0.0;
            for (int ga = 0; ga < 3; ++ga)
                for (int de = 0; de < 3; ++de)
                    s += ginv(al, ga) * ginv(be, de) * f(1 + ga, 1 + de);
            out(1 + al, 1 + be) = sqrtg * s;
        }
    return out;
}

}  // namespace g3ix
