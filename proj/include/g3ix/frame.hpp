#pragma once

#include "g3ix/smallmat.hpp"
#include "g3ix/types.hpp"

namespace g3ix {

/// Chart validity margin on |sin u1|. The inverse frame and the Killing
/// vectors carry 1/sin u1, so the chart degenerates at the poles.
inline constexpr double kChartEps = 1e-6;

/// Point on the spatial hypersurface, Euler-angle-like coordinates in radians.
struct SpacePoint {
    double u1 = 0.0, u2 = 0.0, u3 = 0.0;
};

/// Throws ChartSingularityError when |sin u1| <= kChartEps.
void require_chart_valid(const SpacePoint& p);

/// Invariant frame matrix l^a_alpha. Row index is the coordinate index
/// alpha, column index is the group index a.
Mat frame_matrix(const SpacePoint& p);

/// Dual frame l_a^alpha. Row index is the group index a, column index is
/// the coordinate index alpha. Satisfies sum_a l^a_alpha l_a^beta = delta.
Mat inverse_frame(const SpacePoint& p);

/// Killing vector components xi_a^alpha, rows indexed by a.
Mat killing_vectors(const SpacePoint& p);

/// Z_a^b = xi_a^alpha l^b_alpha, intertwining the two frames.
Mat z_matrix(const SpacePoint& p);

/// rho_a = l_a^alpha_{,alpha} + (l_a^alpha d_alpha l)/l with l = det l^a_alpha.
/// Both terms are evaluated from the closed-form frame; they cancel
/// identically for this frame.
GroupVec rho(const SpacePoint& p);

/// det of the frame matrix; equals sin u1.
double frame_det(const SpacePoint& p);

/// Structure constants C^c_{ab} of the su(2) algebra:
/// C^3_12 = C^2_31 = C^1_23 = 1 plus antisymmetry in (a,b).
struct StructureConstants {
    double operator()(int c, int a, int b) const { return table[c][a][b]; }
    double table[3][3][3] = {};
};

const StructureConstants& structure_constants();

/// All four frame matrices at one point.
struct FrameMatrices {
    Mat l_down;  // l^a_alpha
    Mat l_up;    // l_a^alpha
    Mat xi;      // xi_a^alpha
    Mat z;       // Z_a^b
};

FrameMatrices frame_bundle(const SpacePoint& p);

}  // namespace g3ix
