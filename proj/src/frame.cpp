#include "g3ix/frame.hpp"

#include <cmath>
#include <sstream>

namespace g3ix {

void require_chart_valid(const SpacePoint& p) {
    if (std::abs(std::sin(p.u1)) <= kChartEps) {
        std::ostringstream os;
        os << "chart singularity: |sin u1| = " << std::abs(std::sin(p.u1))
           << " at u1 = " << p.u1 << " (margin " << kChartEps << ")";
        throw ChartSingularityError(os.str());
    }
}

Mat frame_matrix(const SpacePoint& p) {
    require_chart_valid(p);
    const double s1 = std::sin(p.u1), c1 = std::cos(p.u1);
    const double s3 = std::sin(p.u3), c3 = std::cos(p.u3);
    return Mat{{c3, -s3, 0.0},
               {s1 * s3, s1 * c3, c1},
               {0.0, 0.0, 1.0}};
}

Mat inverse_frame(const SpacePoint& p) {
    require_chart_valid(p);
    const double s1 = std::sin(p.u1), c1 = std::cos(p.u1);
    const double s3 = std::sin(p.u3), c3 = std::cos(p.u3);
    return Mat{{c3, s3 / s1, -c1 * s3 / s1},
               {-s3, c3 / s1, -c1 * c3 / s1},
               {0.0, 0.0, 1.0}};
}

Mat killing_vectors(const SpacePoint& p) {
    require_chart_valid(p);
    const double s1 = std::sin(p.u1), c1 = std::cos(p.u1);
    const double s2 = std::sin(p.u2), c2 = std::cos(p.u2);
    return Mat{{0.0, 1.0, 0.0},
               {c2, -c1 * s2 / s1, s2 / s1},
               {-s2, -c1 * c2 / s1, c2 / s1}};
}

Mat z_matrix(const SpacePoint& p) {
    // Z_a^b = xi_a^alpha l^b_alpha
    return killing_vectors(p) * frame_matrix(p);
}

GroupVec rho(const SpacePoint& p) {
    require_chart_valid(p);
    const double s1 = std::sin(p.u1), c1 = std::cos(p.u1);
    const double s3 = std::sin(p.u3), c3 = std::cos(p.u3);
    // Divergence term d_alpha l_a^alpha of the dual frame: only the u3
    // column of row 1 and row 2 depends on its own coordinate.
    const GroupVec divergence = {-c1 * c3 / s1, c1 * s3 / s1, 0.0};
    // Log-derivative term l_a^alpha d_alpha(sin u1) / sin u1; only the u1
    // column contributes.
    const GroupVec logdet = {c3 * c1 / s1, -s3 * c1 / s1, 0.0};
    return {divergence[0] + logdet[0], divergence[1] + logdet[1],
            divergence[2] + logdet[2]};
}

double frame_det(const SpacePoint& p) {
    require_chart_valid(p);
    return std::sin(p.u1);
}

const StructureConstants& structure_constants() {
    static const StructureConstants sc = [] {
        StructureConstants s;
        s.table[2][0][1] = 1.0;   // C^3_12
        s.table[2][1][0] = -1.0;
        s.table[1][2][0] = 1.0;   // C^2_31
        s.table[1][0][2] = -1.0;
        s.table[0][1][2] = 1.0;   // C^1_23
        s.table[0][2][1] = -1.0;
        return s;
    }();
    return sc;
}

FrameMatrices frame_bundle(const SpacePoint& p) {
    Mat l_down = frame_matrix(p);
    Mat l_up = inverse_frame(p);
    Mat xi = killing_vectors(p);
    Mat z = xi * l_down;
    return FrameMatrices{l_down, l_up, xi, z};
}

}  // namespace g3ix
