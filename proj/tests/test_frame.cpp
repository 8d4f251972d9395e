#include "doctest.h"

#include <cmath>

#include "g3ix/frame.hpp"
#include "g3ix/verify.hpp"
#include "support.hpp"

using namespace g3ix;
using testsupport::fd4;
using testsupport::random_chart_point;

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_mat(const Mat& m, std::initializer_list<std::initializer_list<double>> want,
               double tol = 1e-14) {
    int r = 0;
    for (const auto& row : want) {
        int c = 0;
        for (double v : row) {
            CHECK(std::abs(m(r, c) - v) <= tol);
            ++c;
        }
        ++r;
    }
}
}  // namespace

TEST_CASE("frame matrix: pinned points") {
    check_mat(frame_matrix({kPi / 2, 0.3, 0.0}), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    check_mat(frame_matrix({kPi / 2, 1.1, kPi / 2}), {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}});
    CHECK(det(frame_matrix({kPi / 6, 0.2, 0.7})) == doctest::Approx(0.5));
    CHECK(frame_det({kPi / 6, 0.2, 0.7}) == doctest::Approx(0.5));
}

TEST_CASE("inverse frame: duality and pinned points") {
    check_mat(inverse_frame({kPi / 2, 0.3, 0.0}), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    // at sin u1 = 1 the frame is orthogonal
    const Mat down = frame_matrix({kPi / 2, 0.8, kPi / 2});
    const Mat up = inverse_frame({kPi / 2, 0.8, kPi / 2});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(up(r, c) == doctest::Approx(down(c, r)));

    std::uint64_t rng = 5;
    for (int k = 0; k < 100; ++k) {
        const SpacePoint p = random_chart_point(rng);
        const Mat prod = frame_matrix(p) * inverse_frame(p);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                CHECK(std::abs(prod(r, c) - (r == c ? 1 : 0)) <= 1e-14);
    }
}

TEST_CASE("killing vectors: pinned point") {
    check_mat(killing_vectors({kPi / 2, 0.0, 2.2}), {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
}

TEST_CASE("chart singularity raised near the poles") {
    CHECK_THROWS_AS((void)frame_matrix({0.0, 1.0, 1.0}), ChartSingularityError);
    CHECK_THROWS_AS((void)inverse_frame({kPi, 1.0, 1.0}), ChartSingularityError);
    CHECK_THROWS_AS((void)killing_vectors({1e-9, 1.0, 1.0}), ChartSingularityError);
    CHECK_THROWS_AS((void)rho({0.0, 0.0, 0.0}), ChartSingularityError);
}

TEST_CASE("structure constants table") {
    const StructureConstants& c = structure_constants();
    CHECK(c(2, 0, 1) == 1.0);   // third component of [1,2]
    CHECK(c(1, 2, 0) == 1.0);   // second component of [3,1]
    CHECK(c(0, 1, 2) == 1.0);   // first component of [2,3]
    CHECK(c(2, 1, 0) == -1.0);  // antisymmetry
    CHECK(c(0, 0, 1) == 0.0);
    // Jacobi identity: sum over cyclic e of C^e_ab C^d_ec vanishes
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int cc = 0; cc < 3; ++cc)
                for (int d = 0; d < 3; ++d) {
                    double s = 0.0;
                    for (int e = 0; e < 3; ++e)
                        s += c(e, a, b) * c(d, e, cc) + c(e, b, cc) * c(d, e, a) +
                             c(e, cc, a) * c(d, e, b);
                    CHECK(s == doctest::Approx(0.0));
                }
}

TEST_CASE("frame commutators reproduce the structure constants (local oracle)") {
    // Hand-rolled FD commutator at one point, independent of the library
    // checks: [Y_a, Y_b]^gamma contracted with the co-frame.
    const SpacePoint p{0.9, 1.7, 2.4};
    const Mat down = frame_matrix(p);
    const StructureConstants& sc = structure_constants();
    const double h = 1e-3;
    auto lup_entry = [](const SpacePoint& q, int a, int g) {
        return inverse_frame(q)(a, g);
    };
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double w[3];
            for (int g = 0; g < 3; ++g) {
                double s = 0.0;
                for (int be = 0; be < 3; ++be) {
                    auto dM = [&](int row, int gg) {
                        auto f = [&](double x) {
                            SpacePoint q = p;
                            (be == 0 ? q.u1 : be == 1 ? q.u2 : q.u3) = x;
                            return lup_entry(q, row, gg);
                        };
                        const double x0 = be == 0 ? p.u1 : be == 1 ? p.u2 : p.u3;
                        return fd4(f, x0, h);
                    };
                    s += inverse_frame(p)(a, be) * dM(b, g) -
                         inverse_frame(p)(b, be) * dM(a, g);
                }
                w[g] = s;
            }
            for (int c = 0; c < 3; ++c) {
                double coeff = 0.0;
                for (int g = 0; g < 3; ++g) coeff += w[g] * down(g, c);
                CHECK(std::abs(coeff - sc(c, a, b)) <= 1e-7);
            }
        }
}

TEST_CASE("both operator families close on the structure constants") {
    const StructureConstants& sc = structure_constants();
    CHECK(max_commutator_residual(21, 20, false, sc) <= kCommutatorTol);
    CHECK(max_commutator_residual(22, 20, true, sc) <= kCommutatorTol);
}

TEST_CASE("killing equations hold for arbitrary positive-definite coefficients") {
    CHECK(max_killing_residual(31, 10, 5) <= kKillingTol);
}

TEST_CASE("z matrix: pinned point, unit determinant, transport relation") {
    check_mat(z_matrix({kPi / 2, 0.0, 0.0}), {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
    std::uint64_t rng = 17;
    for (int k = 0; k < 20; ++k) {
        const double d = det(z_matrix(random_chart_point(rng)));
        CHECK(std::abs(std::abs(d) - 1.0) <= 1e-13);
        CHECK(d == doctest::Approx(-1.0));
    }
    CHECK(max_z_relation_residual(33, 10) <= kZRelationTol);
}

TEST_CASE("rho vanishes identically") {
    for (const SpacePoint& p :
         {SpacePoint{kPi / 4, 0.5, kPi / 3}, SpacePoint{1.0, 2.0, 2.0}}) {
        const GroupVec r = rho(p);
        for (int a = 0; a < 3; ++a) CHECK(std::abs(r[a]) <= 1e-12);
    }

    // Brute-force check of both terms via the FD oracle.
    std::uint64_t rng = 8;
    for (int k = 0; k < 10; ++k) {
        const SpacePoint p = random_chart_point(rng);
        for (int a = 0; a < 3; ++a) {
            double divergence = 0.0;
            for (int al = 0; al < 3; ++al) {
                auto f = [&](double x) {
                    SpacePoint q = p;
                    (al == 0 ? q.u1 : al == 1 ? q.u2 : q.u3) = x;
                    return inverse_frame(q)(a, al);
                };
                divergence += fd4(f, al == 0 ? p.u1 : al == 1 ? p.u2 : p.u3, 1e-3);
            }
            double logdet = 0.0;
            for (int al = 0; al < 3; ++al) {
                auto f = [&](double x) {
                    SpacePoint q = p;
                    (al == 0 ? q.u1 : al == 1 ? q.u2 : q.u3) = x;
                    return frame_det(q);
                };
                logdet += inverse_frame(p)(a, al) *
                          fd4(f, al == 0 ? p.u1 : al == 1 ? p.u2 : p.u3, 1e-3) /
                          frame_det(p);
            }
            CHECK(std::abs(divergence + logdet) <= 1e-9);
            CHECK(std::abs(rho(p)[a] - (divergence + logdet)) <= 1e-9);
        }
    }
}

TEST_CASE("duality invariant at random chart points") {
    CHECK(max_duality_residual(44, 100) <= kDualityTol);
}

TEST_CASE("frame bundle carries consistent pieces") {
    std::uint64_t rng = 55;
    for (int k = 0; k < 10; ++k) {
        const SpacePoint p = random_chart_point(rng);
        const FrameMatrices fm = frame_bundle(p);
        const Mat z = killing_vectors(p) * frame_matrix(p);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                CHECK(fm.l_down(r, c) == frame_matrix(p)(r, c));
                CHECK(fm.l_up(r, c) == inverse_frame(p)(r, c));
                CHECK(fm.xi(r, c) == killing_vectors(p)(r, c));
                CHECK(fm.z(r, c) == doctest::Approx(z(r, c)));
            }
    }
}
