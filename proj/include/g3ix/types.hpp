#pragma once

#include <array>
#include <cmath>

#include "g3ix/smallmat.hpp"

namespace g3ix {

/// Triple indexed by the group index a (0-based in code, 1..3 in formulas).
using GroupVec = std::array<double, 3>;

inline double dot(const GroupVec& a, const GroupVec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline GroupVec cross(const GroupVec& a, const GroupVec& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

/// Symmetric 3x3 matrix stored as (11, 12, 13, 22, 23, 33).
class Sym3 {
public:
    Sym3() = default;
    Sym3(double m11, double m12, double m13, double m22, double m23, double m33)
        : e_{m11, m12, m13, m22, m23, m33} {}

    static Sym3 identity() { return Sym3(1, 0, 0, 1, 0, 1); }
    static Sym3 diag(double a, double b, double c) { return Sym3(a, 0, 0, b, 0, c); }

    double operator()(int a, int b) const { return e_[pack(a, b)]; }
    double& at(int a, int b) { return e_[pack(a, b)]; }

    /// Packed entry in the fixed (11,12,13,22,23,33) order.
    double packed(int k) const { return e_[k]; }
    double& packed(int k) { return e_[k]; }

    Mat full() const {
        Mat m(3, 3);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m(a, b) = (*this)(a, b);
        return m;
    }

    double det() const {
        const Sym3& m = *this;
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(1, 2)) -
               m(0, 1) * (m(0, 1) * m(2, 2) - m(1, 2) * m(0, 2)) +
               m(0, 2) * (m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2));
    }

    /// Sylvester criterion on leading principal minors.
    bool positive_definite() const {
        const Sym3& m = *this;
        if (!(m(0, 0) > 0.0)) return false;
        if (!(m(0, 0) * m(1, 1) - m(0, 1) * m(0, 1) > 0.0)) return false;
        return det() > 0.0;
    }

    GroupVec operator*(const GroupVec& v) const {
        const Sym3& m = *this;
        return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
                m(0, 1) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
                m(0, 2) * v[0] + m(1, 2) * v[1] + m(2, 2) * v[2]};
    }

    Sym3 scaled(double f) const {
        Sym3 s = *this;
        for (double& x : s.e_) x *= f;
        return s;
    }

    /// Number of packed entries and their (a,b) index pairs.
    static constexpr int kPacked = 6;
    static constexpr std::array<std::array<int, 2>, 6> kIndex{
        {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

private:
    static int pack(int a, int b) {
        if (a > b) std::swap(a, b);
        // (0,0)->0 (0,1)->1 (0,2)->2 (1,1)->3 (1,2)->4 (2,2)->5
        return a == 0 ? b : (a == 1 ? 2 + b : 5);
    }
    std::array<double, 6> e_{};
};

}  // namespace g3ix
