#pragma once

// Shared helpers for the test suites: a tiny deterministic RNG, independent
// finite-difference and Gaussian-elimination oracles, and curve builders.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "g3ix/frame.hpp"
#include "g3ix/maxwell.hpp"

namespace testsupport {

inline double next_unit(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

inline double urand(std::uint64_t& state, double lo, double hi) {
    return lo + (hi - lo) * next_unit(state);
}

inline g3ix::SpacePoint random_chart_point(std::uint64_t& state) {
    constexpr double pi = 3.14159265358979323846;
    return g3ix::SpacePoint{urand(state, 0.3, pi - 0.3), urand(state, 0.0, 2 * pi),
                            urand(state, 0.0, 2 * pi)};
}

/// 4th-order central difference, the test-side derivative oracle.
inline double fd4(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

/// Plain row-echelon rank oracle, independent of the library solver.
inline int ge_rank(std::vector<std::vector<double>> a, double tol) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t piv = row;
        for (std::size_t r = row; r < m; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) <= tol) continue;
        std::swap(a[piv], a[row]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row) continue;
            const double f = a[r][col] / a[row][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

inline std::vector<std::vector<double>> to_rows(const g3ix::Mat& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
    return rows;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1.0);
    return xs;
}

}  // namespace testsupport
