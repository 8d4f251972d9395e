#pragma once

#include <array>
#include <initializer_list>
#include <vector>

#include "g3ix/errors.hpp"

namespace g3ix {

/// Pivot threshold factor: a pivot below kPivotTol * (max row sup-norm)
/// is treated as zero when deciding rank / singularity.
inline constexpr double kPivotTol = 1e-10;

/// Dense row-major matrix with dimensions fixed at construction, at most 6x6.
/// Value semantics throughout; entries must stay finite.
class Mat {
public:
    static constexpr int kMaxDim = 6;

    Mat(int rows, int cols);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(int n);
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double operator()(int r, int c) const { return e_[idx(r, c)]; }
    double& operator()(int r, int c) { return e_[idx(r, c)]; }

    Mat transposed() const;
    double max_abs() const;
    /// Largest row sup-norm; the scale used by the pivot tolerance.
    double max_row_norm() const;

    friend Mat operator*(const Mat& a, const Mat& b);
    friend Mat operator-(const Mat& a, const Mat& b);

private:
    int idx(int r, int c) const { return r * cols_ + c; }
    int rows_, cols_;
    std::array<double, kMaxDim * kMaxDim> e_{};
};

/// Fixed-capacity vector companion to Mat (size at most 6).
class Vec {
public:
    Vec() : n_(0) {}
    explicit Vec(int n);
    Vec(std::initializer_list<double> xs);

    int size() const { return n_; }
    double operator[](int i) const { return e_[i]; }
    double& operator[](int i) { return e_[i]; }

    double norm_inf() const;

    friend Vec operator-(const Vec& a, const Vec& b);

private:
    int n_;
    std::array<double, Mat::kMaxDim> e_{};
};

Vec operator*(const Mat& m, const Vec& x);

/// Determinant by LU decomposition with partial pivoting.
double det(const Mat& m);

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below kPivotTol * scale.
Mat invert(const Mat& m);

/// Square solve A x = b (partial pivoting). Throws SingularMatrixError.
Vec solve(const Mat& a, const Vec& b);

/// Output of the rank-revealing solver. `particular` has the free
/// (non-pivot) variables set to zero; each nullspace vector satisfies
/// A v = 0 to within the pivot tolerance.
struct RankedSolution {
    int rank = 0;
    Vec particular;
    std::vector<Vec> nullspace;
    std::vector<int> pivot_columns;  // original column indices, elimination order
};

/// Rank-revealing solve of a possibly rectangular, possibly singular system
/// by Gaussian elimination with full pivoting. The pivot threshold is
/// tol * (max row sup-norm of A). Throws InconsistentSystemError (carrying
/// the violation norm) when b has a component outside the column space
/// larger than tol * (1 + |b|_inf).
RankedSolution solve_ranked(const Mat& a, const Vec& b, double tol = kPivotTol);

}  // namespace g3ix
