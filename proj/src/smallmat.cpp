#include "g3ix/smallmat.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace g3ix {

namespace {

void check_dim(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows > Mat::kMaxDim || cols > Mat::kMaxDim) {
        std::ostringstream os;
        os << "matrix dimensions " << rows << "x" << cols << " outside 1.."
           << Mat::kMaxDim;
        throw Error(os.str());
    }
}

}  // namespace

Mat::Mat(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dim(rows, cols);
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(static_cast<int>(rows.size())),
      cols_(rows.size() ? static_cast<int>(rows.begin()->size()) : 0) {
    check_dim(rows_, cols_);
    int r = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols_)
            throw Error("ragged initializer for matrix");
        int c = 0;
        for (double v : row) e_[idx(r, c++)] = v;
        ++r;
    }
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m = std::max(m, std::abs((*this)(r, c)));
    return m;
}

double Mat::max_row_norm() const {
    double m = 0.0;
    for (int r = 0; r < rows_; ++r) {
        double rn = 0.0;
        for (int c = 0; c < cols_; ++c) rn = std::max(rn, std::abs((*this)(r, c)));
        m = std::max(m, rn);
    }
    return m;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw Error("matrix product dimension mismatch");
    Mat out(a.rows(), b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) {
            double s = 0.0;
            for (int k = 0; k < a.cols(); ++k) s += a(r, k) * b(k, c);
            out(r, c) = s;
        }
    return out;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error("matrix difference dimension mismatch");
    Mat out(a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) - b(r, c);
    return out;
}

Vec::Vec(int n) : n_(n) {
    if (n < 0 || n > Mat::kMaxDim) throw Error("vector size outside 0..6");
}

Vec::Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
    if (n_ > Mat::kMaxDim) throw Error("vector size outside 0..6");
    int i = 0;
    for (double v : xs) e_[i++] = v;
}

double Vec::norm_inf() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(e_[i]));
    return m;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error("vector difference dimension mismatch");
    Vec out(a.size());
    for (int i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec operator*(const Mat& m, const Vec& x) {
    if (m.cols() != x.size()) throw Error("matrix-vector dimension mismatch");
    Vec out(m.rows());
    for (int r = 0; r < m.rows(); ++r) {
        double s = 0.0;
        for (int c = 0; c < m.cols(); ++c) s += m(r, c) * x[c];
        out[r] = s;
    }
    return out;
}

double det(const Mat& m) {
    if (m.rows() != m.cols()) throw Error("determinant of non-square matrix");
    const int n = m.rows();
    Mat lu = m;
    double d = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(lu(r, k)) > std::abs(lu(piv, k))) piv = r;
        if (lu(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(lu(piv, c), lu(k, c));
            d = -d;
        }
        d *= lu(k, k);
        for (int r = k + 1; r < n; ++r) {
            const double f = lu(r, k) / lu(k, k);
            for (int c = k + 1; c < n; ++c) lu(r, c) -= f * lu(k, c);
        }
    }
    return d;
}

Mat invert(const Mat& m) {
    if (m.rows() != m.cols()) throw Error("inverse of non-square matrix");
    const int n = m.rows();
    const double tol = kPivotTol * std::max(m.max_row_norm(), 1e-300);
    Mat a = m;
    Mat inv = Mat::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        if (std::abs(a(piv, k)) <= tol) {
            std::ostringstream os;
            os << "singular matrix: pivot " << std::abs(a(piv, k))
               << " below tolerance " << tol;
            throw SingularMatrixError(os.str());
        }
        if (piv != k)
            for (int c = 0; c < n; ++c) {
                std::swap(a(piv, c), a(k, c));
                std::swap(inv(piv, c), inv(k, c));
            }
        const double p = a(k, k);
        for (int c = 0; c < n; ++c) {
            a(k, c) /= p;
            inv(k, c) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == k) continue;
            const double f = a(r, k);
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a(r, c) -= f * a(k, c);
                inv(r, c) -= f * inv(k, c);
            }
        }
    }
    return inv;
}

Vec solve(const Mat& a, const Vec& b) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw Error("square solve dimension mismatch");
    const int n = a.rows();
    const double tol = kPivotTol * std::max(a.max_row_norm(), 1e-300);
    Mat lu = a;
    Vec y = b;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(lu(r, k)) > std::abs(lu(piv, k))) piv = r;
        if (std::abs(lu(piv, k)) <= tol)
            throw SingularMatrixError("singular matrix in square solve");
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(lu(piv, c), lu(k, c));
            std::swap(y[piv], y[k]);
        }
        for (int r = k + 1; r < n; ++r) {
            const double f = lu(r, k) / lu(k, k);
            y[r] -= f * y[k];
            for (int c = k; c < n; ++c) lu(r, c) -= f * lu(k, c);
        }
    }
    Vec x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = y[r];
        for (int c = r + 1; c < n; ++c) s -= lu(r, c) * x[c];
        x[r] = s / lu(r, r);
    }
    return x;
}

RankedSolution solve_ranked(const Mat& a, const Vec& b, double tol) {
    if (a.rows() != b.size()) throw Error("solve_ranked dimension mismatch");
    const int m = a.rows();
    const int n = a.cols();
    const double pivot_tol = tol * std::max(a.max_row_norm(), 1e-300);

    Mat u = a;
    Vec rhs = b;
    std::array<int, Mat::kMaxDim> colperm{};
    for (int c = 0; c < n; ++c) colperm[c] = c;

    // Forward elimination with full pivoting.
    int rank = 0;
    for (int k = 0; k < std::min(m, n); ++k) {
        int pr = k, pc = k;
        double best = 0.0;
        for (int r = k; r < m; ++r)
            for (int c = k; c < n; ++c)
                if (std::abs(u(r, c)) > best) {
                    best = std::abs(u(r, c));
                    pr = r;
                    pc = c;
                }
        if (best <= pivot_tol) break;
        if (pc != k) {
            for (int r = 0; r < m; ++r) std::swap(u(r, pc), u(r, k));
            std::swap(colperm[pc], colperm[k]);
        }
        if (pr != k) {
            for (int c = 0; c < n; ++c) std::swap(u(pr, c), u(k, c));
            std::swap(rhs[pr], rhs[k]);
        }
        for (int r = k + 1; r < m; ++r) {
            const double f = u(r, k) / u(k, k);
            rhs[r] -= f * rhs[k];
            for (int c = k; c < n; ++c) u(r, c) -= f * u(k, c);
        }
        ++rank;
    }

    // Consistency: rows below the rank must have (numerically) zero rhs.
    const double consist_tol = tol * (1.0 + b.norm_inf());
    double violation = 0.0;
    for (int r = rank; r < m; ++r) violation = std::max(violation, std::abs(rhs[r]));
    if (violation > consist_tol) {
        std::ostringstream os;
        os << "inconsistent linear system: residual component " << violation
           << " outside the column space (tolerance " << consist_tol << ")";
        throw InconsistentSystemError(os.str(), violation);
    }

    RankedSolution out;
    out.rank = rank;
    for (int k = 0; k < rank; ++k) out.pivot_columns.push_back(colperm[k]);

    // Particular solution: free variables pinned to zero.
    Vec xp(n);
    for (int r = rank - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < rank; ++c) s -= u(r, c) * xp[c];
        xp[r] = s / u(r, r);
    }
    out.particular = Vec(n);
    for (int c = 0; c < rank; ++c) out.particular[colperm[c]] = xp[c];

    // One nullspace basis vector per free column.
    for (int f = rank; f < n; ++f) {
        Vec xv(n);
        xv[f] = 1.0;
        for (int r = rank - 1; r >= 0; --r) {
            double s = -u(r, f);
            for (int c = r + 1; c < rank; ++c) s -= u(r, c) * xv[c];
            xv[r] = s / u(r, r);
        }
        Vec v(n);
        for (int c = 0; c < n; ++c)
            v[colperm[c]] = (c < rank) ? xv[c] : (c == f ? 1.0 : 0.0);
        out.nullspace.push_back(v);
    }
    return out;
}

}  // namespace g3ix
