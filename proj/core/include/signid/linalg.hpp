#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace signid::linalg {

/// Dense real matrix, row-major. Sized for the small systems this library
/// works with (dimension up to a few dozen); entries are validated to be
/// finite on construction.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> data() const { return data_; }

    /// Max absolute row sum.
    double inf_norm() const;
    /// Max absolute entry.
    double max_abs() const;

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(double a) const;

    bool is_square() const { return rows_ == cols_; }

    /// Throws if any entry is NaN or infinite.
    void validate_finite() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Symmetric matrix storing only the upper triangle (d(d+1)/2 values),
/// symmetric by construction.
class SymMatrix {
public:
    explicit SymMatrix(std::size_t dim);

    static SymMatrix identity(std::size_t n);
    static SymMatrix diagonal(std::span<const double> d);
    /// Builds from a full square matrix; entries are read from the upper
    /// triangle, the lower triangle is ignored.
    static SymMatrix from_upper_of(const Matrix& m);

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return tri_[tri_index(i, j)]; }
    void set(std::size_t i, std::size_t j, double v) { tri_[tri_index(i, j)] = v; }

    std::span<const double> packed() const { return tri_; }

    Matrix to_matrix() const;
    double inf_norm() const;
    double max_abs() const;
    double trace() const;

    void validate_finite() const;

private:
    std::size_t tri_index(std::size_t i, std::size_t j) const;

    std::size_t dim_;
    std::vector<double> tri_;
};

/// Solves a x = b by Gaussian elimination with partial pivoting.
/// Throws SingularMatrix when a pivot magnitude falls below
/// 1e-12 * inf_norm(a).
std::vector<double> solve_linear(const Matrix& a, std::span<const double> b);

/// Relative pivot floor for the Cholesky-based positive definiteness test:
/// pivots must exceed 1e-10 * (trace / dim).
double pd_pivot_floor(const SymMatrix& s);

/// True iff the Cholesky factorization of s completes with every pivot
/// above pd_pivot_floor(s). Never throws; returns false on factorization
/// failure.
bool is_positive_definite(const SymMatrix& s);

/// Solves A X + X A^T = -D for symmetric X by vectorizing on the upper
/// triangle (d(d+1)/2 unknowns). Throws SingularLyapunov when the
/// vectorized operator is singular, which happens exactly when some pair
/// of eigenvalues of A sums to zero.
SymMatrix solve_lyapunov(const Matrix& a, const SymMatrix& d);

/// ||A X + X A^T + D||_inf, the residual of the Lyapunov equation.
double lyapunov_residual(const Matrix& a, const SymMatrix& x, const SymMatrix& d);

/// Orthogonal-ish basis (unnormalized) of the null space of m, one vector
/// per row of the result. Computed by Gauss-Jordan elimination; columns
/// whose pivot falls below tol * max_abs(m) are treated as free.
std::vector<std::vector<double>> null_space(const Matrix& m, double tol = 1e-12);

}  // namespace signid::linalg
