#include "signid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "signid/errors.hpp"

namespace signid::linalg {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw DimensionMismatch(msg);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be >= 1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be >= 1");
    require(data_.size() == rows * cols, "entry count must equal rows*cols");
    validate_finite();
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DimensionMismatch("matrix needs at least one row");
    const std::size_t cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == cols, "ragged rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    m.validate_finite();
    return m;
}

void Matrix::validate_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) throw DimensionMismatch("matrix entries must be finite");
    }
}

double Matrix::inf_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    require(cols_ == rhs.rows_, "inner dimensions must match");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

Matrix Matrix::scaled(double a) const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = a * data_[i];
    return out;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), tri_(dim * (dim + 1) / 2, 0.0) {
    if (dim == 0) throw DimensionMismatch("dimension must be >= 1");
}

std::size_t SymMatrix::tri_index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * dim_ - i * (i + 1) / 2 + j;
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

SymMatrix SymMatrix::from_upper_of(const Matrix& m) {
    if (!m.is_square()) throw DimensionMismatch("symmetric matrix must be square");
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, m(i, j));
    return s;
}

Matrix SymMatrix::to_matrix() const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

double SymMatrix::inf_norm() const { return to_matrix().inf_norm(); }

double SymMatrix::max_abs() const {
    double best = 0.0;
    for (double v : tri_) best = std::max(best, std::abs(v));
    return best;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

void SymMatrix::validate_finite() const {
    for (double v : tri_) {
        if (!std::isfinite(v)) throw DimensionMismatch("matrix entries must be finite");
    }
}

std::vector<double> solve_linear(const Matrix& a, std::span<const double> b) {
    if (!a.is_square()) throw DimensionMismatch("solve_linear needs a square matrix");
    const std::size_t n = a.rows();
    require(b.size() == n, "rhs length must match matrix dimension");

    // Augmented working copy.
    Matrix w = a;
    std::vector<double> x(b.begin(), b.end());
    const double pivot_floor = 1e-12 * a.inf_norm();

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(w(perm[r], col)) > std::abs(w(perm[best], col))) best = r;
        }
        std::swap(perm[col], perm[best]);
        const double pivot = w(perm[col], col);
        if (std::abs(pivot) <= pivot_floor) {
            throw SingularMatrix("pivot below 1e-12 * ||a||_inf");
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = w(perm[r], col) / pivot;
            if (f == 0.0) continue;
            w(perm[r], col) = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) w(perm[r], c) -= f * w(perm[col], c);
            x[perm[r]] -= f * x[perm[col]];
        }
    }

    std::vector<double> out(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = x[perm[ri]];
        for (std::size_t c = ri + 1; c < n; ++c) s -= w(perm[ri], c) * out[c];
        out[ri] = s / w(perm[ri], ri);
    }
    return out;
}

double pd_pivot_floor(const SymMatrix& s) {
    return 1e-10 * (s.trace() / static_cast<double>(s.dim()));
}

bool is_positive_definite(const SymMatrix& s) {
    const std::size_t n = s.dim();
    const double floor = pd_pivot_floor(s);
    if (!std::isfinite(floor)) return false;

    // In-place lower Cholesky on a dense copy.
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) l(i, j) = s(i, j);

    for (std::size_t j = 0; j < n; ++j) {
        double d = l(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > floor)) return false;
        const double root = std::sqrt(d);
        l(j, j) = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = l(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / root;
        }
    }
    return true;
}

SymMatrix solve_lyapunov(const Matrix& a, const SymMatrix& d) {
    if (!a.is_square()) throw DimensionMismatch("drift must be square");
    const std::size_t n = a.rows();
    require(d.dim() == n, "diffusion dimension must match drift");

    // Unknowns are the upper-triangle entries x_{ij}, i <= j, ordered the
    // same way SymMatrix packs them. Row (i,j) encodes
    //   sum_k a_{ik} x_{kj} + sum_k a_{jk} x_{ik} = -d_{ij}.
    const std::size_t m = n * (n + 1) / 2;
    auto unknown = [n](std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i + 1) / 2 + j;
    };

    Matrix op(m, m);
    std::vector<double> rhs(m, 0.0);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j, ++row) {
            for (std::size_t k = 0; k < n; ++k) {
                op(row, unknown(k, j)) += a(i, k);
                op(row, unknown(i, k)) += a(j, k);
            }
            rhs[row] = -d(i, j);
        }
    }

    std::vector<double> x;
    try {
        x = solve_linear(op, rhs);
    } catch (const SingularMatrix&) {
        throw SingularLyapunov(
            "vectorized Lyapunov operator is singular (drift on the stability boundary)");
    }

    SymMatrix out(n);
    row = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j, ++row) out.set(i, j, x[row]);
    out.validate_finite();
    return out;
}

double lyapunov_residual(const Matrix& a, const SymMatrix& x, const SymMatrix& d) {
    const Matrix xm = x.to_matrix();
    const Matrix r = a * xm + xm * a.transposed() + d.to_matrix();
    return r.max_abs();
}

std::vector<std::vector<double>> null_space(const Matrix& m, double tol) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    Matrix w = m;
    const double floor = tol * std::max(m.max_abs(), 1e-300);

    std::vector<std::size_t> pivot_col_of_row;
    std::vector<bool> is_pivot_col(cols, false);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t best = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(w(i, c)) > std::abs(w(best, c))) best = i;
        if (std::abs(w(best, c)) <= floor) continue;
        if (best != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(w(r, j), w(best, j));
        const double pivot = w(r, c);
        for (std::size_t j = 0; j < cols; ++j) w(r, j) /= pivot;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const double f = w(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) w(i, j) -= f * w(r, j);
        }
        pivot_col_of_row.push_back(c);
        is_pivot_col[c] = true;
        ++r;
    }

    std::vector<std::vector<double>> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot_col[free_col]) continue;
        std::vector<double> v(cols, 0.0);
        v[free_col] = 1.0;
        for (std::size_t pr = 0; pr < pivot_col_of_row.size(); ++pr) {
            v[pivot_col_of_row[pr]] = -w(pr, free_col);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace signid::linalg
