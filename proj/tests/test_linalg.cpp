#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "signid/errors.hpp"
#include "signid/linalg.hpp"
#include "signid/rng.hpp"

using namespace signid;
using linalg::Matrix;
using linalg::SymMatrix;

namespace {

Matrix random_matrix(rng::Stream& s, std::size_t n, double lo, double hi) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = s.uniform(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("solve_linear: identity and diagonal") {
    const std::vector<double> b{1.0, 2.0, 3.0};
    const auto x = linalg::solve_linear(Matrix::identity(3), b);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK(x[2] == doctest::Approx(3.0));

    const auto d = Matrix::from_rows({{2.0, 0.0}, {0.0, 4.0}});
    const auto y = linalg::solve_linear(d, std::vector<double>{2.0, 8.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(2.0));
}

TEST_CASE("solve_linear: recovers a known solution on a well-conditioned 5x5") {
    rng::Stream s(7, 0, 0);
    Matrix a = random_matrix(s, 5, -1.0, 1.0);
    for (std::size_t i = 0; i < 5; ++i) a(i, i) += 4.0;  // diagonally dominant
    std::vector<double> x_true{1.5, -2.0, 0.25, 3.0, -0.75};
    std::vector<double> b(5, 0.0);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) b[i] += a(i, j) * x_true[j];
    const auto x = linalg::solve_linear(a, b);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(x[i] - x_true[i]) < 1e-9);
}

TEST_CASE("solve_linear: singular matrix raises") {
    const auto a = Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
    CHECK_THROWS_AS(linalg::solve_linear(a, std::vector<double>{1.0, 1.0}), SingularMatrix);
}

TEST_CASE("is_positive_definite: basics") {
    CHECK(linalg::is_positive_definite(SymMatrix::identity(4)));

    SymMatrix indefinite(2);
    indefinite.set(0, 0, 1.0);
    indefinite.set(1, 1, 1.0);
    indefinite.set(0, 1, 2.0);  // determinant -3
    CHECK_FALSE(linalg::is_positive_definite(indefinite));

    SymMatrix corr(3);
    for (std::size_t i = 0; i < 3; ++i) corr.set(i, i, 1.0);
    corr.set(0, 1, 0.5);
    corr.set(0, 2, 0.5);
    corr.set(1, 2, 0.5);
    // Sylvester: 1 + 2*0.125 - 3*0.25 = 0.5 > 0.
    CHECK(linalg::is_positive_definite(corr));
}

TEST_CASE("is_positive_definite agrees with the 3x3 Sylvester inequality") {
    rng::Stream s(11, 1, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double r12 = s.uniform(-1.0, 1.0);
        const double r13 = s.uniform(-1.0, 1.0);
        const double r23 = s.uniform(-1.0, 1.0);
        SymMatrix corr(3);
        for (std::size_t i = 0; i < 3; ++i) corr.set(i, i, 1.0);
        corr.set(0, 1, r12);
        corr.set(0, 2, r13);
        corr.set(1, 2, r23);
        const double sylvester = 1.0 + 2.0 * r12 * r13 * r23 - (r12 * r12 + r13 * r13 + r23 * r23);
        if (std::abs(sylvester) < 1e-9) continue;  // skip the measure-zero boundary
        CHECK(linalg::is_positive_definite(corr) == (sylvester > 0.0));
    }
}

TEST_CASE("solve_lyapunov: trivial diagonal case") {
    const auto a = Matrix::identity(2).scaled(-1.0);
    SymMatrix d(2);
    d.set(0, 0, 2.0);
    d.set(1, 1, 2.0);
    const auto x = linalg::solve_lyapunov(a, d);
    CHECK(x(0, 0) == doctest::Approx(1.0));
    CHECK(x(1, 1) == doctest::Approx(1.0));
    CHECK(x(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("solve_lyapunov: hand-solved 2x2 system") {
    // A = [[-1,0],[1,-1]], D = I. Writing X = [[a,b],[b,c]], the three
    // scalar equations are -2a = -1, a - 2b = 0, 2b - 2c = -1, so
    // X = [[0.5, 0.25], [0.25, 0.75]].
    const auto a = Matrix::from_rows({{-1.0, 0.0}, {1.0, -1.0}});
    const auto x = linalg::solve_lyapunov(a, SymMatrix::identity(2));
    CHECK(x(0, 0) == doctest::Approx(0.5));
    CHECK(x(0, 1) == doctest::Approx(0.25));
    CHECK(x(1, 1) == doctest::Approx(0.75));
}

TEST_CASE("solve_lyapunov: singular operator raises") {
    // Rotation matrix: eigenvalues +-i sum to zero across the pair.
    const auto a = Matrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}});
    CHECK_THROWS_AS(linalg::solve_lyapunov(a, SymMatrix::identity(2)), SingularLyapunov);
}

TEST_CASE("lyapunov_residual: reference values") {
    const auto a = Matrix::identity(3).scaled(-1.0);
    const auto residual =
        linalg::lyapunov_residual(a, SymMatrix::identity(3), SymMatrix::identity(3));
    CHECK(residual == doctest::Approx(1.0));  // -2I + I has max-abs 1

    // Scaling (A, D) by 7 with X fixed scales the residual linearly.
    const auto a2 = Matrix::from_rows({{-1.0, 0.0}, {1.0, -1.0}});
    const auto x = linalg::solve_lyapunov(a2, SymMatrix::identity(2));
    SymMatrix d7(2);
    d7.set(0, 0, 7.0);
    d7.set(1, 1, 7.0);
    const double r1 = linalg::lyapunov_residual(a2, x, SymMatrix::identity(2));
    const double r7 = linalg::lyapunov_residual(a2.scaled(7.0), x, d7);
    CHECK(r7 == doctest::Approx(7.0 * r1).epsilon(1e-9));
}

TEST_CASE("solve_lyapunov: forward-solve round trip on random stable drifts") {
    rng::Stream s(3, 2, 0);
    int solved = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + (s.next_u64() % 4);  // up to 5
        Matrix a = random_matrix(s, n, -2.0, 2.0);
        for (std::size_t i = 0; i < n; ++i) a(i, i) -= 3.0;  // push toward stability
        std::vector<double> diag(n);
        for (auto& v : diag) v = s.uniform(0.1, 5.0);
        const auto d = SymMatrix::diagonal(diag);
        SymMatrix x(1);
        try {
            x = linalg::solve_lyapunov(a, d);
        } catch (const SingularLyapunov&) {
            continue;
        }
        ++solved;
        const double scale = a.inf_norm() * x.inf_norm() + d.inf_norm();
        CHECK(linalg::lyapunov_residual(a, x, d) <= 1e-8 * scale);
    }
    CHECK(solved > 300);
}

TEST_CASE("solve_lyapunov: scale invariance of the solution") {
    rng::Stream s(5, 3, 0);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix a = random_matrix(s, 3, -2.0, 2.0);
        for (std::size_t i = 0; i < 3; ++i) a(i, i) -= 3.0;
        std::vector<double> diag{s.uniform(0.1, 5.0), s.uniform(0.1, 5.0), s.uniform(0.1, 5.0)};
        const auto d = SymMatrix::diagonal(diag);
        const auto x = linalg::solve_lyapunov(a, d);
        for (const double f : {0.5, 2.0, 10.0}) {
            std::vector<double> fd = diag;
            for (auto& v : fd) v *= f;
            const auto xf = linalg::solve_lyapunov(a.scaled(f), SymMatrix::diagonal(fd));
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = i; j < 3; ++j)
                    CHECK(std::abs(xf(i, j) - x(i, j)) <= 1e-8 * std::abs(x(i, j)) + 1e-12);
        }
    }
}

TEST_CASE("null_space: spans the kernel") {
    // Rank-1 matrix on 3 columns: kernel has dimension 2.
    const auto m = Matrix::from_rows({{1.0, 2.0, -1.0}, {2.0, 4.0, -2.0}});
    const auto basis = linalg::null_space(m);
    REQUIRE(basis.size() == 2);
    for (const auto& v : basis) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            double dot = 0.0;
            for (std::size_t c = 0; c < m.cols(); ++c) dot += m(r, c) * v[c];
            CHECK(std::abs(dot) < 1e-12);
        }
    }
}

TEST_CASE("matrix invariants: finite entries enforced") {
    CHECK_THROWS(Matrix::from_rows({{1.0, std::nan("")}}));
    CHECK_THROWS(Matrix(2, 2, {1.0, 2.0, 3.0}));  // wrong entry count
}
