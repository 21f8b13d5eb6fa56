#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "jive/kernels.hpp"
#include "jive/linalg.hpp"
#include "jive/metrics.hpp"
#include "test_util.hpp"

using namespace jive;

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

// full-decomposition oracle: all singular values, descending
Eigen::VectorXd oracle_singular_values(const Matrix& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(m)).singularValues();
}

double oracle_spectral_norm(const Matrix& m) {
    const auto sv = oracle_singular_values(m);
    return sv.size() ? sv(0) : 0.0;
}

// sin of the largest principal angle between equal-rank bases, measured as
// ||(I - b b^T) a|| (no cancellation for small angles)
double oracle_subspace_gap(const Matrix& a, const Matrix& b) {
    const Eigen::MatrixXd ea = to_eigen(a);
    const Eigen::MatrixXd eb = to_eigen(b);
    const Eigen::MatrixXd resid = ea - eb * (eb.transpose() * ea);
    return Eigen::JacobiSVD<Eigen::MatrixXd>(resid).singularValues()(0);
}

}  // namespace

TEST_CASE("qr: identity and single-column normalization") {
    const OrthonormalBasis id = qr_orthonormalize(Matrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(id.mat()(i, j) == (i == j ? 1.0 : 0.0));

    const OrthonormalBasis col = qr_orthonormalize(Matrix(2, 1, {3.0, 4.0}));
    CHECK(col.mat()(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(col.mat()(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("qr: random 50x5 spans the input") {
    const Matrix m = test::random_matrix(31, 50, 5);
    const OrthonormalBasis b = qr_orthonormalize(m);
    CHECK(b.orthonormality_residual() <= 1e-12);
    const Matrix resid = project_out(m, b);
    CHECK(spectral_norm(resid) <= 1e-10);
}

TEST_CASE("qr: rank-deficient input is rejected") {
    Matrix m(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        m(i, 0) = 1.0 + double(i);
        m(i, 1) = 2.0 * (1.0 + double(i));
    }
    CHECK_THROWS_AS(qr_orthonormalize(m), RankDeficient);
}

TEST_CASE("truncated_svd: diagonal input") {
    Matrix d(3, 3);
    d(0, 0) = 3;
    d(1, 1) = 2;
    d(2, 2) = 1;
    const TruncatedSvd svd = truncated_svd(d, 2);
    CHECK(svd.singular_values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(svd.singular_values[1] == doctest::Approx(2.0).epsilon(1e-14));
    // left spans e1, e2
    CHECK(std::abs(svd.left.mat()(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(svd.left.mat()(1, 1)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(svd.left.mat()(2, 0)) <= 1e-14);
    CHECK(std::abs(svd.left.mat()(2, 1)) <= 1e-14);
}

TEST_CASE("truncated_svd: rank-1 outer product") {
    Matrix u = test::random_matrix(5, 6, 1);
    Matrix v = test::random_matrix(6, 4, 1);
    const double nu = std::sqrt(kernels::active().dot(u.data(), u.data(), 6));
    const double nv = std::sqrt(kernels::active().dot(v.data(), v.data(), 4));
    for (std::size_t i = 0; i < 6; ++i) u.data()[i] /= nu;
    for (std::size_t i = 0; i < 4; ++i) v.data()[i] /= nv;
    Matrix a(6, 4);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = u.data()[i] * v.data()[j];
    const TruncatedSvd svd = truncated_svd(a, 1);
    CHECK(svd.singular_values[0] == doctest::Approx(1.0).epsilon(1e-12));
    double dot = 0;
    for (std::size_t i = 0; i < 6; ++i) dot += svd.left.mat()(i, 0) * u.data()[i];
    CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("truncated_svd: matches the full-SVD oracle on a random 40x30") {
    const Matrix a = test::random_matrix(77, 40, 30);
    const TruncatedSvd svd = truncated_svd(a, 5);
    const Eigen::VectorXd sv = oracle_singular_values(a);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(svd.singular_values[i] - sv(i)) <= 1e-10 * std::max(1.0, sv(0)));
    }
    Eigen::BDCSVD<Eigen::MatrixXd> full(to_eigen(a), Eigen::ComputeThinU);
    Matrix uo(40, 5);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 5; ++j) uo(i, j) = full.matrixU()(i, j);
    CHECK(oracle_subspace_gap(svd.left.mat(), uo) <= 1e-8);
}

TEST_CASE("truncated_svd: reconstruction error equals the next singular value") {
    for (std::uint64_t seed : {201u, 202u, 203u, 204u}) {
        const std::size_t n = 20 + 10 * (seed % 4);
        const Matrix a = test::random_matrix(seed, n, n);
        const std::size_t k = 4;
        const TruncatedSvd svd = truncated_svd(a, k);
        Matrix recon(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0;
                for (std::size_t l = 0; l < k; ++l)
                    s += svd.left.mat()(i, l) * svd.singular_values[l] * svd.right.mat()(j, l);
                recon(i, j) = s;
            }
        Matrix diff = a;
        add_scaled(diff, recon, -1.0);
        const Eigen::VectorXd sv = oracle_singular_values(a);
        CHECK(std::abs(spectral_norm(diff) - sv(k)) <= 1e-8);
    }
}

TEST_CASE("truncated_svd: wide inputs and rank-deficient completion") {
    const Matrix a = test::random_matrix(88, 10, 30);
    const TruncatedSvd svd = truncated_svd(a, 3);
    const Eigen::VectorXd sv = oracle_singular_values(a);
    for (int i = 0; i < 3; ++i) CHECK(svd.singular_values[i] == doctest::Approx(sv(i)).epsilon(1e-12));

    // rank-2 matrix, k = 3: the third left vector completes orthonormally with sigma = 0
    Matrix lowrank(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        lowrank(i, 0) = 1.0 + double(i);
        lowrank(i, 1) = std::cos(double(i));
        lowrank(i, 2) = lowrank(i, 0) + lowrank(i, 1);
    }
    const TruncatedSvd low = truncated_svd(lowrank, 3);
    CHECK(low.singular_values[2] <= 1e-13 * low.singular_values[0]);
    CHECK(low.left.orthonormality_residual() <= 1e-10);
}

TEST_CASE("truncated_svd: invalid rank") {
    const Matrix a = test::random_matrix(3, 4, 3);
    CHECK_THROWS_AS(truncated_svd(a, 0), InvalidRank);
    CHECK_THROWS_AS(truncated_svd(a, 4), InvalidRank);
}

TEST_CASE("degenerate inputs") {
    // zero matrix: all singular values 0, bases completed orthonormally
    const TruncatedSvd zero = truncated_svd(Matrix(5, 4), 2);
    CHECK(zero.singular_values[0] == 0.0);
    CHECK(zero.singular_values[1] == 0.0);
    CHECK(zero.left.orthonormality_residual() <= 1e-12);
    CHECK(zero.right.orthonormality_residual() <= 1e-12);

    // fully degenerate spectrum
    const EigResult id_eig = sym_top_eigvecs(Matrix::identity(5), 3);
    for (double lam : id_eig.eigenvalues) CHECK(lam == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(id_eig.vectors.orthonormality_residual() <= 1e-12);

    // 2x2 exchange matrix: eigenvalues +1/-1, top vector (1,1)/sqrt(2) sign-normalized
    const EigResult flip = sym_top_eigvecs(Matrix(2, 2, {0, 1, 1, 0}), 1);
    CHECK(flip.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(flip.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(flip.vectors.mat()(0, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(flip.vectors.mat()(1, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    // 1x1 spectral norm takes the absolute value
    CHECK(spectral_norm(Matrix(1, 1, {-3.0})) == doctest::Approx(3.0).epsilon(1e-13));

    // an exactly zero column is rank-deficient
    Matrix with_zero(3, 2);
    with_zero(0, 0) = 1.0;
    CHECK_THROWS_AS(qr_orthonormalize(with_zero), RankDeficient);
}

TEST_CASE("sym_top_eigvecs: diagonal cases") {
    Matrix d5(3, 3);
    d5(0, 0) = 5;
    d5(1, 1) = 1;
    d5(2, 2) = 1;
    const EigResult top = sym_top_eigvecs(d5, 1);
    CHECK(top.eigenvalues[0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(std::abs(top.vectors.mat()(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));

    Matrix d2(3, 3);
    d2(0, 0) = 2;
    d2(1, 1) = 1;
    d2(2, 2) = 1;
    const EigResult agg = sym_top_eigvecs(d2, 1);
    CHECK(std::abs(agg.vectors.mat()(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_top_eigvecs: oracle agreement on a random symmetric 20x20") {
    const Matrix s = test::random_symmetric(91, 20);
    const EigResult eig = sym_top_eigvecs(s, 20);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(s));
    for (int i = 0; i < 20; ++i) {
        CHECK(std::abs(eig.eigenvalues[i] - oracle.eigenvalues()(19 - i)) <= 1e-10);
    }
    // top-3 subspace agreement
    Matrix mine(20, 3), theirs(20, 3);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 3; ++j) {
            mine(i, j) = eig.vectors.mat()(i, j);
            theirs(i, j) = oracle.eigenvectors()(i, 19 - j);
        }
    CHECK(oracle_subspace_gap(mine, theirs) <= 1e-10);
}

TEST_CASE("sym_top_eigvecs: sign convention and validation errors") {
    const Matrix s = test::random_symmetric(17, 8);
    const EigResult eig = sym_top_eigvecs(s, 8);
    for (std::size_t j = 0; j < 8; ++j) {
        double best = 0;
        for (std::size_t i = 0; i < 8; ++i) {
            if (std::abs(eig.vectors.mat()(i, j)) > std::abs(best)) best = eig.vectors.mat()(i, j);
        }
        CHECK(best > 0.0);
    }
    CHECK_THROWS_AS(sym_top_eigvecs(test::random_matrix(1, 3, 4), 1), NotSquare);
    CHECK_THROWS_AS(sym_top_eigvecs(test::random_matrix(2, 5, 5), 1), NotSymmetric);
    CHECK_THROWS_AS(sym_top_eigvecs(s, 0), InvalidRank);
    CHECK_THROWS_AS(sym_top_eigvecs(s, 9), InvalidRank);
}

TEST_CASE("spectral_norm: diagonal, zero, transpose symmetry") {
    Matrix d(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 2;
    CHECK(spectral_norm(d) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(spectral_norm(Matrix(4, 6)) == 0.0);

    const Matrix a = test::random_matrix(55, 12, 7);
    CHECK(spectral_norm(a) == doctest::Approx(spectral_norm(a.transposed())).epsilon(1e-10));
    CHECK(spectral_norm(a) == doctest::Approx(oracle_spectral_norm(a)).epsilon(1e-10));
}

TEST_CASE("spectral_norm: difference of rank-2 projections lies in [0,1]") {
    const OrthonormalBasis p = qr_orthonormalize(test::random_matrix(61, 10, 2));
    const OrthonormalBasis q = qr_orthonormalize(test::random_matrix(62, 10, 2));
    Matrix diff = projector(p);
    add_scaled(diff, projector(q), -1.0);
    const double v = spectral_norm(diff);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v == doctest::Approx(oracle_spectral_norm(diff)).epsilon(1e-10));
}

TEST_CASE("project_out: coordinate cases and idempotence") {
    const OrthonormalBasis e1(Matrix(3, 1, {1, 0, 0}));
    const Matrix ve1(3, 1, {1, 0, 0});
    const Matrix ve2(3, 1, {0, 1, 0});
    CHECK(project_out(ve1, e1).max_abs() == 0.0);
    const Matrix kept = project_out(ve2, e1);
    CHECK(kept(1, 0) == 1.0);

    const Matrix m = test::random_matrix(71, 10, 4);
    const OrthonormalBasis b = qr_orthonormalize(test::random_matrix(72, 10, 2));
    const Matrix once = project_out(m, b);
    const Matrix twice = project_out(once, b);
    CHECK(test::max_abs_diff(once, twice) <= 1e-12);
    const Matrix coef = matmul_tn(b.mat(), once);
    CHECK(coef.max_abs() <= 1e-10);

    CHECK_THROWS_AS(project_out(test::random_matrix(1, 5, 2), b), DimensionMismatch);
}

TEST_CASE("top_left_singular_basis agrees with truncated_svd") {
    for (auto [seed, rows, cols] : {std::tuple{301u, 30u, 12u}, {302u, 12u, 30u}, {303u, 15u, 15u}}) {
        const Matrix a = test::random_matrix(seed, rows, cols);
        const OrthonormalBasis fast = top_left_singular_basis(a, 4);
        const OrthonormalBasis slow = truncated_svd(a, 4).left;
        CHECK(subspace_error(fast, slow) <= 1e-8);
    }
}

TEST_CASE("sym_eigenvalues matches the eigenvector route") {
    const Matrix s = test::random_symmetric(121, 15);
    const EigResult full = sym_top_eigvecs(s, 15);
    const std::vector<double> vals = sym_eigenvalues(s);
    for (std::size_t i = 0; i < 15; ++i) {
        CHECK(vals[i] == doctest::Approx(full.eigenvalues[i]).epsilon(1e-12));
    }
}
