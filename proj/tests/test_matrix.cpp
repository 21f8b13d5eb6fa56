#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "jive/matrix.hpp"
#include "test_util.hpp"

using namespace jive;

TEST_CASE("matrix construction validates shape and finiteness") {
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), DimensionMismatch);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}),
                    NonFiniteEntry);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}),
                    NonFiniteEntry);
    const Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(m(0, 0) == 1.0);
    CHECK(m(1, 2) == 6.0);
    CHECK(m.transposed()(2, 1) == 6.0);
}

TEST_CASE("orthonormal basis enforces the column-orthonormality invariant") {
    CHECK_NOTHROW(OrthonormalBasis(Matrix::identity(4)));
    CHECK_THROWS(OrthonormalBasis(Matrix(2, 2, {1, 1, 0, 1})));
    // more columns than rows is impossible
    CHECK_THROWS_AS(OrthonormalBasis(Matrix(1, 2, {1, 0})), DimensionMismatch);
    const OrthonormalBasis b(Matrix(2, 1, {0.6, 0.8}));
    CHECK(b.orthonormality_residual() <= 1e-15);
}

TEST_CASE("truncated svd bundle validates ordering") {
    OrthonormalBasis l(Matrix::identity(2));
    OrthonormalBasis r(Matrix::identity(2));
    CHECK_NOTHROW(TruncatedSvd(l, {2.0, 1.0}, r));
    CHECK_THROWS(TruncatedSvd(l, {1.0, 2.0}, r));
    CHECK_THROWS_AS(TruncatedSvd(l, {1.0}, r), DimensionMismatch);
}

TEST_CASE("matrix text format round-trips bits") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const Matrix m = test::random_matrix(seed, 7, 5, std::pow(10.0, double(seed % 5) - 2));
        const Matrix back = parse_matrix(format_matrix(m));
        REQUIRE(back.rows() == m.rows());
        REQUIRE(back.cols() == m.cols());
        for (std::size_t i = 0; i < m.size(); ++i) CHECK(back.data()[i] == m.data()[i]);
    }
}

TEST_CASE("matrix text format shape") {
    const Matrix m(2, 2, {1.0, 0.5, -3.25, 1e-17});
    const std::string text = format_matrix(m);
    CHECK(text.substr(0, 4) == "2 2\n");
    CHECK(parse_matrix(text)(1, 1) == 1e-17);
    CHECK_THROWS_AS(parse_matrix("2 2\n1 2\n3\n"), IoError);
    CHECK_THROWS_AS(parse_matrix("junk"), IoError);
}
