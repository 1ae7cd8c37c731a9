#include <catch_amalgamated.hpp>

#include <stdexcept>

#include "lldpd/linalg.hpp"

using namespace lldpd;
using Catch::Matchers::WithinAbs;

TEST_CASE("inverse of a 2x2 matrix", "[linalg]") {
    const Matrix a(2, 2, {4.0, 1.0, 2.0, 3.0});
    const Matrix p = a * inverse(a);
    CHECK_THAT(p(0, 0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(p(0, 1), WithinAbs(0.0, 1e-15));
    CHECK_THAT(p(1, 0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(p(1, 1), WithinAbs(1.0, 1e-15));
    CHECK_THAT(inverse(Matrix(1, 1, {4.0}))(0, 0), WithinAbs(0.25, 0.0));
}

TEST_CASE("ill-conditioned matrices are rejected", "[linalg]") {
    CHECK_THROWS_AS(inverse(Matrix(2, 2, {1.0, 2.0, 2.0, 4.0})), std::domain_error);
    CHECK_THROWS_AS(inverse(Matrix(2, 2, {1.0, 0.0, 0.0, 1e-13})), std::domain_error);
    CHECK_NOTHROW(inverse(Matrix(2, 2, {1.0, 0.0, 0.0, 1e-11})));
}

TEST_CASE("condition number and eigenvalues", "[linalg]") {
    CHECK_THAT(condition_number(Matrix::symmetric2(4.0, 0.0, 1.0)), WithinAbs(4.0, 1e-12));
    const Vec2 ev = symmetric_eigenvalues(Matrix::symmetric2(2.0, 1.0, 2.0));
    CHECK_THAT(ev[0], WithinAbs(1.0, 1e-14));
    CHECK_THAT(ev[1], WithinAbs(3.0, 1e-14));
}

TEST_CASE("products, transpose and quadratic forms", "[linalg]") {
    const Matrix m(2, 1, {1.0, 2.0});
    const Matrix a = Matrix::symmetric2(2.0, 0.5, 1.0);
    CHECK_THAT(quadratic_form(m, a), WithinAbs(2.0 + 2.0 + 4.0, 1e-15));
    const Matrix mt = m.transpose();
    CHECK(mt.rows() == 1);
    CHECK(mt.cols() == 2);
    const Matrix outer = m * mt;
    CHECK(outer(1, 1) == 4.0);
    const Matrix sum = a + Matrix::identity(2) - 2.0 * a;
    CHECK(sum(0, 0) == -1.0);
}
