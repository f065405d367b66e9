#include <doctest.h>

#include <cmath>
#include <limits>

#include <vlint/errors.hpp>
#include <vlint/linalg.hpp>

#include "oracles.hpp"

using namespace vlint;

TEST_CASE("matrix basics")
{
    const matrix a{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(a.rows() == 2);
    CHECK(a(1, 0) == 3.0);
    CHECK(a.transpose()(0, 1) == 3.0);
    CHECK((a * matrix::identity(2)) == a);
    const auto ab = a * matrix{{0.0, 1.0}, {1.0, 0.0}};
    CHECK(ab == matrix{{2.0, 1.0}, {4.0, 3.0}});
    CHECK((a + a) == 2.0 * a);
    CHECK((a - a) == matrix(2, 2));
    const vector x{1.0, -1.0};
    CHECK((a * x) == vector{-1.0, -1.0});
    CHECK(norm_inf(x) == 1.0);
    CHECK(norm_1(a) == 6.0);
    CHECK(norm_inf(a) == 7.0);
    CHECK(max_abs(a) == 4.0);

    const auto k = kron(matrix{{1.0, 2.0}}, matrix::identity(2));
    CHECK(k == matrix{{1.0, 0.0, 2.0, 0.0}, {0.0, 1.0, 0.0, 2.0}});

    matrix big(3, 3);
    big.set_block(1, 1, a);
    big.add_block(1, 1, a, -0.5);
    CHECK(big(2, 2) == 2.0);
    CHECK(big(0, 0) == 0.0);
}

TEST_CASE("lu_solve small systems")
{
    const vector b{1.0, 2.0, 3.0};
    CHECK(lu_solve(matrix::identity(3), b) == b);

    const auto x = lu_solve(matrix{{0.0, 1.0}, {-1.0, 0.0}}, vector{1.0, 0.0});
    CHECK(x[0] == 0.0);
    CHECK(x[1] == 1.0);

    CHECK_THROWS_AS(lu_solve(matrix{{1.0, 2.0}, {2.0, 4.0}}, vector{1.0, 1.0}), singular_matrix);
    CHECK_THROWS_AS(lu_solve(matrix(2, 2), vector{1.0, 1.0}), singular_matrix);
}

TEST_CASE("lu_solve round trip on random matrices")
{
    auto g = oracle::rng(7);
    for (std::size_t n : {3u, 20u, 64u}) {
        // SPD: B Bᵀ + n I.
        matrix bm(n, n);
        for (auto& v : bm.entries()) {
            v = oracle::uniform(g, -1.0, 1.0);
        }
        const matrix spd = bm * bm.transpose() + static_cast<double>(n) * matrix::identity(n);
        for (const matrix* a : {static_cast<const matrix*>(&bm), &spd}) {
            vector x(n);
            for (auto& v : x) {
                v = oracle::uniform(g, -1.0, 1.0);
            }
            const vector rhs = *a * x;
            const vector sol = lu_solve(*a, rhs);
            const vector back = *a * sol;
            double r = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                r = std::max(r, std::abs(back[i] - rhs[i]));
            }
            CHECK(r <= 1e-11 * norm_inf(*a) * norm_inf(sol));
        }
        const matrix inv = lu_decomposition(spd).inverse();
        CHECK(max_abs(spd * inv - matrix::identity(n)) < 1e-12);
    }
}

TEST_CASE("condition_estimate")
{
    CHECK(condition_estimate(matrix::identity(4)) == 1.0);
    CHECK(condition_estimate(matrix{{1.0, 0.0}, {0.0, 1e-8}}) == doctest::Approx(1e8));
    CHECK(condition_estimate(matrix{{1.0, 1.0}, {1.0, 1.0}}) == std::numeric_limits<double>::infinity());
}

TEST_CASE("fd_jacobian")
{
    const vector x{0.3, -2.0, 5.0};
    const auto id = fd_jacobian([](std::span<const double> v) { return vector(v.begin(), v.end()); }, x);
    CHECK(max_abs(id - matrix::identity(3)) < 1e-12);

    const auto j = fd_jacobian(
        [](std::span<const double> v) {
            return vector{v[0] * v[0], v[0] * v[1]};
        },
        vector{1.0, 1.0});
    CHECK(max_abs(j - matrix{{2.0, 0.0}, {1.0, 1.0}}) < 1e-8);

    const auto f = [](std::span<const double> v) {
        return vector{std::sin(v[0]) * v[1], std::exp(v[1]) - v[0] * v[0] * v[0]};
    };
    const vector p{0.7, -0.4};
    const matrix exact{{std::cos(0.7) * -0.4, std::sin(0.7)}, {-3.0 * 0.49, std::exp(-0.4)}};
    CHECK(oracle::relative_gap(fd_jacobian(f, p), exact) < 1e-6);
    CHECK(oracle::relative_gap(fd_jacobian(f, p, 1e-4), exact) < 1e-6);
}
