#include "hypercone/metric_space.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypercone;

namespace {

Matrix line3() {
    Matrix D(3, 3);
    D << 0, 1, 2,
         1, 0, 1,
         2, 1, 0;
    return D;
}

Matrix unit_square() {
    const Scalar r2 = std::sqrt(2.0);
    Matrix D(4, 4);
    D << 0, 1, r2, 1,
         1, 0, 1, r2,
         r2, 1, 0, 1,
         1, r2, 1, 0;
    return D;
}

} // namespace

TEST_CASE("validate accepts a 3-point line") {
    const FiniteMetricSpace S = validate_metric(line3());
    CHECK(S.n() == 3);
    CHECK(S.diameter() == 2.0);
}

TEST_CASE("validate rejects bad matrices with witnesses") {
    SUBCASE("triangle violation names the triple") {
        Matrix D(3, 3);
        D << 0, 1, 5,
             1, 0, 1,
             5, 1, 0;
        try {
            validate_metric(D);
            FAIL("expected TriangleError");
        } catch (const TriangleError& e) {
            CHECK(e.i == 0);
            CHECK(e.j == 1);
            CHECK(e.k == 2);
        }
    }
    SUBCASE("too few points") {
        Matrix D(2, 2);
        D << 0, 1, 1, 0;
        CHECK_THROWS_AS(validate_metric(D), TooFewPointsError);
    }
    SUBCASE("asymmetry") {
        Matrix D = line3();
        D(0, 1) = 1.1;
        CHECK_THROWS_AS(validate_metric(D), AsymmetryError);
    }
    SUBCASE("zero off-diagonal") {
        Matrix D = line3();
        D(0, 1) = D(1, 0) = 0;
        CHECK_THROWS_AS(validate_metric(D), NonPositiveError);
    }
    SUBCASE("nonzero diagonal") {
        Matrix D = line3();
        D(1, 1) = 0.5;
        CHECK_THROWS_AS(validate_metric(D), NonPositiveError);
    }
    SUBCASE("not square") {
        CHECK_THROWS_AS(validate_metric(Matrix::Zero(3, 4)), std::invalid_argument);
    }
    SUBCASE("tolerance pardons tiny slack") {
        Matrix D = line3();
        D(0, 2) = D(2, 0) = 2 * (1 + 1e-12);
        CHECK_NOTHROW(validate_metric(D, 1e-9));
        CHECK_THROWS_AS(validate_metric(D, 1e-15), TriangleError);
    }
}

TEST_CASE("gromov product basics") {
    Matrix D(3, 3);
    D << 0, 2, 2,
         2, 0, 2,
         2, 2, 0;
    const FiniteMetricSpace S = validate_metric(D);
    CHECK(gromov_product(S, 0, 1, 2) == 1.0);       // equilateral, side 2
    CHECK(gromov_product(S, 0, 2, 2) == 0.0);       // (x|o)_o
    CHECK(gromov_product(S, 0, 0, 2) == S.d(0, 2)); // (x|x)_o
    CHECK_THROWS_AS(gromov_product(S, 0, 1, 3), std::out_of_range);
}

TEST_CASE("gromov product is non-negative on generated spaces") {
    for (auto kind : {SpaceKind::euclidean_cloud, SpaceKind::tree_metric, SpaceKind::circle,
                      SpaceKind::grid}) {
        const FiniteMetricSpace S = generate_space(kind, 12, 5);
        for (Index x = 0; x < S.n(); ++x)
            for (Index y = 0; y < S.n(); ++y)
                for (Index o = 0; o < S.n(); ++o)
                    CHECK(gromov_product(S, x, y, o) >= -1e-12);
    }
}

TEST_CASE("delta of a path metric is zero") {
    Matrix D(4, 4);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) D(i, j) = std::abs(static_cast<Scalar>(i - j));
    const DeltaEstimate est = delta_hyperbolicity(D);
    CHECK(est.exhaustive);
    CHECK(est.delta == 0.0);
    CHECK(oracles::delta(D) <= 0.0);
}

TEST_CASE("delta of the unit square is sqrt(2) - 1") {
    const Matrix D = unit_square();
    const Scalar want = std::sqrt(2.0) - 1;
    const Scalar ref = oracles::delta(D);
    CHECK(ref == doctest::Approx(want).epsilon(1e-12));
    const DeltaEstimate est = delta_hyperbolicity(D);
    CHECK(est.delta == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("three-point spaces are 0-hyperbolic") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const FiniteMetricSpace S = generate_space(SpaceKind::euclidean_cloud, 3, seed);
        CHECK(delta_hyperbolicity(S).delta == 0.0);
    }
    Matrix scalene(3, 3);
    scalene << 0, 3, 4,
               3, 0, 5,
               4, 5, 0;
    CHECK(delta_hyperbolicity(scalene).delta == 0.0);
}

TEST_CASE("delta scales linearly with the metric") {
    const FiniteMetricSpace S = generate_space(SpaceKind::euclidean_cloud, 9, 17);
    const Scalar base = delta_hyperbolicity(S).delta;
    const Scalar scaled = delta_hyperbolicity(Matrix(3.0 * S.dist)).delta;
    CHECK(scaled == doctest::Approx(3 * base).epsilon(1e-9));
}

TEST_CASE("sampling that covers all quadruples equals the exhaustive scan") {
    const FiniteMetricSpace S = generate_space(SpaceKind::euclidean_cloud, 6, 2);
    DeltaOptions forced;
    forced.exhaustive_cutoff = 0;
    forced.sample_quadruples = 6ull * 6 * 6 * 6;
    const DeltaEstimate full = delta_hyperbolicity(S);
    const DeltaEstimate covered = delta_hyperbolicity(S, forced);
    CHECK(covered.exhaustive);
    CHECK(covered.delta == full.delta);

    DeltaOptions partial;
    partial.exhaustive_cutoff = 0;
    partial.sample_quadruples = 500;
    const DeltaEstimate sampled = delta_hyperbolicity(S, partial);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.quadruples == 500);
    CHECK(sampled.delta <= full.delta);
}

TEST_CASE("snowflake transform") {
    SUBCASE("alpha = 1 is the identity") {
        const FiniteMetricSpace S = generate_space(SpaceKind::euclidean_cloud, 8, 3);
        const FiniteMetricSpace T = snowflake_space(S, 1.0);
        CHECK(T.dist == S.dist);
    }
    SUBCASE("line {0,1,4} at alpha = 1/2") {
        Matrix D(3, 3);
        D << 0, 1, 4,
             1, 0, 3,
             4, 3, 0;
        const FiniteMetricSpace T = snowflake_space(validate_metric(D), 0.5);
        CHECK(T.d(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(T.d(1, 2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
        CHECK(T.d(0, 2) == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("exponent out of range") {
        const FiniteMetricSpace S = generate_space(SpaceKind::euclidean_cloud, 5, 3);
        CHECK_THROWS_AS(snowflake_space(S, 2.0), AlphaOutOfRangeError);
        CHECK_THROWS_AS(snowflake_space(S, 0.0), AlphaOutOfRangeError);
        CHECK_THROWS_AS(snowflake_space(S, -0.5), AlphaOutOfRangeError);
    }
    SUBCASE("output revalidates for every alpha in (0,1]") {
        for (auto kind : {SpaceKind::euclidean_cloud, SpaceKind::tree_metric,
                          SpaceKind::circle, SpaceKind::grid})
            for (Scalar alpha : {0.25, 0.5, 0.75, 1.0})
                CHECK_NOTHROW(snowflake_space(generate_space(kind, 10, 4), alpha));
    }
}

TEST_CASE("generators are deterministic and valid") {
    SUBCASE("bitwise identical repeats") {
        for (auto kind : {SpaceKind::euclidean_cloud, SpaceKind::tree_metric,
                          SpaceKind::circle, SpaceKind::grid}) {
            const FiniteMetricSpace a = generate_space(kind, 5, 7);
            const FiniteMetricSpace b = generate_space(kind, 5, 7);
            CHECK(a.dist == b.dist);
        }
    }
    SUBCASE("tree metrics are exactly 0-hyperbolic") {
        const FiniteMetricSpace S = generate_space(SpaceKind::tree_metric, 10, 1);
        CHECK(delta_hyperbolicity(S).delta == 0.0);
    }
    SUBCASE("circle matches the 4-cycle path metric") {
        GenParams params;
        params.circumference = 1.0;
        const FiniteMetricSpace S = generate_space(SpaceKind::circle, 4, 0, params);
        CHECK(S.d(0, 1) == 0.25);
        CHECK(S.d(0, 2) == 0.5);
        CHECK(S.d(1, 3) == 0.5);
        CHECK(S.d(0, 3) == 0.25);
    }
    SUBCASE("n below 3 is rejected") {
        CHECK_THROWS_AS(generate_space(SpaceKind::euclidean_cloud, 2, 1), TooFewPointsError);
    }
    SUBCASE("clouds nest by prefix for a fixed seed") {
        const FiniteMetricSpace a = generate_space(SpaceKind::euclidean_cloud, 20, 19);
        const FiniteMetricSpace b = generate_space(SpaceKind::euclidean_cloud, 40, 19);
        CHECK(a.dist == b.dist.topLeftCorner(20, 20));
    }
}

TEST_CASE("space hash separates spaces and survives copies") {
    const FiniteMetricSpace a = generate_space(SpaceKind::euclidean_cloud, 8, 1);
    const FiniteMetricSpace b = generate_space(SpaceKind::euclidean_cloud, 8, 2);
    const FiniteMetricSpace c = a;
    CHECK(space_hash(a) != space_hash(b));
    CHECK(space_hash(a) == space_hash(c));
}
