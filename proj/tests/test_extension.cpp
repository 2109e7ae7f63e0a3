#include "hypercone/extension.hpp"

#include "hypercone/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypercone;

namespace {

FiniteMetricSpace line3() {
    Matrix D(3, 3);
    D << 0, 1, 2,
         1, 0, 1,
         2, 1, 0;
    return validate_metric(D);
}

FiniteMetricSpace scaled(const FiniteMetricSpace& S, Scalar c) {
    return validate_metric(Matrix(c * S.dist), 1e-9, S.labels);
}

PointMap shuffled_map(Index n, std::uint64_t seed) {
    PointMap f = identity_map(n);
    SeededRng rng(seed);
    for (Index i = n - 1; i > 0; --i)
        std::swap(f.pairing[static_cast<std::size_t>(i)],
                  f.pairing[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    return f;
}

// Gapped line: distances {1/32, 31/32, 1} leave the levels {0, 5} at point 0.
FiniteMetricSpace gapped_line() {
    Matrix D(3, 3);
    D << 0, 1.0 / 32, 1,
         1.0 / 32, 0, 31.0 / 32,
         1, 31.0 / 32, 0;
    return validate_metric(D);
}

} // namespace

TEST_CASE("annulus index") {
    CHECK(annulus_index(1.0) == 0);
    CHECK(annulus_index(2.0) == -1);
    CHECK(annulus_index(0.125) == 3);
    CHECK(annulus_index(0.75) == 0);

    SUBCASE("dyadic boundaries land on their own level") {
        for (int k = -40; k <= 40; ++k) {
            const Scalar d = std::ldexp(1.0, -k);
            CHECK(annulus_index(d) == k);
            CHECK(annulus_index(std::nextafter(d, 2 * d)) == k - 1);
            CHECK(annulus_index(std::nextafter(d, 0.0)) == k);
        }
    }
    SUBCASE("agrees with the boundary-scan oracle") {
        SeededRng rng(5);
        for (int i = 0; i < 5000; ++i) {
            const Scalar d = std::exp2(-30 + 38 * rng.unit());
            CHECK(annulus_index(d) == oracles::annulus(d));
        }
    }
    SUBCASE("rejects non-positive input") {
        CHECK_THROWS_AS(annulus_index(0.0), std::domain_error);
        CHECK_THROWS_AS(annulus_index(-1.0), std::domain_error);
        CHECK_THROWS_AS(annulus_index(std::numeric_limits<Scalar>::infinity()),
                        std::domain_error);
    }
}

TEST_CASE("log2_inverse is exact on powers of two") {
    for (int k = -60; k <= 60; ++k)
        CHECK(log2_inverse(std::ldexp(1.0, k)) == static_cast<Scalar>(-k));
    SeededRng rng(6);
    for (int i = 0; i < 2000; ++i) {
        const Scalar t = std::exp2(-10 + 20 * rng.unit());
        CHECK(std::exp2(-log2_inverse(t)) == doctest::Approx(t).epsilon(1e-14));
    }
    CHECK_THROWS_AS(log2_inverse(0.0), std::domain_error);
}

TEST_CASE("scale spectrum of the 3-point line") {
    const FiniteMetricSpace S = line3();
    const ScaleSpectrum s0 = scale_spectrum(S, 0);
    CHECK(s0.levels == std::vector<int>{-1, 0});
    CHECK(s0.m == -1);
    CHECK(s0.M == 0);
    const ScaleSpectrum s1 = scale_spectrum(S, 1);
    CHECK(s1.levels == std::vector<int>{0});
}

TEST_CASE("scaling the space by 4 shifts every level by -2") {
    const FiniteMetricSpace S = generate_space(SpaceKind::euclidean_cloud, 10, 3);
    const FiniteMetricSpace T = scaled(S, 4.0);
    for (Index x = 0; x < S.n(); ++x) {
        const ScaleSpectrum a = scale_spectrum(S, x);
        const ScaleSpectrum b = scale_spectrum(T, x);
        REQUIRE(a.levels.size() == b.levels.size());
        for (std::size_t i = 0; i < a.levels.size(); ++i)
            CHECK(b.levels[i] == a.levels[i] - 2);
    }
}

TEST_CASE("image level computations") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 12, 4);
    const PointMap id = identity_map(12);
    SUBCASE("identity keeps every level") {
        for (Index x = 0; x < Z.n(); ++x)
            for (int l : scale_spectrum(Z, x).levels)
                CHECK(image_level(Z, Z, id, x, l) == l);
    }
    SUBCASE("doubling the target shifts levels down by one") {
        const FiniteMetricSpace W = scaled(Z, 2.0);
        for (Index x = 0; x < Z.n(); ++x)
            for (int l : scale_spectrum(Z, x).levels)
                CHECK(image_level(Z, W, id, x, l) == l - 1);
    }
    SUBCASE("matches the definition oracle and is monotone") {
        const FiniteMetricSpace W = snowflake_space(Z, 0.5);
        const PointMap f = shuffled_map(12, 9);
        for (Index x = 0; x < Z.n(); ++x) {
            int prev = 0;
            bool first = true;
            for (int l : scale_spectrum(Z, x).levels) {
                const int v = image_level(Z, W, f, x, l);
                CHECK(v == oracles::phi(Z, W, f, x, l));
                if (!first) CHECK(v >= prev);
                prev = v;
                first = false;
            }
        }
    }
    SUBCASE("level outside the spectrum is rejected") {
        const int beyond = scale_spectrum(Z, 0).M + 40;
        CHECK_THROWS_AS(image_level(Z, Z, id, 0, beyond), LevelNotInSpectrumError);
    }
}

TEST_CASE("piecewise evaluation on synthetic maps") {
    SUBCASE("single breakpoint extends with unit slope") {
        PiecewiseLinearMap m;
        m.knots = {5};
        m.values = {3};
        CHECK(eval_piecewise(m, 7.0) == 5.0);
        CHECK(eval_piecewise(m, 0.0) == -2.0);
        CHECK(eval_piecewise(m, 5.0) == 3.0);
    }
    SUBCASE("interpolation across a gap") {
        PiecewiseLinearMap m;
        m.knots = {0, 4};
        m.values = {1, 2};
        CHECK(eval_piecewise(m, 3.0) == 1.75);
        CHECK(eval_piecewise(m, 0.0) == 1.0);
        CHECK(eval_piecewise(m, 4.0) == 2.0);
    }
    SUBCASE("empty map is rejected") {
        CHECK_THROWS_AS(eval_piecewise(PiecewiseLinearMap{}, 0.0), std::invalid_argument);
    }
}

TEST_CASE("level map of the identity is the identity") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 15, 8);
    const PointMap id = identity_map(15);
    for (Index x = 0; x < Z.n(); ++x) {
        const PiecewiseLinearMap m = build_level_map(Z, Z, id, x);
        CHECK(m.knots == m.values);
        for (Scalar t = -14; t <= 14; t += 0.37)
            CHECK(eval_piecewise(m, t) == doctest::Approx(t).epsilon(1e-12));
    }
}

TEST_CASE("level map of a singleton spectrum is a unit-slope line") {
    Matrix D(3, 3); // equilateral, every spectrum is {0}
    D << 0, 1, 1,
         1, 0, 1,
         1, 1, 0;
    const FiniteMetricSpace S = validate_metric(D);
    const PiecewiseLinearMap m = build_level_map(S, S, identity_map(3), 0);
    CHECK(m.knots == std::vector<Scalar>{0});
    CHECK(eval_piecewise(m, 7.0) == 7.0);
    CHECK(eval_piecewise(m, -17.5) == -17.5);
}

TEST_CASE("level map properties on generated instances") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 14, 10);
    const FiniteMetricSpace W = snowflake_space(Z, 0.5);
    const PointMap f = shuffled_map(14, 4);
    SeededRng rng(7);
    for (Index x = 0; x < Z.n(); ++x) {
        const PiecewiseLinearMap m = build_level_map(Z, W, f, x);

        // knots strictly increasing, values non-decreasing
        for (std::size_t i = 1; i < m.knots.size(); ++i) {
            CHECK(m.knots[i] > m.knots[i - 1]);
            CHECK(m.values[i] >= m.values[i - 1]);
        }

        // stored value is returned exactly at a knot; limits agree either side
        for (std::size_t i = 0; i < m.knots.size(); ++i) {
            CHECK(eval_piecewise(m, m.knots[i]) == m.values[i]);
            const Scalar eps = 1e-12;
            CHECK(std::abs(eval_piecewise(m, m.knots[i] - eps) - m.values[i]) <= 1e-9);
            CHECK(std::abs(eval_piecewise(m, m.knots[i] + eps) - m.values[i]) <= 1e-9);
        }

        // non-decreasing on random arguments, surjective tails
        Scalar prev = eval_piecewise(m, -50.0);
        for (Scalar t = -49.5; t <= 50; t += 0.5) {
            const Scalar v = eval_piecewise(m, t);
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(eval_piecewise(m, -1e6) < -9e5);
        CHECK(eval_piecewise(m, 1e6) > 9e5);

        // oracle agreement across the whole line
        for (int i = 0; i < 60; ++i) {
            const Scalar t = m.knots.front() - 6 + rng.unit() * (m.knots.back() - m.knots.front() + 12);
            CHECK(eval_piecewise(m, t) ==
                  doctest::Approx(oracles::level_map_eval(Z, W, f, x, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("evaluation is affine on the three interval kinds") {
    const FiniteMetricSpace Z = gapped_line();
    const FiniteMetricSpace W = snowflake_space(Z, 0.5);
    const PointMap id = identity_map(3);
    const PiecewiseLinearMap m = build_level_map(Z, W, id, 0);
    REQUIRE(m.knots == std::vector<Scalar>{0, 5}); // a genuine gap

    auto check_affine = [&](Scalar u, Scalar v) {
        for (Scalar mu : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Scalar t = (1 - mu) * u + mu * v;
            const Scalar want = (1 - mu) * eval_piecewise(m, u) + mu * eval_piecewise(m, v);
            CHECK(eval_piecewise(m, t) == doctest::Approx(want).epsilon(1e-12));
        }
    };
    check_affine(-7.0, -2.0); // left tail
    check_affine(0.0, 5.0);   // gap interval
    check_affine(1.0, 4.0);   // inside the gap
    check_affine(6.0, 11.0);  // right tail
}

TEST_CASE("extending the identity map is the identity on the cone") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 10, 12);
    const ConeMapExtension ext = extend_map(Z, Z, identity_map(10));
    for (Index x = 0; x < Z.n(); ++x)
        for (int k = -10; k <= 10; ++k) {
            const ConePoint p(x, std::ldexp(1.0, k));
            const ConePoint q = apply_extension(ext, p);
            CHECK(q.base == x);
            CHECK(q.height == p.height);
        }
}

TEST_CASE("doubling the target doubles every image height") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 10, 4);
    const ConeMapExtension ext = extend_map(Z, scaled(Z, 2.0), identity_map(10));
    for (Index x = 0; x < Z.n(); ++x) {
        for (int k = -8; k <= 8; ++k) {
            const ConePoint q = apply_extension(ext, ConePoint(x, std::ldexp(1.0, k)));
            CHECK(q.height == 2 * std::ldexp(1.0, k));
        }
        for (Scalar t : {0.3, 0.7, 1.9, 5.3}) {
            const ConePoint q = apply_extension(ext, ConePoint(x, t));
            CHECK(q.height == doctest::Approx(2 * t).epsilon(1e-12));
        }
    }
}

TEST_CASE("image heights are monotone along every ray") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 12, 6);
    const FiniteMetricSpace W = snowflake_space(Z, 1.0 / 3.0);
    const PointMap f = shuffled_map(12, 13);
    const ConeMapExtension ext = extend_map(Z, W, f);
    SeededRng rng(9);
    for (Index x = 0; x < Z.n(); ++x) {
        Scalar t = std::exp2(-12.0);
        Scalar prev = apply_extension(ext, ConePoint(x, t)).height;
        for (int i = 0; i < 200; ++i) {
            t *= 1 + rng.unit();
            const Scalar cur = apply_extension(ext, ConePoint(x, t)).height;
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("identity extension survives extreme dyadic rescaling") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 6, 3);
    for (int e : {-600, 600}) {
        const Scalar c = std::ldexp(1.0, e);
        const FiniteMetricSpace S = validate_metric(Matrix(c * Z.dist), 1e-9, Z.labels);
        const ConeMapExtension ext = extend_map(S, S, identity_map(6));
        for (Index x = 0; x < 6; ++x)
            for (int k = -4; k <= 4; ++k) {
                const ConePoint p(x, std::ldexp(1.0, e + k));
                const ConePoint q = apply_extension(ext, p);
                CHECK(q.height == p.height);
            }
    }
}

TEST_CASE("extension keeps the pairing") {
    const FiniteMetricSpace Z = generate_space(SpaceKind::euclidean_cloud, 8, 2);
    const PointMap f = shuffled_map(8, 21);
    const ConeMapExtension ext = extend_map(Z, Z, f);
    for (Index x = 0; x < Z.n(); ++x)
        CHECK(apply_extension(ext, ConePoint(x, 1.0)).base == f[x]);
}
