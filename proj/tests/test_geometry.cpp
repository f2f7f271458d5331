#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace cpn;

namespace {

constexpr auto pi = std::numbers::pi;

auto cp1_seed() -> SeedVector { return SeedVector{2, {{1.0}, {0.0, 1.0}}, "cp1"}; }

} // namespace

TEST(Metric, VeroneseValues)
{
    auto gen = test::rng(60);
    for (auto trial = 0; trial < 20; ++trial)
    {
        auto const xi = test::random_complex(gen, 2.0);
        auto const r = std::norm(xi);
        auto const ladder = build_ladder(veronese_seed(3), xi, 2);
        auto const g0 = 1.0 / ((1.0 + r) * (1.0 + r));
        auto const expected = std::array<double, 3>{g0, 2.0 * g0, g0};
        for (auto k = 0; k < 3; ++k)
        {
            auto const m = metric_at(ladder, k);
            EXPECT_NEAR(m.g12, expected[static_cast<std::size_t>(k)], 1e-12);
            EXPECT_NEAR(m.g12_projector, m.g12, 1e-10);
        }
    }
    auto const origin = build_ladder(veronese_seed(3), 0.0, 2);
    EXPECT_NEAR(metric_at(origin, 0).g12, 1.0, 1e-15);
    EXPECT_NEAR(metric_at(origin, 1).g12, 2.0, 1e-15);
}

TEST(Metric, ConformalAndPositive)
{
    auto gen = test::rng(61);
    for (auto trial = 0; trial < 100; ++trial)
    {
        auto const n = 2 + trial % 4;
        auto const seed = trial % 5 == 0 ? veronese_seed(n) : test::random_seed(gen, n);
        auto const ladder = build_ladder(seed, test::random_complex(gen, 2.0), 2);
        for (auto k = 0; k < n; ++k)
        {
            auto const m = metric_at(ladder, k);
            EXPECT_GT(m.g12, 0.0);
            EXPECT_LT(std::abs(m.J), 1e-8);
            EXPECT_LT(std::abs(m.Jbar), 1e-8);
            EXPECT_LT(std::abs(m.J_projector), 1e-8);
            EXPECT_LT(std::abs(m.Jbar_projector), 1e-8);
            EXPECT_NEAR(m.g12_projector, m.g12, 1e-10 * std::max(1.0, m.g12));
        }
    }
}

TEST(Curvature, VeroneseConstants)
{
    auto gen = test::rng(62);
    auto const K = std::array<double, 3>{2.0, 1.0, 2.0};
    auto const H = std::array<double, 3>{16.0, 4.0, 16.0};
    for (auto trial = 0; trial < 20; ++trial)
    {
        auto const xi = test::random_complex(gen, 2.0);
        auto const ladder = build_ladder(veronese_seed(3), xi, 3);
        for (auto k = 0; k < 3; ++k)
        {
            auto const c = curvature_at(ladder, k);
            EXPECT_NEAR(c.gauss_K, K[static_cast<std::size_t>(k)], 1e-8);
            EXPECT_NEAR(c.H_norm_sq, H[static_cast<std::size_t>(k)], 1e-8);
            auto const gamma = -2.0 * std::conj(xi) / (1.0 + std::norm(xi));
            EXPECT_LT(std::abs(c.christoffel_111 - gamma), 1e-10);
            EXPECT_LT(std::abs(c.christoffel_222 - std::conj(c.christoffel_111)), 1e-12);
        }
    }
}

TEST(Curvature, MeanCurvatureMatrix)
{
    auto gen = test::rng(63);
    for (auto trial = 0; trial < 10; ++trial)
    {
        auto const xi = trial == 0 ? complex{} : test::random_complex(gen, 1.5);
        auto const c = curvature_at(build_ladder(veronese_seed(3), xi, 3), 0);
        EXPECT_LT(test::max_diff(c.mean_H, test::veronese::cp2_h0(xi)), 1e-9);
    }
}

TEST(Curvature, RandomSeedsAreWellFormed)
{
    auto gen = test::rng(64);
    for (auto trial = 0; trial < 10; ++trial)
    {
        auto const n = 2 + trial % 4;
        auto const ladder = build_ladder(test::random_seed(gen, n), test::random_complex(gen), 3);
        for (auto k = 0; k < n; ++k)
        {
            auto const c = curvature_at(ladder, k);
            EXPECT_GE(c.H_norm_sq, 0.0);
            EXPECT_TRUE(std::isfinite(c.gauss_K));
            EXPECT_LT(std::abs(c.christoffel_222 - std::conj(c.christoffel_111)), 1e-10);
            EXPECT_LT(test::max_diff(c.second_form[1], c.mean_H * c.g12), 1e-10);
        }
    }
}

TEST(Curvature, DegenerateMetric)
{
    // xi^2 has a branch point at the origin
    auto const seed = SeedVector{2, {{1.0}, {0.0, 0.0, 1.0}}, "branch"};
    auto const ladder = build_ladder(seed, 0.0, 3, 0);
    EXPECT_THROW(curvature_at(ladder, 0), DegenerateMetricError);
    EXPECT_THROW(curvature_at(build_ladder(veronese_seed(3), 0.1, 2), 0), JetOrderError);
}

TEST(SphereIntegral, FubiniStudyArea)
{
    auto const r = sphere_integral([](complex xi) { return 1.0 / (pi * std::pow(1.0 + std::norm(xi), 2)); }, 1e-10);
    EXPECT_NEAR(r.value, 1.0, 1e-8);
    EXPECT_LE(r.error_estimate, 1e-10);
}

TEST(SphereIntegral, ZeroIntegrand)
{
    auto const r = sphere_integral([](complex) { return 0.0; }, 1e-10);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.error_estimate, 0.0);
}

TEST(SphereIntegral, EulerCharacteristicOfTheSphere)
{
    auto const seed = cp1_seed();
    auto const r = sphere_integral(
        [&](complex xi) {
            auto const c = curvature_at(build_ladder(seed, xi, 3, 0), 0);
            return c.gauss_K * c.g12 / pi;
        },
        1e-8);
    EXPECT_NEAR(r.value, 2.0, 1e-6);
}

TEST(SphereIntegral, NonConvergenceKeepsPartialValue)
{
    try
    {
        sphere_integral([](complex xi) { return std::exp(-50.0 * std::norm(xi - 0.5)); }, 1e-14, 8);
        FAIL() << "expected QuadratureError";
    }
    catch (QuadratureError const& e)
    {
        EXPECT_TRUE(std::isfinite(e.partial_value));
        EXPECT_GT(e.error_estimate, 1e-14);
    }
    EXPECT_THROW(sphere_integral([](complex) { return 1.0; }, 0.0), Error);
}

TEST(Densities, ChartsAgreeOnOverlap)
{
    auto gen = test::rng(65);
    auto const seed = normalize_common_factor(test::random_seed(gen, 3, 3));
    auto const inv = invert_seed(seed);
    for (auto trial = 0; trial < 10; ++trial)
    {
        auto const xi = std::polar(std::uniform_real_distribution<double>{0.8, 1.25}(gen),
                                   std::uniform_real_distribution<double>{0.0, 2.0 * pi}(gen));
        auto const r2 = std::norm(xi);
        for (auto k = 0; k < 3; ++k)
        {
            auto const a = invariant_densities(build_ladder(seed, xi, 3), k);
            auto const b = invariant_densities(build_ladder(inv, 1.0 / xi, 3), k);
            // d^2 eta = d^2 xi / |xi|^4
            EXPECT_NEAR(a.willmore, b.willmore / (r2 * r2), 1e-6);
            EXPECT_NEAR(a.charge, b.charge / (r2 * r2), 1e-6);
            EXPECT_NEAR(a.euler, b.euler / (r2 * r2), 1e-6);
            EXPECT_NEAR(a.euler, a.gauss_bonnet, 1e-10);
        }
    }
}

TEST(GlobalInvariants, VeroneseCP2)
{
    auto const seed = veronese_seed(3);
    auto const Q = std::array<double, 3>{2.0, 0.0, -2.0};
    auto const W = std::array<double, 3>{4.0 * pi, 2.0 * pi, 4.0 * pi};
    for (auto k = 0; k < 3; ++k)
    {
        auto const g = global_invariants(seed, k, 1e-7);
        EXPECT_EQ(g.rung, k);
        EXPECT_NEAR(g.charge, Q[static_cast<std::size_t>(k)], 1e-6);
        EXPECT_NEAR(g.euler, 2.0, 1e-6);
        EXPECT_NEAR(g.willmore, W[static_cast<std::size_t>(k)], 1e-5);
        EXPECT_NEAR(g.euler_gauss_bonnet, g.euler, 1e-5);
        EXPECT_GT(g.cells, 0);
    }
    EXPECT_THROW(global_invariants(seed, 3, 1e-6), RungError);
}

TEST(GlobalInvariants, CP1Sphere)
{
    auto const g = global_invariants(cp1_seed(), 0, 1e-7);
    EXPECT_NEAR(g.charge, 1.0, 1e-6);
    EXPECT_NEAR(g.euler, 2.0, 1e-6);
}

TEST(GlobalInvariants, GaussBonnetForRandomSeed)
{
    auto gen = test::rng(66);
    auto const seed = test::random_seed(gen, 3, 2);
    for (auto k = 0; k < 3; ++k)
    {
        auto const g = global_invariants(seed, k, 1e-7);
        EXPECT_NEAR(g.euler_gauss_bonnet, g.euler, 1e-5);
        EXPECT_NEAR(g.charge, std::round(g.charge), 1e-4);
    }
}
