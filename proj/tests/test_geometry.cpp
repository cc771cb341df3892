#include <gtest/gtest.h>

#include <cmath>

#include "ambit/error.hpp"
#include "ambit/geometry.hpp"

using namespace ambit;

TEST(TrawlSet, ExponentialMeasures) {
    const double l = 0.7;
    const auto a = TrawlSet::exponential(l);
    EXPECT_NEAR(a.leb(), 1.0 / l, 1e-12);
    EXPECT_THROW(a.increment_sets(0.0), std::invalid_argument);
    for (double h : {0.5, 2.0}) {
        EXPECT_NEAR(a.overlap(h), std::exp(-l * h) / l, 1e-10);
        const auto [fwd, bwd] = a.increment_sets(h);
        EXPECT_NEAR(fwd, (1.0 - std::exp(-l * h)) / l, 1e-10);
        EXPECT_NEAR(bwd, fwd, 1e-12);
    }
    EXPECT_NEAR(a.level_extent(0.25), -std::log(0.25) / l, 1e-12);
    EXPECT_LT(a.level_extent(1.5), 0.0);
}

TEST(TrawlSet, StepMeasures) {
    const auto a = TrawlSet::step(2.0, 0.5);
    EXPECT_NEAR(a.leb(), 1.0, 1e-12);
    EXPECT_NEAR(a.overlap(0.5), 1.5 * 0.5, 1e-10);
    EXPECT_NEAR(a.overlap(3.0), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(a.depth(1.999), 0.5);
    EXPECT_DOUBLE_EQ(a.depth(2.0), 0.0);
}

TEST(TrawlSet, TriangularTabulatedOverlap) {
    const TrawlSet a(TabulatedDepth{{{0.0, 1.0}, {2.0, 0.0}}});
    EXPECT_NEAR(a.leb(), 1.0, 1e-10);
    for (double h : {0.25, 1.0, 1.5}) EXPECT_NEAR(a.overlap(h), (2.0 - h) * (2.0 - h) / 4.0, 1e-9);
    EXPECT_NEAR(a.level_extent(0.5), 1.0, 1e-12);
}

TEST(TrawlSet, LookbackLeavesEpsTail) {
    const auto a = TrawlSet::exponential(0.5);
    EXPECT_NEAR(a.lookback(1e-4), std::log(1e4) / 0.5, 1e-6);
}

TEST(TrawlSet, HeavyTailExceedsWindow) {
    const TrawlSet a(FunctionDepth{[](double u) { return std::pow(1.0 + u, -1.05); }});
    // int_h^inf (1 + u)^{-1.05} du = 20 (1 + h)^{-0.05}
    EXPECT_NEAR(a.leb(), 20.0, 1e-7);
    EXPECT_NEAR(a.overlap(100.0), 20.0 * std::pow(101.0, -0.05), 1e-7);
    EXPECT_THROW(a.lookback(1e-4), WindowError);
}

TEST(TrawlSet, RejectsIncreasingDepth) {
    EXPECT_THROW(TrawlSet(TabulatedDepth{{{0.0, 0.5}, {1.0, 1.0}, {2.0, 0.0}}}), ModelError);
}

TEST(AmbitSet, ProductBoxSections) {
    const AmbitSet a(ProductAmbitSet{{0.5}, 2.0});
    EXPECT_NEAR(a.volume(), 2.0, 1e-12);
    EXPECT_TRUE(a.contains(0.4, -1.0));
    EXPECT_FALSE(a.contains(0.6, -1.0));
    EXPECT_FALSE(a.contains(0.0, 0.5));
    const auto [lo, hi] = a.section(1.0);
    EXPECT_DOUBLE_EQ(lo, -0.5);
    EXPECT_DOUBLE_EQ(hi, 0.5);
    const auto [lo2, hi2] = a.section(2.5);
    EXPECT_GT(lo2, hi2);
}

TEST(MetaTime, ImageVolume) {
    const MetaTimeMap tau([](double x, double t) { return 1.0 + x * t; });
    EXPECT_NEAR(tau.image_volume({0.0, 1.0, 0.0, 1.0}), 1.25, 1e-10);
    EXPECT_NEAR(tau.tau_plus(1.0, 2.0), 4.0, 1e-10);
    EXPECT_NEAR(MetaTimeMap::identity().image_volume({0.0, 2.0, 1.0, 4.0}), 6.0, 1e-10);
}

TEST(MetaTime, NegativeDensityThrows) {
    const MetaTimeMap tau([](double x, double) { return x - 0.5; });
    EXPECT_THROW(tau.tau(0.0, 0.0), ModelError);
}
