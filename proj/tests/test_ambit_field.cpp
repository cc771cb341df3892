#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ambit/ambit_field.hpp"
#include "ambit/estimation.hpp"

using namespace ambit;

namespace {

const auto unit_sigma = [](double, double) { return 1.0; };

AmbitFieldSpec box_spec(Kernel k, double half_width, double depth, LevySeed seed) {
    return {0.0, std::move(k), AmbitSet(ProductAmbitSet{{half_width}, depth}), DeterministicVol{unit_sigma},
            std::move(seed)};
}

}  // namespace

TEST(AmbitField, TrawlReduction) {
    // constant kernel, sigma = 1 and a trawl set: C(Y) = Leb(A) C(L')
    const auto seed = LevySeed::gamma(1.5);
    const AmbitFieldSpec spec{0.0, Kernel::constant(1.0), AmbitSet(TrawlSet::exponential(0.7)),
                              DeterministicVol{unit_sigma}, seed};
    for (double z : {-0.6, 1.1}) {
        const auto c = conditional_cumulant(spec, unit_sigma, z, 0.0, 0.0);
        const auto t = seed_cumulant(seed, z) / 0.7;
        EXPECT_NEAR(c.real(), t.real(), 1e-6);
        EXPECT_NEAR(c.imag(), t.imag(), 1e-6);
    }
}

TEST(AmbitField, ExponentialKernelVariance) {
    // Var = b int_{-w}^{w} int_0^T e^{-2 l u} du dxi = b 2w (1 - e^{-2 l T}) / (2 l)
    const double l = 1.3, w = 0.4, T = 2.0, b = 1.7;
    const auto spec = box_spec(Kernel::exponential(l), w, T, LevySeed::gaussian(0.0, b));
    const auto so = second_order(spec, {{0.0, 0.0}, {0.1, 0.5}});
    EXPECT_NEAR(so.cov[0][0], b * 2.0 * w * (1.0 - std::exp(-2.0 * l * T)) / (2.0 * l), 1e-7);
    EXPECT_NEAR(so.mean[0], 0.0, 1e-12);
    EXPECT_NEAR(so.cov[0][1], so.cov[1][0], 1e-12);
}

TEST(AmbitField, SimulatedVarianceMatchesLattice) {
    const auto spec = box_spec(Kernel::exponential(1.0), 0.5, 1.5, LevySeed::compound_poisson(2.0, NormalMarks{0.3, 1.0}));
    FieldGrid g;
    g.xs = {0.0};
    g.ts = {0.0};
    const auto y = run_replicates(4000, 41, 0, [&](std::size_t, RandomStream& rng) {
        return simulate_field(spec, g, rng).values[0];
    });
    const auto s = summarize(y);
    const auto so = second_order_mc(spec, {{0.0, 0.0}}, g, 1, 0);
    EXPECT_NEAR(s.mean, so.mean[0], 4.0 * s.se[0]);
    EXPECT_NEAR(s.k[1], so.cov[0][0], 4.0 * s.se[1]);
}

TEST(AmbitField, IsometryNormMatchesQuadrature) {
    const auto spec = box_spec(Kernel::exponential(0.8), 0.5, 2.0, LevySeed::gaussian(0.0, 1.0));
    FieldGrid g;
    g.dx = g.dt = 0.01;
    const double exact = (1.0 - std::exp(-2.0 * 0.8 * 2.0)) / (2.0 * 0.8);
    EXPECT_NEAR(discretized_isometry_norm(spec, 0.0, 0.0, g), exact, 0.02 * exact);
}

TEST(Integrability, FiniteForBoundedKernel) {
    const auto spec = box_spec(Kernel::exponential(1.0), 0.5, 1.0, LevySeed::poisson(2.0));
    const auto r = check_integrability(spec);
    EXPECT_TRUE(r.integrable());
    // V2(f) = 2 f^2 for f <= 1: int 2 e^{-2u} du over [0,1] x [-1/2, 1/2]
    EXPECT_NEAR(r.jumps.value, 1.0 - std::exp(-2.0), 1e-8);
}

TEST(Integrability, DivergentGaussianPart) {
    const auto k = Kernel::temporal([](double u) { return u > 0.0 ? std::pow(u, -0.75) : 0.0; });
    const auto spec = box_spec(k, 0.5, 1.0, LevySeed::gaussian(0.0, 1.0));
    const auto r = check_integrability(spec);
    EXPECT_FALSE(r.gaussian.finite);
    EXPECT_FALSE(r.integrable());
}

TEST(Semimartingale, DiscrepancyShrinksWithStep) {
    SemimartingaleSpec spec{Kernel::exponential(1.0), 0.5, LevySeed::gaussian(0.0, 1.0)};
    RandomStream rng(42);
    const auto d = semimartingale_refinement(spec, 1.0, {0.02, 0.01, 0.005}, 0.05, rng);
    ASSERT_EQ(d.size(), 3u);
    EXPECT_GT(d[0], d[2]);
    EXPECT_THROW(semimartingale_refinement(spec, 1.0, {0.015, 0.01}, 0.05, rng), std::invalid_argument);
}

TEST(LSS, LookbackForExponentialKernel) {
    // int_T^inf e^{-2u} du / int_0^inf e^{-2u} du = e^{-2T}
    const auto k = [](double u) { return std::exp(-u); };
    EXPECT_NEAR(lss_lookback(k, 1e-4, 1e3), std::log(1e4) / 2.0, 1e-6);
    EXPECT_THROW(lss_lookback([](double u) { return 1.0 / (1.0 + u); }, 1e-4, 1e3), WindowError);
}

TEST(LSS, GaussianVariance) {
    LSSSpec spec;
    spec.k = [](double u) { return u > 0.0 ? std::exp(-u) : 0.0; };
    const double dt = 0.01;
    const auto y = run_replicates(3000, 43, 0, [&](std::size_t, RandomStream& rng) {
        return simulate_lss(spec, {0.0}, dt, rng).values[0];
    });
    const auto s = summarize(y);
    EXPECT_NEAR(s.k[1], 0.5, 4.0 * s.se[1] + dt);
}
