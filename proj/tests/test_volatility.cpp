#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ambit/estimation.hpp"
#include "ambit/random.hpp"
#include "ambit/volatility.hpp"

using namespace ambit;
using cd = std::complex<double>;

TEST(OU, StationaryMomentsAndAcf) {
    // CP(1, Exp mean 1) driver, rate 2: mean 1/2, variance 2 / 4
    const OUProcess ou(LevySeed::compound_poisson(1.0, ExponentialMarks{1.0}), 2.0);
    EXPECT_NEAR(ou.mean(), 0.5, 1e-12);
    EXPECT_NEAR(ou.variance(), 0.5, 1e-12);
    const auto paths = run_replicates(4000, 31, 0, [&](std::size_t, RandomStream& rng) {
        return simulate_ou(ou, {0.0, 0.5}, rng);
    });
    std::vector<double> y0;
    for (const auto& p : paths) y0.push_back(p[0]);
    const auto s = summarize(y0);
    EXPECT_NEAR(s.mean, 0.5, 4.0 * s.se[0]);
    EXPECT_NEAR(s.k[1], 0.5, 4.0 * s.se[1]);
    const auto r = empirical_acf(paths, {1});
    EXPECT_NEAR(r[0].value, std::exp(-1.0), 4.0 * r[0].se);
}

TEST(OUTVF, VarianceFromComponents) {
    const OUTVFVol h{0.8, 1.3, 0.6, LevySeed::gamma(2.0), LevySeed::compound_poisson(1.5, ExponentialMarks{0.5}), 0.01};
    const double x = 0.7;
    // Var(e^{-mu x} Y~) + Var(int_0^x e^{-mu (x - xi)} dZ)
    const double vy = cumulant(h.y_driver, 2) / (2.0 * h.lambda);
    const double vx = cumulant(h.x_driver, 2) / (2.0 * h.kappa);
    const double target = std::exp(-2.0 * h.mu * x) * vy + vx * (1.0 - std::exp(-2.0 * h.mu * x)) / (2.0 * h.mu);
    EXPECT_NEAR(outvf_covariance(h, 0.3, x, 0.3, x), target, 1e-12);
    const double ey = cumulant(h.y_driver, 1) / h.lambda, ex = cumulant(h.x_driver, 1) / h.kappa;
    EXPECT_NEAR(outvf_mean(h, x), std::exp(-h.mu * x) * ey + ex * (1.0 - std::exp(-h.mu * x)) / h.mu, 1e-12);
}

TEST(OUTVF, SimulatedMoments) {
    const OUTVFVol h{1.0, 1.0, 1.0, LevySeed::compound_poisson(1.0, ExponentialMarks{1.0}),
                     LevySeed::compound_poisson(2.0, ExponentialMarks{1.0}), 0.01};
    const auto v = run_replicates(3000, 32, 0, [&](std::size_t, RandomStream& rng) {
        return simulate_vol(h, {0.5}, {0.0}, rng).sigma2(0, 0);
    });
    const auto s = summarize(v);
    EXPECT_NEAR(s.mean, outvf_mean(h, 0.5), 4.0 * s.se[0]);
    EXPECT_NEAR(s.k[1], outvf_covariance(h, 0.0, 0.5, 0.0, 0.5), 4.0 * s.se[1]);
}

TEST(Subordination, MetaVolumesSumToImageVolume) {
    const MetaTimeMap tau([](double x, double t) { return 1.0 + x * t; });
    const Rectangle a{0.0, 1.0, 0.0, 1.0};
    double total = 0.0;
    for (double v : meta_volumes(tau, a, 0.1, 0.1)) total += v;
    EXPECT_NEAR(total, tau.image_volume(a), 1e-10);
    EXPECT_THROW(meta_volumes(tau, a, 0.3, 0.1), std::invalid_argument);
}

TEST(Subordination, ConditionalCumulantScalesWithMetaVolume) {
    const auto s = LevySeed::poisson(1.5);
    const cd c = subordinated_cumulant(s, 1.25, 0.7);
    EXPECT_NEAR(c.real(), 1.25 * 1.5 * (std::cos(0.7) - 1.0), 1e-12);
    EXPECT_NEAR(c.imag(), 1.25 * 1.5 * std::sin(0.7), 1e-12);
}

TEST(SupOU, AcfIsWeightedExponentials) {
    const DiscreteMixing g{{{0.5, 1.0}, {2.0, 1.0}}};
    for (double h : {0.0, 1.0, 3.0}) {
        const double num = 2.0 * std::exp(-0.5 * h) + 0.5 * std::exp(-2.0 * h);
        EXPECT_NEAR(supou_acf(g, h), num / 2.5, 1e-12);
    }
}

TEST(SupOU, SingleAtomMarginalIsGammaLike) {
    // int_0^inf c (1 / (1 - i z m e^{-theta u}) - 1) du = -(c / theta) log(1 - i z m)
    const double c = 1.2, m = 0.8, theta = 1.7;
    const auto seed = supou_marginal_seed(LevySeed::compound_poisson(c, ExponentialMarks{m}), {{{theta, 1.0}}});
    for (double z : {-1.0, 0.4, 2.0}) {
        const cd t = -(c / theta) * std::log(1.0 - cd(0.0, z * m));
        const cd v = seed_cumulant(seed, z);
        EXPECT_NEAR(v.real(), t.real(), 1e-8);
        EXPECT_NEAR(v.imag(), t.imag(), 1e-8);
    }
}

TEST(SupOU, SimulatedMeanMatchesMarginal) {
    const auto driver = LevySeed::compound_poisson(1.0, ExponentialMarks{1.0});
    const DiscreteMixing g{{{0.5, 1.0}, {2.0, 1.0}}};
    const auto v = run_replicates(3000, 33, 0, [&](std::size_t, RandomStream& rng) {
        return simulate_supou(driver, g, {0.0}, rng)[0];
    });
    const auto s = summarize(v);
    EXPECT_NEAR(s.mean, cumulant(supou_marginal_seed(driver, g), 1), 4.0 * s.se[0]);
}

TEST(LevyMix, DivergentMixingIsRejected) {
    // OU-rate members carry mass ~ 1/theta; a flat density near 0 diverges
    const LevyMixSpec spec{OURateFamily{CompoundPoissonJumps{1.0, ExponentialMarks{1.0}}},
                           DensityMixing{[](double) { return 1.0; }, 0.0, 1.0}};
    EXPECT_THROW(levy_mix(spec), ModelError);
}

TEST(LevyMix, PoissonAtomsMerge) {
    const LevyMixSpec spec{PoissonIntensityFamily{}, DiscreteMixing{{{1.0, 0.5}, {3.0, 0.25}}}};
    const auto s = levy_mix(spec);
    const cd c = seed_cumulant(s, 0.9);
    const cd t = 1.25 * (std::exp(cd(0.0, 0.9)) - 1.0);
    EXPECT_NEAR(c.real(), t.real(), 1e-12);
    EXPECT_NEAR(c.imag(), t.imag(), 1e-12);
}

TEST(ProbabilityMix, NormalVarianceMeanMoments) {
    // V in {1, 4} equally likely; X | V ~ N(0.5 V, V)
    const DiscreteLaw law{{{1.0, 0.5}, {4.0, 0.5}}};
    const auto v = run_replicates(20000, 34, 0, [&](std::size_t, RandomStream& rng) {
        const auto seed = probability_mix(NormalVarianceMean{0.0, 0.5}, law, rng);
        return CellIncrementSampler(seed, 1.0)(rng);
    });
    const auto s = summarize(v);
    EXPECT_NEAR(s.mean, 1.25, 4.0 * s.se[0]);
    EXPECT_NEAR(s.k[1], 2.5 + 0.25 * 2.25, 4.0 * s.se[1]);
}
