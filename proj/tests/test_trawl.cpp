#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ambit/estimation.hpp"
#include "ambit/random.hpp"
#include "ambit/trawl.hpp"

using namespace ambit;

namespace {

// Gaussian oracle: C = i zeta E - zeta^2 Var / 2 for linear functionals.
std::complex<double> gaussian_cf(double mean, double var, double z) { return {-0.5 * z * z * var, z * mean}; }

}  // namespace

TEST(TrawlAnalytic, AcfIsOverlapRatio) {
    const TrawlModel e{TrawlSet::exponential(0.7), LevySeed::gamma(2.0)};
    const TrawlModel s{TrawlSet::step(1.0), LevySeed::gaussian(0.0, 1.0)};
    for (double h : {0.1, 0.5, 2.0}) {
        EXPECT_NEAR(acf(e, h), std::exp(-0.7 * h), 1e-10);
        EXPECT_NEAR(acf(s, h), std::max(0.0, 1.0 - h), 1e-10);
    }
    EXPECT_NEAR(autocovariance(s, 0.25), 0.75, 1e-10);
}

TEST(TrawlAnalytic, MarginalIsLebTimesSeed) {
    const TrawlModel m{TrawlSet::exponential(0.7), LevySeed::gaussian(0.0, 1.0)};
    EXPECT_NEAR(marginal_cumulant_order(m, 2), 10.0 / 7.0, 1e-12);
    const auto c = marginal_cumulant(m, 1.2);
    EXPECT_NEAR(c.real(), -0.5 * 1.44 * 10.0 / 7.0, 1e-12);
}

TEST(TrawlAnalytic, GaussianIncrement) {
    const double l = 0.7, h = 1.3;
    const TrawlModel m{TrawlSet::exponential(l), LevySeed::gaussian(0.2, 1.5)};
    const double var = 1.5 * 2.0 * (1.0 - std::exp(-l * h)) / l;
    for (double z : {-1.0, 0.5}) {
        const auto c = increment_cumulant(m, h, z);
        const auto t = gaussian_cf(0.0, var, z);
        EXPECT_NEAR(c.real(), t.real(), 1e-10);
        EXPECT_NEAR(c.imag(), t.imag(), 1e-10);
    }
}

TEST(TrawlFunctional, DiracSumGaussianOracle) {
    const double l = 0.7, b = 1.2;
    const TrawlModel m{TrawlSet::exponential(l), LevySeed::gaussian(0.0, b)};
    const std::vector<std::pair<double, double>> atoms{{0.0, 1.0}, {0.8, -0.5}, {2.0, 2.0}};
    double var = 0.0;
    for (const auto& [ti, ai] : atoms)
        for (const auto& [tj, aj] : atoms) var += ai * aj * b * std::exp(-l * std::abs(ti - tj)) / l;
    for (double z : {0.3, 1.1}) {
        const auto c = generalized_cumulant_functional(m, DiracSum{atoms}, z);
        EXPECT_NEAR(c.real(), -0.5 * z * z * var, 1e-9);
        EXPECT_NEAR(c.imag(), 0.0, 1e-12);
    }
}

TEST(TrawlFunctional, DiracSumExactMatchesQuadrature) {
    const TrawlModel m{TrawlSet(TabulatedDepth{{{0.0, 1.0}, {1.5, 0.2}, {3.0, 0.0}}}),
                       LevySeed::compound_poisson(2.0, ExponentialMarks{0.7})};
    const DiracSum mu{{{0.0, 0.4}, {0.5, 1.0}, {1.7, -0.6}, {2.2, 0.3}}};
    for (double z : {-0.8, 1.3}) {
        const auto a = generalized_cumulant_functional(m, mu, z);
        const auto q = dirac_functional_quadrature(m, mu, z);
        EXPECT_NEAR(a.real(), q.real(), 1e-7);
        EXPECT_NEAR(a.imag(), q.imag(), 1e-7);
    }
}

TEST(TrawlFunctional, IntervalGaussianOracle) {
    // Var(int_0^T Y_t dt) = (2 b / l) (T / l - (1 - e^{-l T}) / l^2)
    const double l = 0.9, b = 1.0, T = 2.0;
    const TrawlModel m{TrawlSet::exponential(l), LevySeed::gaussian(0.0, b)};
    const double var = 2.0 * b / l * (T / l - (1.0 - std::exp(-l * T)) / (l * l));
    const auto c = generalized_cumulant_functional(m, IntervalMeasure{0.0, T}, 0.8);
    EXPECT_NEAR(c.real(), -0.5 * 0.64 * var, 1e-7);
}

TEST(TrawlSimulation, GridMarginalVariance) {
    const TrawlModel m{TrawlSet::exponential(1.0), LevySeed::gaussian(0.0, 1.0)};
    RandomStream rng(3);
    std::vector<double> y;
    for (int i = 0; i < 3000; ++i) y.push_back(simulate_grid(m, {0.0}, {0.02, 0.02}, rng).values[0]);
    const auto s = summarize(y);
    EXPECT_NEAR(s.k[1], 1.0, 4.0 * s.se[1]);
}

TEST(TrawlSimulation, ExactCompoundPoissonMeanAndAcf) {
    const TrawlModel m{TrawlSet::step(1.0, 2.0), LevySeed::compound_poisson(1.0, ConstantMarks{1.0})};
    RandomStream rng(4);
    std::vector<std::vector<double>> paths;
    for (int i = 0; i < 5000; ++i) paths.push_back(simulate_exact_cp(m, {0.0, 0.5}, rng).values);
    std::vector<double> y0;
    for (const auto& p : paths) y0.push_back(p[0]);
    const auto s = summarize(y0);
    EXPECT_NEAR(s.mean, 2.0, 4.0 * s.se[0]);
    const auto r = empirical_acf(paths, {1});
    EXPECT_NEAR(r[0].value, 0.5, 4.0 * r[0].se);
}

TEST(TrawlSimulation, SameStreamSamePath) {
    const TrawlModel m{TrawlSet::exponential(0.7), LevySeed::gamma(1.0)};
    RandomStream a(9), b(9);
    EXPECT_EQ(simulate_grid(m, {0.0, 1.0}, {}, a).values, simulate_grid(m, {0.0, 1.0}, {}, b).values);
}

TEST(TrawlSimulation, ExactRequiresFiniteActivity) {
    const TrawlModel m{TrawlSet::exponential(0.7), LevySeed::gamma(1.0)};
    RandomStream rng(1);
    EXPECT_THROW(simulate_exact_cp(m, {0.0}, rng), ModelError);
}
