#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ambit/estimation.hpp"
#include "ambit/levy_basis.hpp"
#include "ambit/random.hpp"

using namespace ambit;
using cd = std::complex<double>;

namespace {

const cd I{0.0, 1.0};

void expect_close(cd a, cd b, double tol) {
    EXPECT_NEAR(a.real(), b.real(), tol);
    EXPECT_NEAR(a.imag(), b.imag(), tol);
}

std::vector<double> draws(const LevySeed& seed, double volume, std::size_t n, std::uint64_t s) {
    RandomStream rng(s);
    const CellIncrementSampler sampler(seed, volume);
    std::vector<double> out(n);
    for (double& x : out) x = sampler(rng);
    return out;
}

}  // namespace

TEST(LevySeed, GaussianCumulant) {
    const auto s = LevySeed::gaussian(0.3, 2.0);
    for (double z : {-1.5, 0.2, 3.0}) expect_close(seed_cumulant(s, z), I * z * 0.3 - z * z, 1e-14);
    EXPECT_EQ(seed_cumulant(s, 0.0), cd(0.0));
}

TEST(LevySeed, PoissonCumulant) {
    const auto s = LevySeed::poisson(2.0);
    for (double z : {-2.0, 0.7, 4.0}) expect_close(seed_cumulant(s, z), 2.0 * (std::exp(I * z) - 1.0), 1e-12);
}

TEST(LevySeed, GammaCumulantMatchesGammaLaw) {
    // unit volume: Gamma(shape 1, rate alpha)
    const auto s = LevySeed::gamma(1.7);
    for (double z : {-2.0, 0.5, 3.0}) expect_close(seed_cumulant(s, z), -std::log(1.0 - I * z / 1.7), 1e-10);
}

TEST(LevySeed, InverseGaussianCumulant) {
    const double g = 1.3;
    const auto s = LevySeed::inverse_gaussian(g);
    for (double z : {-2.0, 0.5, 3.0}) expect_close(seed_cumulant(s, z), g - std::sqrt(g * g - 2.0 * I * z), 1e-10);
}

TEST(LevySeed, CompoundPoissonExponentialCumulant) {
    const auto s = LevySeed::compound_poisson(1.5, ExponentialMarks{0.8}, 0.25);
    for (double z : {-2.0, 0.5, 3.0}) {
        expect_close(seed_cumulant(s, z), I * z * 0.25 + 1.5 * (1.0 / (1.0 - I * z * 0.8) - 1.0), 1e-12);
    }
}

TEST(LevySeed, QuadratureRouteAgreesWithClosedForm) {
    for (const auto& s : {LevySeed::gamma(0.9), LevySeed::inverse_gaussian(2.0),
                          LevySeed::compound_poisson(1.0, NormalMarks{0.5, 1.5})}) {
        for (double z : {-1.0, 0.3, 2.5}) expect_close(seed_cumulant_quadrature(s, z), seed_cumulant(s, z), 1e-7);
    }
}

TEST(LevySeed, CumulantsOfKnownLaws) {
    const double alpha = 2.0;
    const auto g = LevySeed::gamma(alpha);
    const double fact[] = {1, 1, 2, 6};
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(cumulant(g, n), fact[n - 1] / std::pow(alpha, n), 1e-9);
    const auto p = LevySeed::poisson(3.0);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(cumulant(p, n), 3.0, 1e-12);
    const auto cp = LevySeed::compound_poisson(2.0, ExponentialMarks{0.5});
    const double nfact[] = {1, 2, 6, 24};
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(cumulant(cp, n), 2.0 * nfact[n - 1] * std::pow(0.5, n), 1e-12);
}

TEST(LevySeed, DriftConventionUsesTruncatedMean) {
    const double lambda = 2.0, m = 0.3, sd = 1.0;
    const auto s = LevySeed::compound_poisson(lambda, NormalMarks{m, sd}, 0.1);
    // E[X 1{|X| <= 1}] for X ~ N(m, sd^2)
    const auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
    const auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    const double a = (1.0 - m) / sd, b = (-1.0 - m) / sd;
    const double trunc = m * (Phi(a) - Phi(b)) - sd * (phi(a) - phi(b));
    EXPECT_NEAR(s.a(), 0.1 + lambda * trunc, 1e-9);
    EXPECT_NEAR(s.drift(), 0.1, 1e-9);
}

TEST(LevySeed, ScalingMultipliesCumulant) {
    const auto s = LevySeed::compound_poisson(1.0, ExponentialMarks{1.0}, 0.2);
    expect_close(seed_cumulant(s.scaled(0.4), 1.3), 0.4 * seed_cumulant(s, 1.3), 1e-12);
}

TEST(LevySeed, Predicates) {
    EXPECT_TRUE(LevySeed::gamma(1.0).is_subordinator());
    EXPECT_FALSE(LevySeed::gamma(1.0).is_finite_activity());
    EXPECT_FALSE(LevySeed::gaussian(0.0, 1.0).is_subordinator());
    EXPECT_TRUE(LevySeed::poisson(1.0).is_finite_activity());
    EXPECT_FALSE(LevySeed::compound_poisson(1.0, NormalMarks{0.0, 1.0}).is_subordinator());
}

TEST(LevySeed, InvalidParametersThrow) {
    EXPECT_THROW(LevySeed::gaussian(0.0, -1.0), ModelError);
    EXPECT_THROW(LevySeed::poisson(-1.0), ModelError);
    EXPECT_THROW(LevySeed::gamma(1.0).scaled(-0.5), ModelError);
}

TEST(CellSampler, GammaMoments) {
    const double alpha = 2.0, v = 0.3;
    const auto x = draws(LevySeed::gamma(alpha), v, 40000, 11);
    const auto s = summarize(x);
    EXPECT_NEAR(s.mean, v / alpha, 4.0 * s.se[0]);
    EXPECT_NEAR(s.k[1], v / (alpha * alpha), 4.0 * s.se[1]);
}

TEST(CellSampler, InverseGaussianMoments) {
    // IG(delta = v, gamma): mean v / gamma, variance v / gamma^3
    const double g = 1.5, v = 0.7;
    const auto x = draws(LevySeed::inverse_gaussian(g), v, 40000, 12);
    const auto s = summarize(x);
    EXPECT_NEAR(s.mean, v / g, 4.0 * s.se[0]);
    EXPECT_NEAR(s.k[1], v / (g * g * g), 4.0 * s.se[1]);
}

TEST(CellSampler, CompoundPoissonCharacteristicFunction) {
    const auto seed = LevySeed::compound_poisson(3.0, NormalMarks{0.2, 0.5}, 0.1);
    const double v = 0.5;
    const auto x = draws(seed, v, 40000, 13);
    for (const auto& e : empirical_cf(x, {0.5, 1.5})) {
        const cd target = std::exp(v * seed_cumulant(seed, e.zeta));
        EXPECT_NEAR(e.value.real(), target.real(), 4.0 * e.se_re);
        EXPECT_NEAR(e.value.imag(), target.imag(), 4.0 * e.se_im);
    }
}

TEST(Integrability, PoissonFunctionals) {
    const auto s = LevySeed::poisson(2.0);
    // V1(u) = 2 u 1{|u| <= 1}, V2(u) = 2 min(1, u^2)
    EXPECT_NEAR(integrability_v1(s, 0.5), 1.0, 1e-12);
    EXPECT_NEAR(integrability_v1(s, 2.0), 0.0, 1e-12);
    EXPECT_NEAR(integrability_v2(s, 0.5), 0.5, 1e-12);
    EXPECT_NEAR(integrability_v2(s, 3.0), 2.0, 1e-12);
}

TEST(Integrability, GaussianFunctionals) {
    const auto s = LevySeed::gaussian(0.4, 1.0);
    EXPECT_NEAR(integrability_v1(s, 2.0), 0.8, 1e-12);
    EXPECT_EQ(integrability_v2(s, 2.0), 0.0);
}
