#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ambit/estimation.hpp"
#include "ambit/random.hpp"

using namespace ambit;

TEST(Summarize, KStatisticsByHand) {
    const std::vector<double> x{1.0, 2.0, 4.0, 7.0, 11.0, 16.0};
    const double n = 6.0;
    double m = 0.0;
    for (double v : x) m += v / n;
    double s2 = 0, s3 = 0, s4 = 0;
    for (double v : x) {
        s2 += std::pow(v - m, 2);
        s3 += std::pow(v - m, 3);
        s4 += std::pow(v - m, 4);
    }
    const double k2 = s2 / (n - 1);
    const double k3 = n * s3 / ((n - 1) * (n - 2));
    const double m2 = s2 / n, m4 = s4 / n;
    const double k4 = n * n * ((n + 1) * m4 - 3 * (n - 1) * m2 * m2) / ((n - 1) * (n - 2) * (n - 3));
    const auto s = summarize(x);
    EXPECT_NEAR(s.k[0], m, 1e-12);
    EXPECT_NEAR(s.k[1], k2, 1e-10);
    EXPECT_NEAR(s.k[2], k3, 1e-9);
    EXPECT_NEAR(s.k[3], k4, 1e-8);
    EXPECT_NEAR(s.se[0], std::sqrt(k2 / n), 1e-12);
}

TEST(Summarize, TooFewSamplesThrow) { EXPECT_THROW(summarize({1.0}), std::invalid_argument); }

TEST(EmpiricalCf, ZeroIsExactlyOne) {
    const auto e = empirical_cf({0.3, -1.0, 2.0}, {0.0, 1.0});
    EXPECT_EQ(e[0].value, std::complex<double>(1.0, 0.0));
    EXPECT_NEAR(e[1].value.real(), (std::cos(0.3) + std::cos(-1.0) + std::cos(2.0)) / 3.0, 1e-15);
}

TEST(EmpiricalLogCf, GaussianSample) {
    RandomStream rng(2);
    std::vector<double> x(20000);
    for (double& v : x) v = 0.5 + 1.2 * rng.normal();
    for (const auto& e : empirical_log_cf(x, {0.4, 1.0})) {
        EXPECT_NEAR(e.value.real(), -0.5 * e.zeta * e.zeta * 1.44, 4.0 * e.se_re);
        EXPECT_NEAR(e.value.imag(), 0.5 * e.zeta, 4.0 * e.se_im);
    }
}

TEST(EmpiricalAcf, HandComputedPaths) {
    const std::vector<std::vector<double>> paths{{1.0, 2.0, 3.0}, {3.0, 2.0, 1.0}};
    // grand mean 2; c0 = (1 + 0 + 1) / 3 per path; lag 1 pairs: (-1)(0) + (0)(1) = 0
    const auto pc = empirical_acf(paths, {0, 1, 2}, AcfNormalization::PairCount);
    EXPECT_DOUBLE_EQ(pc[0].value, 1.0);
    EXPECT_NEAR(pc[1].value, 0.0, 1e-15);
    // lag 2: (-1)(1) / 1 pair = -1 per path, over c0 = 2/3
    EXPECT_NEAR(pc[2].value, -1.5, 1e-12);
    const auto bi = empirical_acf(paths, {2}, AcfNormalization::Biased);
    EXPECT_NEAR(bi[0].value, -0.5, 1e-12);
    EXPECT_THROW(empirical_acf(paths, {3}), std::invalid_argument);
}

TEST(EmpiricalAcf, Ar1Recovery) {
    RandomStream rng(5);
    const double phi = 0.6;
    std::vector<std::vector<double>> paths(2000, std::vector<double>(6));
    for (auto& p : paths) {
        p[0] = rng.normal() / std::sqrt(1.0 - phi * phi);
        for (std::size_t t = 1; t < p.size(); ++t) p[t] = phi * p[t - 1] + rng.normal();
    }
    const auto r = empirical_acf(paths, {1, 2});
    EXPECT_NEAR(r[0].value, phi, 4.0 * r[0].se);
    EXPECT_NEAR(r[1].value, phi * phi, 4.0 * r[1].se);
}

TEST(Correlation, LinearRelationAndIndependence) {
    RandomStream rng(6);
    std::vector<double> x(5000), y(5000), z(5000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.normal();
        y[i] = 2.0 * x[i] + 1.0;
        z[i] = rng.normal();
    }
    EXPECT_NEAR(correlation(x, y).value, 1.0, 1e-12);
    const auto c = correlation(x, z);
    EXPECT_NEAR(c.value, 0.0, 4.0 * c.se);
    const auto v = covariance(x, y);
    EXPECT_NEAR(v.value, 2.0, 4.0 * v.se);
}

TEST(WithinSe, Boundary) {
    EXPECT_TRUE(within_se(1.3, 1.0, 0.1));
    EXPECT_FALSE(within_se(1.31, 1.0, 0.1));
}
