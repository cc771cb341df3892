#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ambit/estimation.hpp"
#include "ambit/random.hpp"

using namespace ambit;

TEST(RandomStream, SubstreamsAreReproducibleAndDistinct) {
    auto a = RandomStream::substream(42, 3, 1);
    auto b = RandomStream::substream(42, 3, 1);
    auto c = RandomStream::substream(42, 4, 1);
    auto d = RandomStream::substream(42, 3, 2);
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
    EXPECT_NE(x, d.uniform());
}

TEST(RandomStream, ReplicatesIndependentOfSchedule) {
    auto fn = [](std::size_t i, RandomStream& rng) { return rng.normal() + static_cast<double>(i); };
    const auto all = run_replicates(64, 7, 0, fn);
    for (std::size_t i : {0, 17, 63}) {
        auto s = RandomStream::substream(7, i, 0);
        EXPECT_EQ(all[i], fn(i, s));
    }
}

TEST(RandomStream, DistributionMoments) {
    RandomStream rng(8);
    std::vector<double> g(40000), ig(40000), p(40000);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = rng.gamma(2.5, 2.0);
        ig[i] = rng.inverse_gaussian(1.5, 2.0);
        p[i] = static_cast<double>(rng.poisson(3.5));
    }
    const auto sg = summarize(g), si = summarize(ig), sp = summarize(p);
    EXPECT_NEAR(sg.mean, 1.25, 4.0 * sg.se[0]);
    EXPECT_NEAR(sg.k[1], 0.625, 4.0 * sg.se[1]);
    // IG(mean m, shape s): variance m^3 / s
    EXPECT_NEAR(si.mean, 1.5, 4.0 * si.se[0]);
    EXPECT_NEAR(si.k[1], 1.6875, 4.0 * si.se[1]);
    EXPECT_NEAR(sp.mean, 3.5, 4.0 * sp.se[0]);
    EXPECT_NEAR(sp.k[1], 3.5, 4.0 * sp.se[1]);
}

TEST(RandomStream, UniformIsOpenInterval) {
    RandomStream rng(9);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}
