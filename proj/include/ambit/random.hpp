#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace ambit {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Independent pseudo-random stream. Substreams are derived from
/// (master seed, index, tag) by hashing, so the stream used for a replicate
/// depends only on its index and never on scheduling.
class RandomStream {
public:
    using engine_type = std::mt19937_64;

    explicit RandomStream(std::uint64_t seed) {
        const std::uint64_t a = detail::splitmix64(seed);
        const std::uint64_t b = detail::splitmix64(a);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        engine_.seed(seq);
    }

    static RandomStream substream(std::uint64_t master, std::uint64_t index, std::uint64_t tag = 0) {
        std::uint64_t h = detail::splitmix64(master);
        h = detail::splitmix64(h ^ detail::splitmix64(index + 0x632BE59BD9B4E019ULL));
        h = detail::splitmix64(h ^ detail::splitmix64(tag + 0x8CB92BA72F3D8DD7ULL));
        return RandomStream(h);
    }

    engine_type& engine() noexcept { return engine_; }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        double u;
        do {
            u = std::generate_canonical<double, 53>(engine_);
        } while (u <= 0.0);
        return u;
    }

    double normal() { return normal_(engine_); }
    double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

    double exponential(double mean) { return -mean * std::log(uniform()); }

    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::poisson_distribution<std::uint64_t> d(mean);
        return d(engine_);
    }

    /// Gamma law with given shape and rate.
    double gamma(double shape, double rate) {
        if (shape <= 0.0) return 0.0;
        std::gamma_distribution<double> d(shape, 1.0 / rate);
        return d(engine_);
    }

    /// Inverse Gaussian law with given mean and shape (Michael, Schucany and
    /// Haas transformation, written in a form that stays accurate for tiny
    /// shape/mean ratios).
    double inverse_gaussian(double mean, double shape) {
        if (mean <= 0.0 || shape <= 0.0) return 0.0;
        const double n = normal();
        const double y = n * n;
        const double r = mean * y / (2.0 * shape);
        const double x = mean / (1.0 + r + std::sqrt(r * r + 2.0 * r));
        return uniform() * (mean + x) <= mean ? x : mean * mean / x;
    }

private:
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Runs `fn(index, stream)` for every replicate index in [0, n), each on its
/// own substream, and returns the results in index order. Work is split over
/// threads but results never depend on the split.
template <class Fn>
auto run_replicates(std::size_t n, std::uint64_t master_seed, std::uint64_t tag, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}, std::declval<RandomStream&>()))> {
    using Result = decltype(fn(std::size_t{}, std::declval<RandomStream&>()));
    std::vector<Result> out(n);
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, n);
    auto body = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream rng = RandomStream::substream(master_seed, i, tag);
            out[i] = fn(i, rng);
        }
    };
    if (workers <= 1) {
        body(0, n);
        return out;
    }
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(body, begin, end);
        }
    }  // joins
    return out;
}

}  // namespace ambit
