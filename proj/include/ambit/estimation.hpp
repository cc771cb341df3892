#pragma once

// Empirical statistics with Monte-Carlo standard errors.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ambit {

struct EmpiricalSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;            ///< unbiased
    std::array<double, 4> k{};        ///< k-statistics k1..k4
    std::array<double, 4> se{};       ///< standard errors of k1..k4
};

namespace detail {

struct PowerSums {
    double n = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;

    void add(double x, double sign = 1.0) {
        const double x2 = x * x;
        n += sign;
        s1 += sign * x;
        s2 += sign * x2;
        s3 += sign * x2 * x;
        s4 += sign * x2 * x2;
    }

    std::array<double, 4> kstats() const {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        std::array<double, 4> k{nan, nan, nan, nan};
        if (n >= 1) k[0] = s1 / n;
        if (n >= 2) k[1] = (n * s2 - s1 * s1) / (n * (n - 1));
        if (n >= 3) k[2] = (n * n * s3 - 3 * n * s2 * s1 + 2 * s1 * s1 * s1) / (n * (n - 1) * (n - 2));
        if (n >= 4) {
            k[3] = (-6 * s1 * s1 * s1 * s1 + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 -
                    4 * n * (n + 1) * s1 * s3 + n * n * (n + 1) * s4) /
                   (n * (n - 1) * (n - 2) * (n - 3));
        }
        return k;
    }
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

/// Unbiased k-statistics; SE of k1 from the sample variance, SEs of k2..k4 by
/// the delete-one jackknife (computed from leave-one-out power sums).
inline EmpiricalSummary summarize(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("summarize needs at least two samples");
    EmpiricalSummary out;
    out.n = n;
    // k-statistics are shift invariant; centre for numerical stability
    const double centre = detail::mean_of(samples);
    detail::PowerSums full;
    for (double x : samples) full.add(x - centre);
    out.k = full.kstats();
    out.k[0] += centre;
    out.mean = out.k[0];
    out.variance = std::max(0.0, out.k[1]);
    out.k[1] = out.variance;
    out.se[0] = std::sqrt(out.variance / static_cast<double>(n));

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 3> sum{}, sum_sq{};
    const bool enough = n >= 5;
    if (enough) {
        for (double x : samples) {
            detail::PowerSums loo = full;
            loo.add(x - centre, -1.0);
            const auto k = loo.kstats();
            for (int j = 0; j < 3; ++j) {
                sum[j] += k[j + 1];
                sum_sq[j] += k[j + 1] * k[j + 1];
            }
        }
    }
    const double nd = static_cast<double>(n);
    for (int j = 0; j < 3; ++j) {
        if (!enough) {
            out.se[j + 1] = nan;
            continue;
        }
        const double m = sum[j] / nd;
        const double ss = std::max(0.0, sum_sq[j] - nd * m * m);
        out.se[j + 1] = std::sqrt((nd - 1.0) / nd * ss);
    }
    return out;
}

struct CfEstimate {
    double zeta = 0.0;
    std::complex<double> value;
    double se_re = 0.0;
    double se_im = 0.0;
};

/// (1/n) sum e^{i zeta X_j} with componentwise standard errors.
inline std::vector<CfEstimate> empirical_cf(const std::vector<double>& samples, const std::vector<double>& zetas) {
    if (samples.empty()) throw std::invalid_argument("empirical_cf needs samples");
    std::vector<CfEstimate> out;
    out.reserve(zetas.size());
    const double n = static_cast<double>(samples.size());
    for (double z : zetas) {
        CfEstimate e;
        e.zeta = z;
        if (z == 0.0) {
            e.value = 1.0;
            out.push_back(e);
            continue;
        }
        double sc = 0, ss = 0, sc2 = 0, ss2 = 0;
        for (double x : samples) {
            const double c = std::cos(z * x), s = std::sin(z * x);
            sc += c;
            ss += s;
            sc2 += c * c;
            ss2 += s * s;
        }
        const double mc = sc / n, ms = ss / n;
        e.value = {mc, ms};
        if (n > 1) {
            e.se_re = std::sqrt(std::max(0.0, (sc2 - n * mc * mc) / (n - 1)) / n);
            e.se_im = std::sqrt(std::max(0.0, (ss2 - n * ms * ms) / (n - 1)) / n);
        }
        out.push_back(e);
    }
    return out;
}

/// log of the empirical CF; SEs from the influence function (e^{i zeta X} - phi) / phi.
inline std::vector<CfEstimate> empirical_log_cf(const std::vector<double>& samples, const std::vector<double>& zetas) {
    std::vector<CfEstimate> out = empirical_cf(samples, zetas);
    const double n = static_cast<double>(samples.size());
    for (auto& e : out) {
        const std::complex<double> phi = e.value;
        e.value = std::log(phi);
        if (e.zeta == 0.0 || n < 2) continue;
        double sr = 0, si = 0;
        for (double x : samples) {
            const std::complex<double> psi = std::polar(1.0, e.zeta * x) / phi - 1.0;
            sr += psi.real() * psi.real();
            si += psi.imag() * psi.imag();
        }
        e.se_re = std::sqrt(sr / (n - 1.0) / n);
        e.se_im = std::sqrt(si / (n - 1.0) / n);
    }
    return out;
}

enum class AcfNormalization {
    PairCount,  ///< divide lag-h sums by the number of pairs
    Biased,     ///< divide by path length (positive semidefinite)
};

struct AcfEstimate {
    std::size_t lag = 0;
    double value = 1.0;
    double se = 0.0;
};

/// Pooled ACF over independent replicate paths on a common regular grid.
/// Uses the grand mean; the ratio of replicate-averaged autocovariances gets a
/// delta-method SE computed across replicates.
inline std::vector<AcfEstimate> empirical_acf(const std::vector<std::vector<double>>& paths,
                                              const std::vector<std::size_t>& lags,
                                              AcfNormalization norm = AcfNormalization::PairCount) {
    if (paths.empty()) throw std::invalid_argument("empirical_acf needs at least one path");
    const std::size_t len = paths.front().size();
    for (const auto& p : paths) {
        if (p.size() != len) throw std::invalid_argument("empirical_acf paths must share a length");
    }
    for (std::size_t h : lags) {
        if (h >= len) throw std::invalid_argument("acf lag " + std::to_string(h) + " beyond path length");
    }
    double grand = 0.0;
    for (const auto& p : paths)
        for (double y : p) grand += y;
    grand /= static_cast<double>(len * paths.size());

    auto autocov = [&](const std::vector<double>& p, std::size_t h) {
        double s = 0.0;
        for (std::size_t t = 0; t + h < len; ++t) s += (p[t] - grand) * (p[t + h] - grand);
        const double denom = norm == AcfNormalization::PairCount ? static_cast<double>(len - h) : static_cast<double>(len);
        return s / denom;
    };

    const std::size_t r = paths.size();
    std::vector<double> c0(r);
    for (std::size_t i = 0; i < r; ++i) c0[i] = autocov(paths[i], 0);
    const double b = detail::mean_of(c0);

    std::vector<AcfEstimate> out;
    for (std::size_t h : lags) {
        AcfEstimate e;
        e.lag = h;
        if (h == 0) {
            out.push_back(e);
            continue;
        }
        std::vector<double> ch(r);
        for (std::size_t i = 0; i < r; ++i) ch[i] = autocov(paths[i], h);
        const double a = detail::mean_of(ch);
        e.value = a / b;
        if (r > 1) {
            std::vector<double> resid(r);
            for (std::size_t i = 0; i < r; ++i) resid[i] = (ch[i] - e.value * c0[i]) / b;
            e.se = detail::sample_sd(resid) / std::sqrt(static_cast<double>(r));
        }
        out.push_back(e);
    }
    return out;
}

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

inline Estimate mean_estimate(const std::vector<double>& x) {
    if (x.size() < 2) throw std::invalid_argument("mean_estimate needs at least two samples");
    return {detail::mean_of(x), detail::sample_sd(x) / std::sqrt(static_cast<double>(x.size()))};
}

/// Sample covariance with an influence-function SE.
inline Estimate covariance(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw std::invalid_argument("covariance needs two equal-length samples (n >= 3)");
    const double mx = detail::mean_of(x), my = detail::mean_of(y);
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = (x[i] - mx) * (y[i] - my);
    const double nd = static_cast<double>(n);
    return {detail::mean_of(prod) * nd / (nd - 1.0), detail::sample_sd(prod) / std::sqrt(nd)};
}

/// Pearson correlation with an influence-function SE.
inline Estimate correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw std::invalid_argument("correlation needs two equal-length samples (n >= 3)");
    const double mx = detail::mean_of(x), my = detail::mean_of(y);
    const double sx = detail::sample_sd(x), sy = detail::sample_sd(y);
    if (sx == 0.0 || sy == 0.0) throw std::invalid_argument("correlation of a constant sample");
    std::vector<double> u(n), v(n);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = (x[i] - mx) / sx;
        v[i] = (y[i] - my) / sy;
        r += u[i] * v[i];
    }
    r /= static_cast<double>(n - 1);
    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = u[i] * v[i] - 0.5 * r * (u[i] * u[i] + v[i] * v[i]);
    return {r, detail::sample_sd(psi) / std::sqrt(static_cast<double>(n))};
}

/// |value - target| <= k * se
inline bool within_se(double value, double target, double se, double k = 3.0) {
    return std::abs(value - target) <= k * se;
}

}  // namespace ambit
