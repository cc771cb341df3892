#pragma once

// Trawl processes Y_t = L(A_t): grid and exact point simulators plus the
// closed-form cumulant, autocorrelation and increment formulas.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "ambit/error.hpp"
#include "ambit/geometry.hpp"
#include "ambit/lattice.hpp"
#include "ambit/levy_basis.hpp"
#include "ambit/quadrature.hpp"
#include "ambit/random.hpp"

namespace ambit {

struct TrawlModel {
    TrawlSet trawl;
    LevySeed seed;
};

struct SamplePath {
    std::vector<double> times;
    std::vector<double> values;
};

struct GridOptions {
    double dx = 0.01;
    double dt = 0.01;
    double tail_eps = 1e-4;       ///< depth mass left outside the window, relative to leb
    double max_lookback = 1e4;
};

/// Marked Poisson points (xi, s, mark).
struct PointPattern {
    struct Point {
        double xi, s, mark;
    };
    std::vector<Point> points;
};

namespace detail {

inline void check_times(const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("need at least one evaluation time");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] < times[i - 1]) throw std::invalid_argument("evaluation times must be sorted");
    }
}

}  // namespace detail

/// Lattice layout covering the trawls A_t for all t in `times`, with the
/// lookback chosen from the tail tolerance.
inline BasisLattice trawl_lattice(const TrawlSet& trawl, const std::vector<double>& times, const GridOptions& opt) {
    detail::check_times(times);
    const AmbitSet set(trawl);
    return field_lattice(set, {0.0}, times, opt.dx, opt.dt, ambit_lookback(set, opt.tail_eps, opt.max_lookback));
}

/// Y_t as the sum of lattice cells whose centres lie in A_t.
inline std::vector<double> trawl_sums(const TrawlSet& trawl, const BasisLattice& lat, const std::vector<double>& times) {
    const AmbitSet set(trawl);
    std::vector<double> y(times.size(), 0.0);
    for (std::size_t m = 0; m < times.size(); ++m) y[m] = lattice_sum(lat, set, 0.0, times[m]);
    return y;
}

/// Grid simulation: cell increments are drawn once and shared by every A_t.
inline SamplePath simulate_grid(const TrawlModel& model, const std::vector<double>& times, const GridOptions& opt,
                                RandomStream& rng) {
    BasisLattice lat = trawl_lattice(model.trawl, times, opt);
    lat.draw(CellIncrementSampler(model.seed, opt.dx * opt.dt), rng);
    return {times, trawl_sums(model.trawl, lat, times)};
}

/// Marked Poisson points on A_{t_min} ∪ (t_min, t_max] x [0, d(0)].
inline PointPattern sample_trawl_points(const TrawlModel& model, double t_min, double t_max, RandomStream& rng) {
    const LevySeed& seed = model.seed;
    if (!seed.is_finite_activity() || seed.b() != 0.0) {
        throw ModelError("exact point simulation needs a finite-activity seed without Gaussian part");
    }
    std::vector<double> rate;
    std::vector<const JumpComponent*> comps;
    for (const auto& part : seed.levy_measure().components) {
        if (part.weight <= 0.0) continue;
        rate.push_back(part.weight * detail::total_mass(part.jumps));
        comps.push_back(&part.jumps);
    }
    const double total_rate = std::accumulate(rate.begin(), rate.end(), 0.0);
    PointPattern pp;
    if (total_rate <= 0.0) return pp;
    auto mark = [&]() {
        double u = rng.uniform() * total_rate;
        std::size_t i = 0;
        while (i + 1 < rate.size() && u >= rate[i]) u -= rate[i++];
        return detail::sample_jump(*comps[i], rng);
    };
    const TrawlSet& trawl = model.trawl;
    const std::uint64_t n_trawl = rng.poisson(total_rate * trawl.leb());
    for (std::uint64_t i = 0; i < n_trawl; ++i) {
        const double u = trawl.sample_lag(rng);
        const double xi = rng.uniform() * trawl.depth(u);
        pp.points.push_back({xi, t_min - u, mark()});
    }
    const double height = trawl.depth(0.0);
    const double span = t_max - t_min;
    const std::uint64_t n_strip = span > 0.0 ? rng.poisson(total_rate * span * height) : 0;
    for (std::uint64_t i = 0; i < n_strip; ++i) {
        const double s = t_min + rng.uniform() * span;
        const double xi = rng.uniform() * height;
        pp.points.push_back({xi, s, mark()});
    }
    return pp;
}

/// Exact simulation for compound Poisson seeds (plus drift): Y_t is the drift
/// times Leb(A) plus the marks of the points inside A_t.
inline SamplePath simulate_exact_cp(const TrawlModel& model, const std::vector<double>& times, RandomStream& rng) {
    detail::check_times(times);
    const PointPattern pp = sample_trawl_points(model, times.front(), times.back(), rng);
    const double base = model.seed.drift() * model.trawl.leb();
    SamplePath out{times, std::vector<double>(times.size(), base)};
    for (const auto& p : pp.points) {
        for (std::size_t m = 0; m < times.size(); ++m) {
            if (p.s > times[m]) continue;
            if (p.xi <= model.trawl.depth(times[m] - p.s)) out.values[m] += p.mark;
        }
    }
    return out;
}

/// Leb(A) C(zeta; L')
inline cplx marginal_cumulant(const TrawlModel& model, double zeta) {
    if (zeta == 0.0) return 0.0;
    return model.trawl.leb() * seed_cumulant(model.seed, zeta);
}

/// kappa_i(Y) = Leb(A) kappa_i(L')
inline double marginal_cumulant_order(const TrawlModel& model, int order) {
    return model.trawl.leb() * cumulant(model.seed, order);
}

/// Leb(A ∩ A_h) / Leb(A); independent of the seed.
inline double acf(const TrawlModel& model, double h) {
    if (h < 0.0) throw std::invalid_argument("acf lag must be nonnegative");
    return model.trawl.overlap(h) / model.trawl.leb();
}

/// Cov(Y_t, Y_{t+h}) = Leb(A ∩ A_h) Var(L')
inline double autocovariance(const TrawlModel& model, double h) {
    return model.trawl.overlap(std::abs(h)) * seed_variance(model.seed);
}

/// Cumulant function of Y_{t+h} - Y_t.
inline cplx increment_cumulant(const TrawlModel& model, double h, double zeta) {
    const auto [fwd, bwd] = model.trawl.increment_sets(h);
    if (zeta == 0.0) return 0.0;
    return fwd * seed_cumulant(model.seed, zeta) + bwd * seed_cumulant(model.seed, -zeta);
}

/// mu = sum_j theta_j delta_{t_j}
struct DiracSum {
    std::vector<std::pair<double, double>> atoms;  ///< (t_j, theta_j)
};

/// mu = 1_[a, b](t) dt
struct IntervalMeasure {
    double a = 0.0;
    double b = 1.0;
};

using FunctionalMeasure = std::variant<DiracSum, IntervalMeasure>;

namespace detail {

// Sorted atoms; exact decomposition of the union of shifted trawls into the
// regions covered by the consecutive blocks {i, ..., m} of atoms.
inline cplx dirac_functional_exact(const TrawlModel& model, DiracSum mu, double zeta) {
    auto& at = mu.atoms;
    std::sort(at.begin(), at.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    const std::size_t n = at.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto G = [&](double u) { return u == inf ? 0.0 : model.trawl.overlap(std::max(0.0, u)); };
    auto tt = [&](long i) -> double {  // t_0 = -inf, t_{n+1} = +inf (1-based)
        if (i <= 0) return -inf;
        if (i > static_cast<long>(n)) return inf;
        return at[static_cast<std::size_t>(i - 1)].first;
    };
    // Leb of {s in (t_{i-1}, t_i], xi <= d(t_m - s)} = G(t_m - t_i) - G(t_m - t_{i-1})
    auto slab = [&](long i, long m) {
        if (m > static_cast<long>(n)) return 0.0;
        return G(tt(m) - tt(i)) - G(tt(m) - tt(i - 1));
    };
    cplx total = 0.0;
    for (long i = 1; i <= static_cast<long>(n); ++i) {
        double theta = 0.0;
        for (long m = i; m <= static_cast<long>(n); ++m) {
            theta += at[static_cast<std::size_t>(m - 1)].second;
            const double vol = slab(i, m) - slab(i, m + 1);
            if (vol > 0.0) total += vol * seed_cumulant(model.seed, zeta * theta);
        }
    }
    return total;
}

inline cplx interval_functional(const TrawlModel& model, const IntervalMeasure& mu, double zeta) {
    if (!(mu.b >= mu.a)) throw std::invalid_argument("interval measure needs a <= b");
    if (mu.b == mu.a || zeta == 0.0) return 0.0;
    const double a = mu.a, b = mu.b;
    const QuadratureOptions opt{1e-11, 1e-9, 3000};
    auto inner = [&](double xi) -> cplx {
        const double U = model.trawl.level_extent(xi);
        if (U < 0.0) return 0.0;
        // h(s) = max(0, min(b, s + U) - max(a, s)) is piecewise linear in s
        auto h = [&](double s) { return std::max(0.0, std::min(b, s + U) - std::max(a, s)); };
        std::vector<double> pts{a - U, a, b - U, b};
        std::sort(pts.begin(), pts.end());
        cplx sum = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double s0 = std::max(pts[i], a - U), s1 = pts[i + 1];
            if (!(s1 > s0)) continue;
            const double h0 = h(s0), h1 = h(s1);
            if (std::abs(h1 - h0) < 1e-15 * (s1 - s0)) {
                sum += (s1 - s0) * seed_cumulant(model.seed, zeta * h0);
                continue;
            }
            // linear piece: (len / (h1 - h0)) int_{h0}^{h1} C(zeta y) dy
            auto f = [&](double y) { return seed_cumulant(model.seed, zeta * y); };
            auto r = integrate<cplx>(f, std::min(h0, h1), std::max(h0, h1), opt);
            sum += (s1 - s0) / std::abs(h1 - h0) * require_converged(r, "interval functional");
        }
        return sum;
    };
    auto r = integrate<cplx>(inner, 0.0, model.trawl.depth(0.0), opt);
    return require_converged(r, "interval functional");
}

}  // namespace detail

/// C{zeta ‡ mu(Y)} = int C{zeta h_A(xi, s) ‡ L'} dxi ds with
/// h_A(xi, s) = int 1_A(xi, s - t) mu(dt).
inline cplx generalized_cumulant_functional(const TrawlModel& model, const FunctionalMeasure& mu, double zeta) {
    if (zeta == 0.0) return 0.0;
    return std::visit(detail::overloaded{
                          [&](const DiracSum& d) { return detail::dirac_functional_exact(model, d, zeta); },
                          [&](const IntervalMeasure& i) { return detail::interval_functional(model, i, zeta); },
                      },
                      mu);
}

/// Dirac-sum functional by nested quadrature over xi, with the exact
/// piecewise-constant integral in s for each xi. Used as a cross-check.
inline cplx dirac_functional_quadrature(const TrawlModel& model, const DiracSum& mu, double zeta) {
    if (zeta == 0.0) return 0.0;
    std::vector<double> brk{0.0, model.trawl.depth(0.0)};
    for (const auto& [ti, thi] : mu.atoms) {
        for (const auto& [tj, thj] : mu.atoms) {
            if (tj >= ti) brk.push_back(model.trawl.depth(tj - ti));
        }
    }
    auto inner = [&](double xi) -> cplx {
        const double U = model.trawl.level_extent(xi);
        if (U < 0.0) return 0.0;
        // h(s) = sum theta_j 1{t_j - U <= s <= t_j}
        std::vector<double> pts;
        for (const auto& [t, th] : mu.atoms) {
            pts.push_back(t - U);
            pts.push_back(t);
        }
        std::sort(pts.begin(), pts.end());
        cplx sum = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double len = pts[i + 1] - pts[i];
            if (!(len > 0.0) || !std::isfinite(len)) continue;
            const double mid = 0.5 * (pts[i] + pts[i + 1]);
            double h = 0.0;
            for (const auto& [t, th] : mu.atoms) {
                if (mid <= t && mid >= t - U) h += th;
            }
            if (h != 0.0) sum += len * seed_cumulant(model.seed, zeta * h);
        }
        return sum;
    };
    auto r = integrate_pieces<cplx>(inner, brk, QuadratureOptions{1e-11, 1e-9, 4000});
    return require_converged(r, "Dirac functional");
}

}  // namespace ambit
