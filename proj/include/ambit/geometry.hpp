#pragma once

// Trawls, ambit sets and meta-time maps. Space is one-dimensional for trawls;
// coordinates inside a set are relative: (xi - x, s - t).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ambit/error.hpp"
#include "ambit/quadrature.hpp"
#include "ambit/random.hpp"

namespace ambit {

/// d(u) = exp(-lambda u)
struct ExponentialDepth {
    double lambda = 1.0;
};

/// Piecewise-linear depth through (u, d) knots starting at u = 0. A repeated
/// u gives a jump; the depth is 0 beyond the last knot.
struct TabulatedDepth {
    std::vector<std::pair<double, double>> knots;
};

/// Arbitrary nonincreasing integrable depth. `support` may be infinite.
struct FunctionDepth {
    std::function<double(double)> depth;
    double support = std::numeric_limits<double>::infinity();
};

using DepthFunction = std::variant<ExponentialDepth, TabulatedDepth, FunctionDepth>;

/// A = {(xi, s) : s <= 0, 0 <= xi <= d(-s)} with nonincreasing d.
class TrawlSet {
public:
    explicit TrawlSet(DepthFunction depth) : depth_(std::move(depth)) {
        validate();
        leb_ = overlap_uncached(0.0);
        if (!std::isfinite(leb_)) throw ModelError("trawl has infinite Lebesgue measure");
    }

    static TrawlSet exponential(double lambda) { return TrawlSet(ExponentialDepth{lambda}); }
    /// d = height on [0, width), 0 afterwards.
    static TrawlSet step(double width, double height = 1.0) {
        return TrawlSet(TabulatedDepth{{{0.0, height}, {width, height}, {width, 0.0}}});
    }

    const DepthFunction& depth_function() const noexcept { return depth_; }

    double depth(double u) const {
        if (u < 0.0) return 0.0;
        return std::visit(
            [u](const auto& d) -> double {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, ExponentialDepth>) {
                    return std::exp(-d.lambda * u);
                } else if constexpr (std::is_same_v<D, TabulatedDepth>) {
                    const auto& k = d.knots;
                    if (u > k.back().first) return 0.0;
                    // right-continuous at jumps: take the last knot with this u
                    auto it = std::upper_bound(k.begin(), k.end(), u,
                                               [](double v, const auto& p) { return v < p.first; });
                    if (it == k.end()) return k.back().second;
                    const auto& hi = *it;
                    const auto& lo = *(it - 1);
                    const double w = (u - lo.first) / (hi.first - lo.first);
                    return lo.second + w * (hi.second - lo.second);
                } else {
                    return u >= d.support ? 0.0 : d.depth(u);
                }
            },
            depth_);
    }

    /// Leb(A)
    double leb() const noexcept { return leb_; }

    /// Leb(A ∩ A_h) = int_h^inf d(u) du
    double overlap(double h) const {
        if (h < 0.0) throw std::invalid_argument("overlap lag must be nonnegative");
        if (h == 0.0) return leb_;
        return overlap_uncached(h);
    }

    /// (Leb(A_h \ A_0), Leb(A_0 \ A_h)); equal for a fixed-shape trawl.
    std::pair<double, double> increment_sets(double h) const {
        if (!(h > 0.0)) throw std::invalid_argument("increment lag must be positive");
        const double v = std::max(0.0, leb_ - overlap(h));
        return {v, v};
    }

    /// Smallest lag T with overlap(T) <= eps * leb, i.e. the lookback that
    /// leaves at most a fraction eps of the trawl outside the window.
    double lookback(double eps) const {
        if (leb_ == 0.0) return 0.0;
        if (const auto* e = std::get_if<ExponentialDepth>(&depth_)) return -std::log(eps) / e->lambda;
        const double target = eps * leb_;
        double hi = 1.0;
        while (overlap(hi) > target) {
            hi *= 2.0;
            if (hi > 1e12) throw WindowError("trawl tail decays too slowly", hi);
        }
        double lo = 0.0;
        for (int i = 0; i < 100 && hi - lo > 1e-12 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (overlap(mid) > target ? lo : hi) = mid;
        }
        return hi;
    }

    /// Lag u = -s of a point drawn uniformly from A (density d(u) / leb).
    double sample_lag(RandomStream& rng) const {
        if (const auto* e = std::get_if<ExponentialDepth>(&depth_)) return rng.exponential(1.0 / e->lambda);
        const double target = rng.uniform() * leb_;  // overlap(u) = target
        double hi = 1.0;
        while (overlap(hi) > target) hi *= 2.0;
        double lo = 0.0;
        for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
            const double mid = 0.5 * (lo + hi);
            (overlap(mid) > target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// U(xi) = sup{u >= 0 : d(u) >= xi}; negative when xi > d(0), infinite
    /// for xi <= 0 on unbounded support.
    double level_extent(double xi) const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (xi > depth(0.0)) return -1.0;
        if (const auto* e = std::get_if<ExponentialDepth>(&depth_)) {
            return xi <= 0.0 ? inf : -std::log(xi) / e->lambda;
        }
        if (const auto* t = std::get_if<TabulatedDepth>(&depth_)) {
            const auto& k = t->knots;
            if (xi <= 0.0) return k.back().first;
            for (std::size_t i = k.size() - 1; i > 0; --i) {
                // walk from the right: the last piece where d reaches xi
                const auto& lo = k[i - 1];
                const auto& hi = k[i];
                if (lo.second >= xi) {
                    if (hi.second >= xi) return hi.first;
                    if (hi.first == lo.first) return lo.first;
                    return lo.first + (lo.second - xi) / (lo.second - hi.second) * (hi.first - lo.first);
                }
            }
            return 0.0;
        }
        const auto& f = std::get<FunctionDepth>(depth_);
        if (xi <= 0.0) return f.support;
        double lo = 0.0, hi = 1.0;
        while (depth(hi) >= xi) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) return inf;
        }
        for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
            const double mid = 0.5 * (lo + hi);
            (depth(mid) >= xi ? lo : hi) = mid;
        }
        return lo;
    }

    /// Membership of the relative point (xi, s) in A.
    bool contains(double xi, double s) const { return s <= 0.0 && xi >= 0.0 && xi <= depth(-s); }

private:
    void validate() const {
        std::visit(
            [](const auto& d) {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, ExponentialDepth>) {
                    if (!(d.lambda > 0.0)) throw ModelError("exponential trawl needs lambda > 0");
                } else if constexpr (std::is_same_v<D, TabulatedDepth>) {
                    const auto& k = d.knots;
                    if (k.size() < 2) throw ModelError("tabulated trawl needs at least two knots");
                    if (k.front().first != 0.0) throw ModelError("tabulated trawl knots must start at u = 0");
                    for (std::size_t i = 0; i < k.size(); ++i) {
                        if (k[i].second < 0.0) throw ModelError("trawl depth must be nonnegative");
                        if (i > 0 && k[i].first < k[i - 1].first) throw ModelError("trawl knots must be sorted in u");
                        if (i > 0 && k[i].second > k[i - 1].second) throw ModelError("trawl depth must be nonincreasing");
                    }
                } else {
                    if (!d.depth) throw ModelError("function trawl needs a depth function");
                }
            },
            depth_);
    }

    double overlap_uncached(double h) const {
        return std::visit(
            [h](const auto& d) -> double {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, ExponentialDepth>) {
                    return std::exp(-d.lambda * h) / d.lambda;
                } else if constexpr (std::is_same_v<D, TabulatedDepth>) {
                    // exact trapezoid integral of the linear pieces right of h
                    double total = 0.0;
                    const auto& k = d.knots;
                    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
                        const double u0 = k[i].first, u1 = k[i + 1].first;
                        if (u1 <= h || u1 == u0) continue;
                        const double a = std::max(u0, h);
                        const double slope = (k[i + 1].second - k[i].second) / (u1 - u0);
                        const double da = k[i].second + slope * (a - u0);
                        total += 0.5 * (da + k[i + 1].second) * (u1 - a);
                    }
                    return total;
                } else {
                    auto f = [&](double u) { return d.depth(u); };
                    const double end = d.support;
                    if (h >= end) return 0.0;
                    const QuadratureOptions opt{1e-12, 1e-10, 4000};
                    if (std::isfinite(end)) return require_converged(integrate<double>(f, h, end, opt), "trawl overlap");
                    // u = h + e^v on the tail keeps power-law depths resolvable
                    auto g = [&](double v) {
                        const double e = std::exp(v);
                        return std::isfinite(e) ? d.depth(h + e) * e : 0.0;
                    };
                    return require_converged(integrate<double>(f, h, h + 1.0, opt), "trawl overlap") +
                           require_converged(integrate<double>(g, 0.0, std::numeric_limits<double>::infinity(), opt),
                                             "trawl overlap tail");
                }
            },
            depth_);
    }

    DepthFunction depth_;
    double leb_ = 0.0;
};

/// Box(x) x (t - T_back, t] in dimension 1 or 2.
struct ProductAmbitSet {
    std::vector<double> half_width{1.0};
    double time_depth = 1.0;
};

using AmbitSetRepr = std::variant<ProductAmbitSet, TrawlSet>;

/// Nonanticipative ambit set A_t(x) = A + (x, t).
class AmbitSet {
public:
    AmbitSet(AmbitSetRepr repr) : repr_(std::move(repr)) {
        if (const auto* p = std::get_if<ProductAmbitSet>(&repr_)) {
            if (p->half_width.empty() || p->half_width.size() > 2) {
                throw ModelError("product ambit sets support spatial dimension 1 or 2");
            }
            for (double w : p->half_width) {
                if (!(w >= 0.0)) throw ModelError("box half-width must be nonnegative");
            }
            if (!(p->time_depth >= 0.0)) throw ModelError("time depth must be nonnegative");
        }
    }

    const AmbitSetRepr& repr() const noexcept { return repr_; }
    bool is_trawl() const noexcept { return std::holds_alternative<TrawlSet>(repr_); }
    const TrawlSet* trawl() const noexcept { return std::get_if<TrawlSet>(&repr_); }

    std::size_t spatial_dimension() const {
        if (const auto* p = std::get_if<ProductAmbitSet>(&repr_)) return p->half_width.size();
        return 1;
    }

    /// Membership of the relative point (xi - x, s - t); xi has
    /// spatial_dimension() entries.
    bool contains(const std::vector<double>& xi_rel, double s_rel) const {
        if (s_rel > 0.0) return false;
        if (const auto* p = std::get_if<ProductAmbitSet>(&repr_)) {
            if (s_rel <= -p->time_depth) return false;
            for (std::size_t i = 0; i < p->half_width.size(); ++i) {
                if (std::abs(xi_rel.at(i)) > p->half_width[i]) return false;
            }
            return true;
        }
        return std::get<TrawlSet>(repr_).contains(xi_rel.at(0), s_rel);
    }

    bool contains(double xi_rel, double s_rel) const { return contains(std::vector<double>{xi_rel}, s_rel); }

    /// Spatial section at lag u = t - s >= 0 for 1-D sets: [lo, hi] relative
    /// to x, or an empty interval (lo > hi).
    std::pair<double, double> section(double u) const {
        if (u < 0.0) return {1.0, 0.0};
        if (const auto* p = std::get_if<ProductAmbitSet>(&repr_)) {
            if (u >= p->time_depth) return {1.0, 0.0};
            return {-p->half_width[0], p->half_width[0]};
        }
        const double d = std::get<TrawlSet>(repr_).depth(u);
        if (d <= 0.0) return {1.0, 0.0};
        return {0.0, d};
    }

    /// Temporal extent (infinite for trawls with unbounded support).
    double time_depth() const {
        if (const auto* p = std::get_if<ProductAmbitSet>(&repr_)) return p->time_depth;
        const auto& t = std::get<TrawlSet>(repr_);
        if (const auto* tab = std::get_if<TabulatedDepth>(&t.depth_function())) return tab->knots.back().first;
        if (const auto* f = std::get_if<FunctionDepth>(&t.depth_function())) return f->support;
        return std::numeric_limits<double>::infinity();
    }

    double volume() const {
        if (const auto* p = std::get_if<ProductAmbitSet>(&repr_)) {
            double v = p->time_depth;
            for (double w : p->half_width) v *= 2.0 * w;
            return v;
        }
        return std::get<TrawlSet>(repr_).leb();
    }

private:
    AmbitSetRepr repr_;
};

/// Axis-aligned rectangle [x0, x1] x [t0, t1].
struct Rectangle {
    double x0 = 0.0, x1 = 1.0;
    double t0 = 0.0, t1 = 1.0;
};

/// Meta-time induced by a nonnegative density field tau_t(x):
/// T(x, t) = (x, tau_t^+(x)), tau_t^+(x) = int_0^t tau_s(x) ds.
class MetaTimeMap {
public:
    explicit MetaTimeMap(std::function<double(double x, double t)> tau) : tau_(std::move(tau)) {
        if (!tau_) throw ModelError("meta-time needs a density field");
    }

    static MetaTimeMap identity() {
        return MetaTimeMap([](double, double) { return 1.0; });
    }

    double tau(double x, double t) const {
        const double v = tau_(x, t);
        if (v < 0.0 || std::isnan(v)) {
            throw ModelError("meta-time density is negative at (x, t) = (" + std::to_string(x) + ", " +
                             std::to_string(t) + ")");
        }
        return v;
    }

    double tau_plus(double x, double t) const {
        auto r = integrate<double>([&](double s) { return tau(x, s); }, 0.0, t, QuadratureOptions{1e-12, 1e-10, 2000});
        return require_converged(r, "meta-time integral");
    }

    /// Leb(T(A)) = int_A tau_s(x) dx ds
    double image_volume(const Rectangle& a) const {
        const QuadratureOptions opt{1e-12, 1e-10, 2000};
        auto outer = [&](double t) {
            auto r = integrate<double>([&](double x) { return tau(x, t); }, a.x0, a.x1, opt);
            return require_converged(r, "meta-time image volume");
        };
        auto r = integrate<double>(outer, a.t0, a.t1, opt);
        return require_converged(r, "meta-time image volume");
    }

private:
    std::function<double(double, double)> tau_;
};

inline double leb_measure(const TrawlSet& a) { return a.leb(); }
inline double overlap(const TrawlSet& a, double h) { return a.overlap(h); }
inline std::pair<double, double> increment_sets(const TrawlSet& a, double h) { return a.increment_sets(h); }
inline double meta_time_image_volume(const MetaTimeMap& m, const Rectangle& a) { return m.image_volume(a); }

}  // namespace ambit
