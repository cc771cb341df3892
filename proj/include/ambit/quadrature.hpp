#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "ambit/error.hpp"

namespace ambit {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_intervals = 4000;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
    /// Subinterval (in the original variable) carrying the largest error
    /// estimate when the routine stopped.
    double worst_lo = 0.0;
    double worst_hi = 0.0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
    double lo, hi;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gauss_kronrod_panel(F& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const T fc = f(c);
    T kronrod = fc * kKronrodWeights[7];
    T gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kKronrodNodes[j];
        const T sum = f(c - dx) + f(c + dx);
        kronrod += sum * kKronrodWeights[j];
        if (j % 2 == 1) gauss += sum * kGaussWeights[j / 2];
    }
    Panel<T> p{lo, hi, kronrod * h, 0.0};
    p.error = std::abs((kronrod - gauss) * h);
    return p;
}

template <class T>
bool is_finite_value(const T& v) {
    if constexpr (std::is_floating_point_v<T>) {
        return std::isfinite(v);
    } else {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    }
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
/// T is double or std::complex<double>. Never throws; inspect `converged`.
template <class T, class F>
QuadratureResult<T> integrate_finite(F&& f, double lo, double hi, const QuadratureOptions& opt = {}) {
    QuadratureResult<T> res;
    if (!(hi > lo)) {
        res.converged = true;
        return res;
    }
    std::priority_queue<detail::Panel<T>> heap;
    auto first = detail::gauss_kronrod_panel<T>(f, lo, hi);
    T total = first.value;
    double total_err = first.error;
    heap.push(first);
    std::size_t count = 1;
    while (true) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (!detail::is_finite_value(total) || !std::isfinite(total_err)) break;
        if (total_err <= target) {
            res.converged = true;
            break;
        }
        if (count >= opt.max_intervals) break;
        auto worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) break;  // cannot split further
        heap.pop();
        auto left = detail::gauss_kronrod_panel<T>(f, worst.lo, mid);
        auto right = detail::gauss_kronrod_panel<T>(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
        if (count % 64 == 0) {
            // Re-sum to limit drift from incremental updates.
            std::priority_queue<detail::Panel<T>> copy = heap;
            T s{};
            double e = 0.0;
            while (!copy.empty()) {
                s += copy.top().value;
                e += copy.top().error;
                copy.pop();
            }
            total = s;
            total_err = e;
        }
    }
    res.value = total;
    res.error = total_err;
    res.intervals = count;
    if (!heap.empty()) {
        res.worst_lo = heap.top().lo;
        res.worst_hi = heap.top().hi;
    }
    if (!detail::is_finite_value(total)) res.converged = false;
    return res;
}

/// Adaptive quadrature on [lo, hi] where either end may be infinite.
/// Infinite ends are mapped to a finite interval via x = a + t/(1-t).
template <class T, class F>
QuadratureResult<T> integrate(F&& f, double lo, double hi, const QuadratureOptions& opt = {}) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (lo == hi) {
        QuadratureResult<T> r;
        r.converged = true;
        return r;
    }
    if (lo > hi) {
        auto r = integrate<T>(f, hi, lo, opt);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = (lo == -inf);
    const bool hi_inf = (hi == inf);
    if (!lo_inf && !hi_inf) return integrate_finite<T>(f, lo, hi, opt);
    if (lo_inf && hi_inf) {
        auto a = integrate<T>(f, -inf, 0.0, opt);
        auto b = integrate<T>(f, 0.0, inf, opt);
        QuadratureResult<T> r;
        r.value = a.value + b.value;
        r.error = a.error + b.error;
        r.intervals = a.intervals + b.intervals;
        r.converged = a.converged && b.converged;
        const bool a_worse = a.error >= b.error;
        r.worst_lo = a_worse ? a.worst_lo : b.worst_lo;
        r.worst_hi = a_worse ? a.worst_hi : b.worst_hi;
        return r;
    }
    const double anchor = hi_inf ? lo : hi;
    const double sign = hi_inf ? 1.0 : -1.0;
    auto mapped = [&](double t) -> T {
        const double one_minus = 1.0 - t;
        if (one_minus <= 0.0) return T{};
        const double x = anchor + sign * t / one_minus;
        const T v = f(x);
        const double jac = 1.0 / (one_minus * one_minus);
        if (!detail::is_finite_value(v) && std::isinf(x)) return T{};
        return v * jac;
    };
    auto r = integrate_finite<T>(mapped, 0.0, 1.0, opt);
    auto back = [&](double t) { return t >= 1.0 ? sign * inf : anchor + sign * t / (1.0 - t); };
    double a = back(r.worst_lo), b = back(r.worst_hi);
    r.worst_lo = std::min(a, b);
    r.worst_hi = std::max(a, b);
    return r;
}

/// As `integrate` but splits at the given interior breakpoints first.
template <class T, class F>
QuadratureResult<T> integrate_pieces(F&& f, std::vector<double> points, const QuadratureOptions& opt = {}) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    QuadratureResult<T> total;
    total.converged = true;
    double worst_err = -1.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        auto r = integrate<T>(f, points[i], points[i + 1], opt);
        total.value += r.value;
        total.error += r.error;
        total.intervals += r.intervals;
        total.converged = total.converged && r.converged;
        if (r.error > worst_err) {
            worst_err = r.error;
            total.worst_lo = r.worst_lo;
            total.worst_hi = r.worst_hi;
        }
    }
    return total;
}

/// Throws QuadratureError if the result did not converge.
template <class T>
T require_converged(const QuadratureResult<T>& r, const std::string& context) {
    if (!r.converged) {
        throw QuadratureError(context + ": quadrature did not converge", std::abs(r.value), r.error);
    }
    return r.value;
}

}  // namespace ambit
