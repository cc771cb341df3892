#pragma once

// Ambit fields Y_t(x) = mu + int_{A_t(x)} h sigma dL + int_{D_t(x)} q a dxi ds
// with one spatial dimension: lattice simulation, conditional cumulants,
// second-order structure, integrability checks, the semimartingale
// decomposition and Lévy semistationary processes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ambit/error.hpp"
#include "ambit/estimation.hpp"
#include "ambit/geometry.hpp"
#include "ambit/lattice.hpp"
#include "ambit/levy_basis.hpp"
#include "ambit/quadrature.hpp"
#include "ambit/random.hpp"
#include "ambit/trawl.hpp"
#include "ambit/volatility.hpp"

namespace ambit {

/// h(x, t; xi, s). `dt` is the derivative in the second argument t.
struct Kernel {
    using Fn = std::function<double(double x, double t, double xi, double s)>;
    Fn h;
    Fn dt;
    bool stationary_homogeneous = false;
    bool time_free = false;

    double operator()(double x, double t, double xi, double s) const { return h(x, t, xi, s); }

    static Kernel constant(double c) {
        return {[c](double, double, double, double) { return c; }, [](double, double, double, double) { return 0.0; },
                true, true};
    }
    /// h = g(t - s) for a temporal lag kernel g.
    static Kernel temporal(std::function<double(double)> g, std::function<double(double)> dg = {}) {
        Kernel k;
        k.h = [g](double, double t, double, double s) { return g(t - s); };
        if (dg) k.dt = [dg](double, double t, double, double s) { return dg(t - s); };
        k.stationary_homogeneous = true;
        return k;
    }
    static Kernel exponential(double lambda) {
        return temporal([lambda](double u) { return std::exp(-lambda * u); },
                        [lambda](double u) { return -lambda * std::exp(-lambda * u); });
    }
};

struct AmbitFieldSpec {
    double mu = 0.0;
    Kernel kernel;
    AmbitSet A;
    VolatilityFieldHandle vol;
    LevySeed seed;
    std::optional<Kernel> drift_kernel;                       ///< q
    std::function<double(double xi, double s)> drift_field;  ///< a
    std::optional<AmbitSet> D;                                ///< defaults to A

    const AmbitSet& drift_set() const { return D ? *D : A; }
};

struct FieldGrid {
    std::vector<double> xs{0.0};
    std::vector<double> ts{0.0};
    double dx = 0.05;
    double dt = 0.05;
    double tail_eps = 1e-4;
    double max_lookback = 1e3;
};

struct SampleField {
    std::vector<double> xs, ts;
    std::vector<double> values;  ///< row-major in time

    double at(std::size_t it, std::size_t ix) const { return values[it * xs.size() + ix]; }
};

namespace detail {

inline void check_spec(const AmbitFieldSpec& spec) {
    if (!spec.kernel.h) throw ModelError("ambit field needs a kernel");
    if (spec.A.spatial_dimension() != 1) throw ModelError("field computations use one spatial dimension");
    if (spec.drift_kernel && !spec.drift_field) throw ModelError("drift kernel given without drift field");
}

inline BasisLattice lattice_for(const AmbitFieldSpec& spec, const FieldGrid& g) {
    return field_lattice(spec.A, g.xs, g.ts, g.dx, g.dt, ambit_lookback(spec.A, g.tail_eps, g.max_lookback));
}

/// sigma at (xi centre, s left edge) for every lattice cell, column-major.
struct LatticeVol {
    long j_min = 0;
    long j_count = 0;
    std::vector<double> sigma;  ///< [k * j_count + (j - j_min)]

    double at(std::size_t k, long j) const {
        return sigma[k * static_cast<std::size_t>(j_count) + static_cast<std::size_t>(j - j_min)];
    }
};

inline LatticeVol vol_on_lattice(const VolatilityFieldHandle& vol, const BasisLattice& lat, RandomStream& rng) {
    LatticeVol out;
    long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
    for (std::size_t k = 0; k < lat.columns(); ++k) {
        if (lat.row_hi(k) <= lat.row_lo(k)) continue;
        lo = std::min(lo, lat.row_lo(k));
        hi = std::max(hi, lat.row_hi(k));
    }
    if (lo > hi) return out;
    out.j_min = lo;
    out.j_count = hi - lo;
    std::vector<double> xs, ts;
    for (long j = lo; j < hi; ++j) xs.push_back(lat.xi_center(j));
    for (std::size_t k = 0; k < lat.columns(); ++k) ts.push_back(lat.s_left(k));
    if (const auto* d = std::get_if<DeterministicVol>(&vol)) {
        out.sigma.resize(xs.size() * ts.size());
        for (std::size_t k = 0; k < ts.size(); ++k) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double s = d->sigma(xs[i], ts[k]);
                if (s < 0.0) throw ModelError("deterministic sigma must be nonnegative");
                out.sigma[k * xs.size() + i] = s;
            }
        }
        return out;
    }
    // OUTVF lives on the slab grid x >= 0; cells read the nearest slab point.
    std::vector<double> eval = xs;
    std::vector<std::size_t> col(xs.size());
    std::iota(col.begin(), col.end(), std::size_t{0});
    if (const auto* o = std::get_if<OUTVFVol>(&vol)) {
        const double w = o->slab_width;
        eval.clear();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double p = std::max(0.0, std::round(xs[i] / w)) * w;
            if (eval.empty() || p > eval.back() + 0.5 * w) eval.push_back(p);
            col[i] = eval.size() - 1;
        }
    }
    const VolField f = simulate_vol(vol, eval, ts, rng);
    out.sigma.resize(xs.size() * ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k)
        for (std::size_t i = 0; i < xs.size(); ++i) out.sigma[k * xs.size() + i] = f.sigma(k, col[i]);
    return out;
}

/// sum over cells with centre in D_t(x) of f(xi_c, s_c) dx dt (midpoint rule).
template <class F>
double cell_sum(const AmbitSet& set, double x, double t, double dx, double dt, double s0, F&& f) {
    double total = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double sc = s0 + (static_cast<double>(k) + 0.5) * dt;
        if (sc > t) break;
        const auto [a, b] = set.section(t - sc);
        if (b < a) continue;
        const auto [r0, r1] = rows_in(x + a, x + b, dx);
        for (long j = r0; j <= r1; ++j) total += f((static_cast<double>(j) + 0.5) * dx, sc);
    }
    return total * dx * dt;
}

inline double drift_term(const AmbitFieldSpec& spec, const FieldGrid& g, double x, double t) {
    if (!spec.drift_kernel) return 0.0;
    const AmbitSet& d = spec.drift_set();
    const double back = ambit_lookback(d, g.tail_eps, g.max_lookback);
    const double s0 = std::floor((g.ts.front() - back) / g.dt + 1e-9) * g.dt;
    return cell_sum(d, x, t, g.dx, g.dt, s0,
                    [&](double xi, double s) { return (*spec.drift_kernel)(x, t, xi, s) * spec.drift_field(xi, s); });
}

}  // namespace detail

/// Riemann-sum simulation on the lattice: the kernel is evaluated at cell
/// centres and sigma at the centre in space and the left edge in time, so the
/// integrand stays predictable. Basis cells are shared by all (x, t).
inline SampleField simulate_field(const AmbitFieldSpec& spec, const FieldGrid& g, RandomStream& rng) {
    detail::check_spec(spec);
    BasisLattice lat = detail::lattice_for(spec, g);
    lat.draw(CellIncrementSampler(spec.seed, g.dx * g.dt), rng);
    const detail::LatticeVol vol = detail::vol_on_lattice(spec.vol, lat, rng);
    SampleField out{g.xs, g.ts, std::vector<double>(g.xs.size() * g.ts.size(), spec.mu)};
    for (std::size_t it = 0; it < g.ts.size(); ++it) {
        for (std::size_t ix = 0; ix < g.xs.size(); ++ix) {
            const double x = g.xs[ix], t = g.ts[it];
            const double stoch = lattice_sum(lat, spec.A, x, t, [&](std::size_t k, long j) {
                return spec.kernel(x, t, lat.xi_center(j), lat.s_center(k)) * vol.at(k, j);
            });
            out.values[it * g.xs.size() + ix] += stoch + detail::drift_term(spec, g, x, t);
        }
    }
    return out;
}

namespace detail {

/// int over A_t(x) of f(xi, s) dxi ds by nested adaptive quadrature in
/// (lag, xi).
template <class T, class F>
QuadratureResult<T> integrate_over_set(const AmbitSet& set, double x, double t, F&& f,
                                       const QuadratureOptions& opt = {1e-10, 1e-8, 2000}) {
    bool inner_ok = true;
    auto inner = [&](double u) -> T {
        const auto [a, b] = set.section(u);
        if (b < a) return T{};
        auto r = integrate<T>([&](double xi_rel) { return f(x + xi_rel, t - u); }, a, b, opt);
        if (!r.converged) inner_ok = false;
        return r.value;
    };
    const double depth = set.time_depth();
    auto r = integrate<T>(inner, 0.0, depth, opt);
    r.converged = r.converged && inner_ok;
    // report the dominant region in absolute time
    const double lo = t - r.worst_hi, hi = t - r.worst_lo;
    r.worst_lo = lo;
    r.worst_hi = hi;
    return r;
}

}  // namespace detail

/// C{zeta ‡ Y_t(x) | sigma} - i zeta (mu + drift) = int_{A_t(x)} C{zeta h sigma ‡ L'} c(dxi, ds)
/// for a frozen volatility sigma(xi, s).
inline cplx conditional_cumulant(const AmbitFieldSpec& spec, const std::function<double(double, double)>& sigma,
                                 double zeta, double x, double t) {
    detail::check_spec(spec);
    if (zeta == 0.0) return 0.0;
    const ControlMeasure& c = spec.seed.cq().control;
    auto f = [&](double xi, double s) -> cplx {
        const double w = spec.kernel(x, t, xi, s) * sigma(xi, s);
        if (w == 0.0) return 0.0;
        return seed_cumulant(spec.seed, zeta * w) * c.at(xi, s);
    };
    auto r = detail::integrate_over_set<cplx>(spec.A, x, t, f);
    return require_converged(r, "conditional cumulant");
}

/// Lattice analogue of conditional_cumulant matching simulate_field exactly.
inline cplx conditional_cumulant_discrete(const AmbitFieldSpec& spec,
                                          const std::function<double(double, double)>& sigma, double zeta, double x,
                                          double t, const FieldGrid& g) {
    if (zeta == 0.0) return 0.0;
    BasisLattice lat = detail::lattice_for(spec, g);
    cplx total = 0.0;
    for (std::size_t k = 0; k < lat.columns(); ++k) {
        const double sc = lat.s_center(k);
        if (sc > t) break;
        const auto [a, b] = spec.A.section(t - sc);
        if (b < a) continue;
        const auto [r0, r1] = rows_in(x + a, x + b, g.dx);
        for (long j = r0; j <= r1; ++j) {
            const double w = spec.kernel(x, t, lat.xi_center(j), sc) * sigma(lat.xi_center(j), lat.s_left(k));
            total += seed_cumulant(spec.seed, zeta * w);
        }
    }
    return total * (g.dx * g.dt);
}

struct FieldPoint {
    double x = 0.0;
    double t = 0.0;
};

struct SecondOrder {
    std::vector<double> mean, mean_se;
    std::vector<std::vector<double>> cov, cov_se;  ///< cov[p][q]
};

/// Exact second-order structure for deterministic sigma by quadrature:
/// E Y = mu + E(L') int_A h sigma + int_D q a,
/// Cov = Var(L') int_{A_p ∩ A_q} h_p h_q sigma^2.
inline SecondOrder second_order(const AmbitFieldSpec& spec, const std::vector<FieldPoint>& pts) {
    detail::check_spec(spec);
    const auto* det = std::get_if<DeterministicVol>(&spec.vol);
    if (!det) throw ModelError("analytic second-order structure needs deterministic sigma; use second_order_mc");
    const double m1 = cumulant(spec.seed, 1), v = cumulant(spec.seed, 2);
    const std::size_t n = pts.size();
    SecondOrder out;
    out.mean.assign(n, spec.mu);
    out.mean_se.assign(n, 0.0);
    out.cov.assign(n, std::vector<double>(n, 0.0));
    out.cov_se.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t p = 0; p < n; ++p) {
        const auto [x, t] = pts[p];
        auto r = detail::integrate_over_set<double>(spec.A, x, t,
                                                    [&](double xi, double s) { return spec.kernel(x, t, xi, s) * det->sigma(xi, s); });
        out.mean[p] += m1 * require_converged(r, "second-order mean");
        if (spec.drift_kernel) {
            auto d = detail::integrate_over_set<double>(spec.drift_set(), x, t, [&](double xi, double s) {
                return (*spec.drift_kernel)(x, t, xi, s) * spec.drift_field(xi, s);
            });
            out.mean[p] += require_converged(d, "second-order drift");
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
            const auto [x, t] = pts[p];
            const auto [x2, t2] = pts[q];
            auto f = [&](double xi, double s) {
                if (!spec.A.contains(xi - x2, s - t2)) return 0.0;
                const double sg = det->sigma(xi, s);
                return spec.kernel(x, t, xi, s) * spec.kernel(x2, t2, xi, s) * sg * sg;
            };
            auto r = detail::integrate_over_set<double>(spec.A, x, t, f);
            out.cov[p][q] = out.cov[q][p] = v * require_converged(r, "second-order covariance");
        }
    }
    return out;
}

/// Second-order structure on the simulation lattice with the volatility
/// moments estimated from `draws` independent sigma fields:
/// Cov = Var(L') E[Q_pq] + E(L')^2 Cov(S_p, S_q) with
/// S_p = sum_{A_p} h_p sigma dxdt and Q_pq = sum_{A_p ∩ A_q} h_p h_q sigma^2 dxdt.
inline SecondOrder second_order_mc(const AmbitFieldSpec& spec, const std::vector<FieldPoint>& pts, const FieldGrid& g,
                                   std::size_t draws, std::uint64_t master_seed) {
    detail::check_spec(spec);
    std::vector<double> xs, ts;
    for (const auto& p : pts) {
        xs.push_back(p.x);
        ts.push_back(p.t);
    }
    FieldGrid layout = g;
    layout.xs = xs;
    layout.ts = ts;
    std::sort(layout.ts.begin(), layout.ts.end());
    const BasisLattice lat = detail::lattice_for(spec, layout);
    const std::size_t n = pts.size();
    const bool deterministic = std::holds_alternative<DeterministicVol>(spec.vol);
    if (deterministic) draws = 1;
    if (draws == 0) throw std::invalid_argument("second_order_mc needs at least one draw");
    const double cell = g.dx * g.dt;

    struct Draw {
        std::vector<double> s;  // S_p
        std::vector<double> q;  // Q_pq, upper triangle
    };
    auto one = [&](std::size_t, RandomStream& rng) {
        const detail::LatticeVol vol = detail::vol_on_lattice(spec.vol, lat, rng);
        Draw d{std::vector<double>(n, 0.0), std::vector<double>(n * n, 0.0)};
        for (std::size_t k = 0; k < lat.columns(); ++k) {
            const double sc = lat.s_center(k);
            for (long j = lat.row_lo(k); j < lat.row_hi(k); ++j) {
                const double xi = lat.xi_center(j);
                const double sg = vol.at(k, j);
                std::vector<double> h(n, 0.0);
                for (std::size_t p = 0; p < n; ++p) {
                    if (sc > pts[p].t) continue;
                    const auto [a, b] = spec.A.section(pts[p].t - sc);
                    if (b < a) continue;
                    const auto [r0, r1] = rows_in(pts[p].x + a, pts[p].x + b, g.dx);
                    if (j < r0 || j > r1) continue;
                    h[p] = spec.kernel(pts[p].x, pts[p].t, xi, sc);
                    d.s[p] += h[p] * sg * cell;
                }
                for (std::size_t p = 0; p < n; ++p) {
                    if (h[p] == 0.0) continue;
                    for (std::size_t q = p; q < n; ++q) d.q[p * n + q] += h[p] * h[q] * sg * sg * cell;
                }
            }
        }
        return d;
    };
    const auto all = run_replicates(draws, master_seed, 0x5ec0dULL, one);

    const double m1 = cumulant(spec.seed, 1), v = cumulant(spec.seed, 2);
    SecondOrder out;
    out.mean.assign(n, spec.mu);
    out.mean_se.assign(n, 0.0);
    out.cov.assign(n, std::vector<double>(n, 0.0));
    out.cov_se.assign(n, std::vector<double>(n, 0.0));
    auto column = [&](auto get) {
        std::vector<double> c(all.size());
        for (std::size_t i = 0; i < all.size(); ++i) c[i] = get(all[i]);
        return c;
    };
    for (std::size_t p = 0; p < n; ++p) {
        const auto sp = column([&](const Draw& d) { return d.s[p]; });
        out.mean[p] += m1 * detail::mean_of(sp) + detail::drift_term(spec, g, pts[p].x, pts[p].t);
        if (all.size() > 1) out.mean_se[p] = std::abs(m1) * detail::sample_sd(sp) / std::sqrt(double(all.size()));
        for (std::size_t q = p; q < n; ++q) {
            const auto qpq = column([&](const Draw& d) { return d.q[p * n + q]; });
            double value = v * detail::mean_of(qpq);
            double se2 = 0.0;
            if (all.size() > 2) {
                se2 += v * v * std::pow(detail::sample_sd(qpq), 2) / double(all.size());
                const auto sq = column([&](const Draw& d) { return d.s[q]; });
                const Estimate c = covariance(sp, sq);
                value += m1 * m1 * c.value;
                se2 += std::pow(m1 * m1 * c.se, 2);
            }
            out.cov[p][q] = out.cov[q][p] = value;
            out.cov_se[p][q] = out.cov_se[q][p] = std::sqrt(se2);
        }
    }
    return out;
}

/// E[(sum_cells h sigma dL)^2] on the lattice for a deterministic sigma:
/// sum h^2 sigma^2 Var(L') dxdt + (sum h sigma E(L') dxdt)^2.
inline double discretized_isometry_norm(const AmbitFieldSpec& spec, double x, double t, const FieldGrid& g) {
    const auto so = second_order_mc(spec, {{x, t}}, g, 1, 0);
    const double m = so.mean[0] - spec.mu - detail::drift_term(spec, g, x, t);
    return so.cov[0][0] + m * m;
}

// ---------------------------------------------------------------------------
// Integrability
// ---------------------------------------------------------------------------

struct IntegralVerdict {
    std::string name;
    double value = 0.0;
    double error = 0.0;
    bool finite = true;
    double region_lo = 0.0;  ///< dominant region in time when divergent
    double region_hi = 0.0;
};

struct IntegrabilityReport {
    IntegralVerdict drift;     ///< int |V1(f)| dc
    IntegralVerdict gaussian;  ///< int f^2 b dc
    IntegralVerdict jumps;     ///< int V2(f) dc
    bool integrable() const { return drift.finite && gaussian.finite && jumps.finite; }
};

/// Rajput–Rosinski conditions for f = 1_{A_t(x)} h(x, t; .) with sigma frozen at 1.
inline IntegrabilityReport check_integrability(const AmbitFieldSpec& spec, double x = 0.0, double t = 0.0,
                                               const QuadratureOptions& opt = {1e-10, 1e-8, 2000}) {
    detail::check_spec(spec);
    const LevySeed& seed = spec.seed;
    const ControlMeasure& c = seed.cq().control;
    auto run = [&](const std::string& name, auto&& g) {
        IntegralVerdict v;
        v.name = name;
        try {
            auto r = detail::integrate_over_set<double>(spec.A, x, t, [&](double xi, double s) {
                const double f = spec.kernel(x, t, xi, s);
                if (f == 0.0) return 0.0;
                return g(f) * c.at(xi, s);
            }, opt);
            v.value = r.value;
            v.error = r.error;
            v.finite = r.converged && std::isfinite(r.value);
            v.region_lo = r.worst_lo;
            v.region_hi = r.worst_hi;
        } catch (const QuadratureError& e) {
            v.value = e.estimate();
            v.error = e.attained_error();
            v.finite = false;
        }
        return v;
    };
    IntegrabilityReport rep;
    const bool jumps = seed.has_jumps();
    rep.drift = run("int |V1(f)| dc", [&](double f) { return std::abs(jumps ? integrability_v1(seed, f) : f * seed.a()); });
    rep.gaussian = run("int f^2 b dc", [&](double f) { return f * f * seed.b(); });
    rep.jumps = run("int V2(f) dc", [&](double f) { return jumps ? integrability_v2(seed, f) : 0.0; });
    return rep;
}

// ---------------------------------------------------------------------------
// Semimartingale decomposition
// ---------------------------------------------------------------------------

struct SemimartingaleSpec {
    Kernel kernel;                                       ///< needs kernel.dt
    double half_width = 0.5;                             ///< A(x) = [x - w, x + w]
    LevySeed seed;
    std::function<double(double xi, double s)> sigma;    ///< deterministic, defaults to 1
    double x = 0.0;
};

struct SemimartingalePaths {
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> martingale;
    std::vector<double> finite_variation;

    double max_discrepancy() const {
        double m = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            m = std::max(m, std::abs(lhs[i] - martingale[i] - finite_variation[i]));
        }
        return m;
    }
};

namespace detail {

/// cells[k][j]: basis increments of time column k (width dt from 0) and
/// spatial row j (centre xi0 + (j + 0.5) dx).
inline SemimartingalePaths decompose_cells(const SemimartingaleSpec& spec, const std::vector<std::vector<double>>& cells,
                                           double dt, double dx, double xi0) {
    if (!spec.kernel.dt) throw ModelError("semimartingale decomposition needs the kernel's time derivative");
    const std::size_t n = cells.size();
    const std::size_t nj = n ? cells.front().size() : 0;
    std::vector<std::vector<double>> dm(n, std::vector<double>(nj));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < nj; ++j) {
            const double xi = xi0 + (static_cast<double>(j) + 0.5) * dx;
            const double s = static_cast<double>(k) * dt;
            dm[k][j] = cells[k][j] * (spec.sigma ? spec.sigma(xi, s) : 1.0);
        }
    }
    const double x = spec.x;
    auto xi_at = [&](std::size_t j) { return xi0 + (static_cast<double>(j) + 0.5) * dx; };
    SemimartingalePaths out;
    out.times.resize(n + 1);
    out.lhs.assign(n + 1, 0.0);
    out.martingale.assign(n + 1, 0.0);
    out.finite_variation.assign(n + 1, 0.0);
    // inner(m) = sum_{k < m} sum_j h'(u_m; s_k, xi_j) dM
    std::vector<double> inner(n + 1, 0.0);
    for (std::size_t m = 0; m <= n; ++m) {
        const double u = static_cast<double>(m) * dt;
        out.times[m] = u;
        double lhs = 0.0, fv = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double s = static_cast<double>(k) * dt;
            for (std::size_t j = 0; j < nj; ++j) {
                lhs += spec.kernel.h(x, u, xi_at(j), s) * dm[k][j];
                fv += spec.kernel.dt(x, u, xi_at(j), s) * dm[k][j];
            }
        }
        out.lhs[m] = lhs;
        inner[m] = fv;
    }
    double mart = 0.0, fv = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        const std::size_t k = m - 1;
        const double s = static_cast<double>(k) * dt;
        for (std::size_t j = 0; j < nj; ++j) mart += spec.kernel.h(x, s, xi_at(j), s) * dm[k][j];
        fv += dt * inner[m - 1];  // left Riemann sum in u
        out.martingale[m] = mart;
        out.finite_variation[m] = fv;
    }
    return out;
}

inline std::vector<std::vector<double>> draw_cells(const LevySeed& seed, std::size_t n, std::size_t nj, double cell,
                                                   RandomStream& rng) {
    const CellIncrementSampler sampler(seed, cell);
    std::vector<std::vector<double>> c(n, std::vector<double>(nj));
    for (auto& col : c)
        for (double& v : col) v = sampler(rng);
    return c;
}

}  // namespace detail

/// Simulates Y_t = int_0^t int_{A(x)} h(t; s, xi) M(dxi, ds) together with its
/// martingale part int h(s; s, xi) dM and finite-variation part
/// int_0^t int_0^u int h'(u; s, xi) dM du on one basis realisation, for t on
/// the grid 0, dt, ..., t_max.
inline SemimartingalePaths semimartingale_decompose(const SemimartingaleSpec& spec, double t_max, double dt, double dx,
                                                    RandomStream& rng) {
    const auto n = static_cast<std::size_t>(std::lround(t_max / dt));
    const auto nj = static_cast<std::size_t>(std::lround(2.0 * spec.half_width / dx));
    if (n == 0 || nj == 0) throw std::invalid_argument("semimartingale grid is empty");
    const auto cells = detail::draw_cells(spec.seed, n, nj, dt * dx, rng);
    return detail::decompose_cells(spec, cells, dt, dx, spec.x - spec.half_width);
}

/// Max discrepancy |lhs - (martingale + fv)| for each dt in `dts` (each an
/// integer multiple of the smallest), all computed from one realisation on
/// the finest grid by aggregating cells in time.
inline std::vector<double> semimartingale_refinement(const SemimartingaleSpec& spec, double t_max,
                                                     std::vector<double> dts, double dx, RandomStream& rng) {
    if (dts.empty()) throw std::invalid_argument("need at least one time step");
    const double fine = *std::min_element(dts.begin(), dts.end());
    const auto n = static_cast<std::size_t>(std::lround(t_max / fine));
    const auto nj = static_cast<std::size_t>(std::lround(2.0 * spec.half_width / dx));
    const auto cells = detail::draw_cells(spec.seed, n, nj, fine * dx, rng);
    std::vector<double> out;
    for (double dt : dts) {
        const double q = dt / fine;
        const auto f = static_cast<std::size_t>(std::lround(q));
        if (std::abs(q - static_cast<double>(f)) > 1e-9 || n % f != 0) {
            throw std::invalid_argument("time steps must be integer multiples of the finest step");
        }
        std::vector<std::vector<double>> agg(n / f, std::vector<double>(nj, 0.0));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < nj; ++j) agg[k / f][j] += cells[k][j];
        out.push_back(detail::decompose_cells(spec, agg, dt, dx, spec.x - spec.half_width).max_discrepancy());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lévy semistationary processes
// ---------------------------------------------------------------------------

struct LSSSpec {
    double mu = 0.0;
    std::function<double(double)> k;            ///< k(u), zero for u <= 0
    std::function<double(double)> q;             ///< optional drift kernel
    std::function<double(double)> a;             ///< drift process a_s (deterministic)
    VolatilityFieldHandle vol = DeterministicVol{[](double, double) { return 1.0; }};
    LevySeed seed = LevySeed::gaussian(0.0, 1.0);
};

/// T with int_T^inf k^2 <= eps int_0^inf k^2.
inline double lss_lookback(const std::function<double(double)>& k, double eps, double max_lookback) {
    auto k2 = [&](double u) { return k(u) * k(u); };
    const QuadratureOptions opt{1e-14, 1e-10, 4000};
    const double total = require_converged(integrate<double>(k2, 0.0, std::numeric_limits<double>::infinity(), opt),
                                           "LSS kernel norm");
    if (total == 0.0) return 0.0;
    double hi = 1.0;
    auto tail = [&](double T) { return integrate<double>(k2, T, std::numeric_limits<double>::infinity(), opt).value; };
    while (tail(hi) > eps * total) {
        hi *= 2.0;
        if (hi > max_lookback) throw WindowError("LSS kernel tail exceeds the configured lookback", hi);
    }
    double lo = 0.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) > eps * total ? lo : hi) = mid;
    }
    return hi;
}

/// Y_t = mu + sum_{s_k < t} k(t - s_k) sigma_{s_k} dL_k + sum q(t - s_k) a(s_k) dt
/// with s_k the left edges of the time cells (sigma predictable).
inline SamplePath simulate_lss(const LSSSpec& spec, const std::vector<double>& times, double dt, RandomStream& rng,
                               double tail_eps = 1e-4, double max_lookback = 1e3) {
    if (times.empty()) throw std::invalid_argument("need at least one time");
    if (!spec.k) throw ModelError("LSS needs a kernel");
    const double back = lss_lookback(spec.k, tail_eps, max_lookback);
    const double s0 = std::floor((times.front() - back) / dt + 1e-9) * dt;
    const auto n = static_cast<std::size_t>(std::ceil((times.back() - s0) / dt - 1e-9));
    const CellIncrementSampler sampler(spec.seed, dt);
    std::vector<double> dl(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = s0 + static_cast<double>(i) * dt;
        dl[i] = sampler(rng);
    }
    std::vector<double> sigma(n, 1.0);
    if (n > 0) {
        const VolField f = simulate_vol(spec.vol, {0.0}, s, rng);
        for (std::size_t i = 0; i < n; ++i) sigma[i] = f.sigma(i, 0);
    }
    SamplePath out{times, std::vector<double>(times.size(), spec.mu)};
    for (std::size_t m = 0; m < times.size(); ++m) {
        const double t = times[m];
        double y = 0.0;
        for (std::size_t i = 0; i < n && s[i] + 0.5 * dt < t; ++i) {
            const double u = t - s[i];
            y += spec.k(u) * sigma[i] * dl[i];
            if (spec.q && spec.a) y += spec.q(u) * spec.a(s[i]) * dt;
        }
        out.values[m] += y;
    }
    return out;
}

}  // namespace ambit
