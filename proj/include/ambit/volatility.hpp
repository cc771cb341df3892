#pragma once

// Volatility modulation: kernel-smoothed and trawl-type fields, OU-type
// volatility fields (OUTVF), extended subordination through meta-times, and
// probability / Lévy mixing including supOU processes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "ambit/error.hpp"
#include "ambit/geometry.hpp"
#include "ambit/lattice.hpp"
#include "ambit/levy_basis.hpp"
#include "ambit/quadrature.hpp"
#include "ambit/random.hpp"

namespace ambit {

// ---------------------------------------------------------------------------
// OU processes driven by Lévy seeds
// ---------------------------------------------------------------------------

/// Stationary OU process X_t = int_{-inf}^t e^{-rate (t-s)} dL_s.
class OUProcess {
public:
    OUProcess(LevySeed driver, double rate, double max_substep = 0.01)
        : driver_(std::move(driver)), rate_(rate), max_substep_(max_substep) {
        if (!(rate > 0.0)) throw ModelError("OU rate must be positive");
        drift_ = driver_.drift();
    }

    const LevySeed& driver() const noexcept { return driver_; }
    double rate() const noexcept { return rate_; }

    double mean() const { return cumulant(driver_, 1) / rate_; }
    double variance() const { return cumulant(driver_, 2) / (2.0 * rate_); }
    double autocorrelation(double h) const { return std::exp(-rate_ * std::abs(h)); }

    /// Draw from the stationary law. Exact for Gaussian parts and exponential
    /// compound Poisson jumps; other finite-activity jumps use the shot-noise
    /// sum over a horizon with residual weight 1e-12; infinite activity burns in.
    double stationary(RandomStream& rng) const {
        const double horizon = -std::log(1e-12) / rate_;
        double x = drift_ / rate_;
        if (driver_.b() > 0.0) x += std::sqrt(driver_.b() / (2.0 * rate_)) * rng.normal();
        bool burn_in = false;
        for (const auto& part : driver_.levy_measure().components) {
            if (part.weight <= 0.0) continue;
            if (const auto* cp = std::get_if<CompoundPoissonJumps>(&part.jumps)) {
                if (const auto* em = std::get_if<ExponentialMarks>(&cp->marks)) {
                    x += rng.gamma(part.weight * cp->intensity / rate_, 1.0 / em->mean);
                    continue;
                }
            }
            if (detail::is_finite_activity(part.jumps)) {
                const std::uint64_t n = rng.poisson(part.weight * detail::total_mass(part.jumps) * horizon);
                for (std::uint64_t i = 0; i < n; ++i) {
                    x += detail::sample_jump(part.jumps, rng) * std::exp(-rate_ * horizon * rng.uniform());
                }
            } else {
                burn_in = true;
            }
        }
        if (burn_in) {
            // infinite-activity part: start at its mean contribution and run
            double jm = 0.0;
            for (const auto& part : driver_.levy_measure().components) {
                if (part.weight > 0.0 && !detail::is_finite_activity(part.jumps)) {
                    jm += part.weight * detail::jump_moment(part.jumps, 1);
                }
            }
            double y = jm / rate_;
            y = infinite_activity_step(y, horizon, rng);
            x += y;
        }
        return x;
    }

    /// X_{t+dt} given X_t = x.
    double step(double x, double dt, RandomStream& rng) const {
        if (dt < 0.0) throw std::invalid_argument("OU step must be nonnegative");
        if (dt == 0.0) return x;
        const double decay = std::exp(-rate_ * dt);
        double y = decay * x + drift_ * (-std::expm1(-rate_ * dt)) / rate_;
        if (driver_.b() > 0.0) y += std::sqrt(driver_.b() * (-std::expm1(-2.0 * rate_ * dt)) / (2.0 * rate_)) * rng.normal();
        for (const auto& part : driver_.levy_measure().components) {
            if (part.weight <= 0.0 || !detail::is_finite_activity(part.jumps)) continue;
            const std::uint64_t n = rng.poisson(part.weight * detail::total_mass(part.jumps) * dt);
            for (std::uint64_t i = 0; i < n; ++i) {
                y += detail::sample_jump(part.jumps, rng) * std::exp(-rate_ * dt * rng.uniform());
            }
        }
        y += infinite_activity_step(0.0, dt, rng);
        return y;
    }

private:
    // Infinite-activity jumps over [0, dt]: sub-steps with the increment
    // weighted at the sub-step midpoint.
    double infinite_activity_step(double x, double dt, RandomStream& rng) const {
        bool any = false;
        for (const auto& part : driver_.levy_measure().components) {
            if (part.weight > 0.0 && !detail::is_finite_activity(part.jumps)) any = true;
        }
        if (!any) return x;
        const auto n = static_cast<std::size_t>(std::ceil(dt / max_substep_));
        const double delta = dt / static_cast<double>(n);
        const double decay = std::exp(-rate_ * delta), half = std::exp(-0.5 * rate_ * delta);
        for (std::size_t i = 0; i < n; ++i) {
            double inc = 0.0;
            for (const auto& part : driver_.levy_measure().components) {
                if (part.weight > 0.0 && !detail::is_finite_activity(part.jumps)) {
                    inc += detail::sample_component(part.jumps, part.weight * delta, rng);
                }
            }
            x = decay * x + half * inc;
        }
        return x;
    }

    LevySeed driver_;
    double rate_;
    double max_substep_;
    double drift_ = 0.0;
};

/// Stationary OU path on sorted times.
inline std::vector<double> simulate_ou(const OUProcess& ou, const std::vector<double>& times, RandomStream& rng) {
    std::vector<double> out(times.size());
    if (times.empty()) return out;
    double x = ou.stationary(rng);
    out[0] = x;
    for (std::size_t i = 1; i < times.size(); ++i) {
        x = ou.step(x, times[i] - times[i - 1], rng);
        out[i] = x;
    }
    return out;
}

inline std::vector<double> simulate_ou(const LevySeed& driver, double rate, const std::vector<double>& times,
                                       RandomStream& rng) {
    return simulate_ou(OUProcess(driver, rate), times, rng);
}

// ---------------------------------------------------------------------------
// Volatility field handles
// ---------------------------------------------------------------------------

enum class VTransform { Square, Exp, Identity };

inline double apply_transform(VTransform v, double z) {
    switch (v) {
        case VTransform::Square: return z * z;
        case VTransform::Exp: return std::exp(z);
        case VTransform::Identity: return z;
    }
    return z;
}

/// sigma(xi, s) given directly (must be nonnegative).
struct DeterministicVol {
    std::function<double(double xi, double s)> sigma;
};

/// sigma^2_t(x) = V(int j(xi - x, t - s) L(dxi, ds)) over support A_t(x).
struct KernelSmoothedVol {
    std::function<double(double xi_rel, double lag)> kernel;
    AmbitSet support;
    VTransform v = VTransform::Square;
    LevySeed seed;
    double dx = 0.05;
    double dt = 0.05;
    double tail_eps = 1e-4;
    double max_lookback = 1e3;
};

/// sigma^2_t(x) = V(L(A_t(x))) for a trawl A.
struct TempoSpatialTrawlVol {
    TrawlSet trawl;
    VTransform v = VTransform::Identity;
    LevySeed seed;
    double dx = 0.05;
    double dt = 0.05;
    double tail_eps = 1e-4;
    double max_lookback = 1e3;
};

/// tau_t(x) = sigma^2_t(x) = e^{-mu x} Y~_t + int_0^x e^{-mu (x - xi)} dZ_{xi|t}
/// with Y~ OU(lambda) driven by y_driver and Z the supra-process of the
/// OU(kappa) process driven by x_driver. Space is discretised into slabs.
struct OUTVFVol {
    double lambda = 1.0;
    double mu = 1.0;
    double kappa = 1.0;
    LevySeed y_driver;
    LevySeed x_driver;
    double slab_width = 0.01;
};

/// sigma^2_t(x) = X_t, a stationary OU process (spatially constant).
struct TemporalOUVol {
    double rate = 1.0;
    LevySeed driver;
};

using VolatilityFieldHandle =
    std::variant<DeterministicVol, KernelSmoothedVol, TempoSpatialTrawlVol, OUTVFVol, TemporalOUVol>;

/// sigma^2 on a tensor grid of sorted locations and times.
class VolField {
public:
    VolField(std::vector<double> xs, std::vector<double> ts)
        : xs_(std::move(xs)), ts_(std::move(ts)), sigma2_(xs_.size() * ts_.size(), 0.0) {}

    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& ts() const noexcept { return ts_; }
    double& sigma2(std::size_t it, std::size_t ix) { return sigma2_[it * xs_.size() + ix]; }
    double sigma2(std::size_t it, std::size_t ix) const { return sigma2_[it * xs_.size() + ix]; }
    double sigma(std::size_t it, std::size_t ix) const { return std::sqrt(std::max(0.0, sigma2(it, ix))); }

    std::size_t x_index(double x) const { return index_of(xs_, x, "location"); }
    std::size_t t_index(double t) const { return index_of(ts_, t, "time"); }

private:
    static std::size_t index_of(const std::vector<double>& grid, double v, const char* what) {
        auto it = std::lower_bound(grid.begin(), grid.end(), v - 1e-9 * std::max(1.0, std::abs(v)));
        if (it == grid.end() || std::abs(*it - v) > 1e-9 * std::max(1.0, std::abs(v))) {
            throw std::out_of_range(std::string("volatility field has no ") + what + " " + std::to_string(v));
        }
        return static_cast<std::size_t>(it - grid.begin());
    }

    std::vector<double> xs_, ts_;
    std::vector<double> sigma2_;
};

namespace detail {

inline void check_grid(const std::vector<double>& g, const char* what) {
    if (g.empty()) throw std::invalid_argument(std::string("volatility grid needs ") + what);
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (!(g[i] > g[i - 1])) throw std::invalid_argument(std::string(what) + " must be strictly increasing");
    }
}

inline void check_identity_seed(VTransform v, const LevySeed& seed) {
    if (v == VTransform::Identity && !seed.is_subordinator()) {
        throw ModelError("identity V needs a subordinator seed so that sigma^2 stays nonnegative");
    }
}

/// Kernel-smoothed field on the grid; an empty kernel means j = 1.
inline VolField smooth_basis(const std::function<double(double, double)>& kernel, const AmbitSet& support, VTransform v,
                             const LevySeed& seed, double dx, double dt, double eps, double max_back,
                             const std::vector<double>& xs, const std::vector<double>& ts, RandomStream& rng) {
    check_identity_seed(v, seed);
    VolField field(xs, ts);
    BasisLattice lat = field_lattice(support, xs, ts, dx, dt, ambit_lookback(support, eps, max_back));
    lat.draw(CellIncrementSampler(seed, dx * dt), rng);
    for (std::size_t it = 0; it < ts.size(); ++it) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const double x = xs[ix], t = ts[it];
            double z;
            if (kernel) {
                z = lattice_sum(lat, support, x, t,
                                [&](std::size_t k, long j) { return kernel(lat.xi_center(j) - x, t - lat.s_center(k)); });
            } else {
                z = lattice_sum(lat, support, x, t);
            }
            field.sigma2(it, ix) = apply_transform(v, z);
        }
    }
    return field;
}

/// Point inside slab [a, a + w] with w e^{2 mu p} = int_a^{a+w} e^{2 mu xi} dxi,
/// so that slab sums reproduce the second-order structure of the integral.
inline double slab_point(double a, double w, double mu) {
    const double z = 2.0 * mu * w;
    return a + std::log(std::expm1(z) / z) / (2.0 * mu);
}

inline VolField simulate_outvf(const OUTVFVol& h, const std::vector<double>& xs, const std::vector<double>& ts,
                               RandomStream& rng) {
    if (!(h.lambda > 0.0 && h.mu > 0.0 && h.kappa > 0.0)) throw ModelError("OUTVF rates must be positive");
    if (!h.y_driver.is_subordinator() || !h.x_driver.is_subordinator()) {
        throw ModelError("OUTVF drivers must be subordinators");
    }
    const double w = h.slab_width;
    std::vector<long> slab_of(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double q = xs[i] / w;
        const long n = std::lround(q);
        if (xs[i] < 0.0 || std::abs(q - static_cast<double>(n)) > 1e-6) {
            throw std::invalid_argument("OUTVF locations must be nonnegative multiples of the slab width");
        }
        slab_of[i] = n;
    }
    const long slabs = slab_of.empty() ? 0 : *std::max_element(slab_of.begin(), slab_of.end());
    const std::vector<double> y = simulate_ou(h.y_driver, h.lambda, ts, rng);
    const OUProcess slab_ou(h.x_driver.scaled(w), h.kappa);
    std::vector<std::vector<double>> z(static_cast<std::size_t>(slabs));
    for (auto& path : z) path = simulate_ou(slab_ou, ts, rng);

    VolField field(xs, ts);
    for (std::size_t it = 0; it < ts.size(); ++it) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const double x = xs[ix];
            double v = std::exp(-h.mu * x) * y[it];
            for (long j = 0; j < slab_of[ix]; ++j) {
                const double p = slab_point(static_cast<double>(j) * w, w, h.mu);
                v += std::exp(-h.mu * (x - p)) * z[static_cast<std::size_t>(j)][it];
            }
            field.sigma2(it, ix) = v;
        }
    }
    return field;
}

}  // namespace detail

/// Simulates sigma^2 on the grid xs x ts (both strictly increasing).
inline VolField simulate_vol(const VolatilityFieldHandle& handle, const std::vector<double>& xs,
                             const std::vector<double>& ts, RandomStream& rng) {
    detail::check_grid(xs, "locations");
    detail::check_grid(ts, "times");
    return std::visit(
        detail::overloaded{
            [&](const DeterministicVol& d) {
                VolField f(xs, ts);
                for (std::size_t it = 0; it < ts.size(); ++it) {
                    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
                        const double s = d.sigma(xs[ix], ts[it]);
                        if (s < 0.0) throw ModelError("deterministic sigma must be nonnegative");
                        f.sigma2(it, ix) = s * s;
                    }
                }
                return f;
            },
            [&](const KernelSmoothedVol& k) {
                if (!k.kernel) throw ModelError("kernel-smoothed volatility needs a kernel");
                return detail::smooth_basis(k.kernel, k.support, k.v, k.seed, k.dx, k.dt, k.tail_eps, k.max_lookback,
                                            xs, ts, rng);
            },
            [&](const TempoSpatialTrawlVol& t) {
                return detail::smooth_basis({}, AmbitSet(t.trawl), t.v, t.seed, t.dx, t.dt, t.tail_eps,
                                            t.max_lookback, xs, ts, rng);
            },
            [&](const OUTVFVol& o) { return detail::simulate_outvf(o, xs, ts, rng); },
            [&](const TemporalOUVol& o) {
                if (!o.driver.is_subordinator()) throw ModelError("OU volatility needs a subordinator driver");
                const auto path = simulate_ou(o.driver, o.rate, ts, rng);
                VolField f(xs, ts);
                for (std::size_t it = 0; it < ts.size(); ++it)
                    for (std::size_t ix = 0; ix < xs.size(); ++ix) f.sigma2(it, ix) = path[it];
                return f;
            },
        },
        handle);
}

/// E tau_t(x) for the continuous-space OUTVF.
inline double outvf_mean(const OUTVFVol& h, double x) {
    const double ey = cumulant(h.y_driver, 1) / h.lambda;
    const double ex = cumulant(h.x_driver, 1) / h.kappa;
    return std::exp(-h.mu * x) * ey + ex * (-std::expm1(-h.mu * x)) / h.mu;
}

/// Cov{tau_t(x), tau_t'(x')} for OU-type X~:
/// 1/2 (Var Y_1 / lambda e^{-lambda|t-t'| - mu(x+x')}
///      + Var X~_0 / mu (e^{-kappa|t-t'| - mu|x-x'|} - e^{-kappa|t-t'| - mu(x+x')})).
inline double outvf_covariance(const OUTVFVol& h, double t, double x, double t2, double x2) {
    const double var_y1 = cumulant(h.y_driver, 2);
    const double var_x0 = cumulant(h.x_driver, 2) / (2.0 * h.kappa);
    const double dt = std::abs(t - t2);
    return 0.5 * (var_y1 / h.lambda * std::exp(-h.lambda * dt - h.mu * (x + x2)) +
                  var_x0 / h.mu *
                      (std::exp(-h.kappa * dt - h.mu * std::abs(x - x2)) - std::exp(-h.kappa * dt - h.mu * (x + x2))));
}

// ---------------------------------------------------------------------------
// Extended subordination
// ---------------------------------------------------------------------------

struct SubordinationDraw {
    double value = 0.0;
    double meta_volume = 0.0;  ///< T(A)
};

/// L(A ⋏ T) given the meta-time volumes T(cell) of the cells of A.
inline SubordinationDraw subordinate_cells(const LevySeed& seed, const std::vector<double>& meta_volumes,
                                           RandomStream& rng) {
    const CellIncrementSampler sampler(seed, 1.0);
    SubordinationDraw out;
    for (double v : meta_volumes) {
        if (v < 0.0 || std::isnan(v)) throw ModelError("meta-time cell volume must be nonnegative");
        out.meta_volume += v;
        out.value += sampler.sample(rng, v);
    }
    return out;
}

/// Cells of a rectangle on a (dx, dt) grid with T(cell) = tau(centre) * dx dt.
inline std::vector<double> meta_volumes(const MetaTimeMap& tau, const Rectangle& a, double dx, double dt) {
    const double qx = (a.x1 - a.x0) / dx, qt = (a.t1 - a.t0) / dt;
    const long nx = std::lround(qx), nt = std::lround(qt);
    if (nx <= 0 || nt <= 0 || std::abs(qx - nx) > 1e-6 || std::abs(qt - nt) > 1e-6) {
        throw std::invalid_argument("rectangle sides must be positive multiples of the cell size");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(nx * nt));
    for (long k = 0; k < nt; ++k) {
        for (long j = 0; j < nx; ++j) {
            out.push_back(tau.tau(a.x0 + (j + 0.5) * dx, a.t0 + (k + 0.5) * dt) * dx * dt);
        }
    }
    return out;
}

inline SubordinationDraw subordinate(const LevySeed& seed, const MetaTimeMap& tau, const Rectangle& a, double dx,
                                     double dt, RandomStream& rng) {
    return subordinate_cells(seed, meta_volumes(tau, a, dx, dt), rng);
}

/// C{zeta ‡ L(A ⋏ T) | T} = T(A) C{zeta ‡ L'}
inline cplx subordinated_cumulant(const LevySeed& seed, double meta_volume, double zeta) {
    if (zeta == 0.0) return 0.0;
    return meta_volume * seed_cumulant(seed, zeta);
}

namespace detail {

enum class TransitionKind { Drift, Poisson, Gamma, InverseGaussian };

struct Transition {
    TransitionKind kind;
    double p = 0.0;  // drift, intensity, alpha or gamma
    double w = 1.0;  // weight of the jump component
};

inline Transition transition_of(const LevySeed& seed) {
    const auto& comps = seed.levy_measure().components;
    const char* supported = "subordinated Lévy measure supports deterministic drift, Poisson, gamma and inverse "
                            "Gaussian seeds only";
    if (seed.b() != 0.0) throw ModelError(supported);
    if (comps.empty()) {
        if (!(seed.a() > 0.0)) throw ModelError(supported);
        return {TransitionKind::Drift, seed.a(), 1.0};
    }
    if (comps.size() != 1 || std::abs(seed.drift()) > 1e-12) throw ModelError(supported);
    const auto& c = comps.front();
    if (const auto* p = std::get_if<PoissonAtom>(&c.jumps)) return {TransitionKind::Poisson, p->intensity, c.weight};
    if (const auto* g = std::get_if<GammaJumps>(&c.jumps)) return {TransitionKind::Gamma, g->alpha, c.weight};
    if (const auto* ig = std::get_if<InverseGaussianJumps>(&c.jumps)) {
        return {TransitionKind::InverseGaussian, ig->gamma, c.weight};
    }
    throw ModelError(supported);
}

// density (or pmf) of L'_y at x
inline double transition_density(const Transition& tr, double y, double x) {
    if (y <= 0.0) return 0.0;
    switch (tr.kind) {
        case TransitionKind::Gamma: {
            const double shape = tr.w * y;
            if (x <= 0.0) return 0.0;
            return std::exp(shape * std::log(tr.p) + (shape - 1.0) * std::log(x) - tr.p * x - std::lgamma(shape));
        }
        case TransitionKind::InverseGaussian: {
            const double delta = tr.w * y;
            if (x <= 0.0) return 0.0;
            const double r = delta - tr.p * x;
            return delta / std::sqrt(2.0 * std::numbers::pi) * std::pow(x, -1.5) * std::exp(-r * r / (2.0 * x));
        }
        case TransitionKind::Poisson: {
            const double m = tr.w * tr.p * y;
            return std::exp(x * std::log(m) - m - std::lgamma(x + 1.0));
        }
        default: return 0.0;
    }
}

}  // namespace detail

/// nu~(dx) = int P(L'_y in dx) nu_T(dy) for a subordinator nu_T given as a
/// tabulated measure. Gamma and IG seeds give densities on x_grid, Poisson
/// seeds give atoms at k = 1, 2, ... up to max(x_grid), and a drift c maps
/// nu_T through y -> c y.
inline TabulatedJumps subordinated_levy_measure(const LevySeed& seed, const TabulatedJumps& nu_t,
                                                const std::vector<double>& x_grid) {
    const detail::Transition tr = detail::transition_of(seed);
    TabulatedJumps out;
    if (tr.kind == detail::TransitionKind::Drift) {
        for (std::size_t i = 0; i < nu_t.x.size(); ++i) {
            out.x.push_back(tr.p * nu_t.x[i]);
            out.density.push_back(nu_t.density[i] / tr.p);
        }
        for (const auto& [y, m] : nu_t.atoms) out.atoms.push_back({tr.p * y, m});
        return out;
    }
    auto mix = [&](double x) {
        double v = 0.0;
        for (const auto& [y, m] : nu_t.atoms) v += m * detail::transition_density(tr, y, x);
        for (std::size_t i = 0; i + 1 < nu_t.x.size(); ++i) {
            const double y0 = nu_t.x[i], y1 = nu_t.x[i + 1];
            if (!(y1 > y0)) continue;
            auto f = [&](double y) {
                const double w = (y - y0) / (y1 - y0);
                return ((1.0 - w) * nu_t.density[i] + w * nu_t.density[i + 1]) * detail::transition_density(tr, y, x);
            };
            v += require_converged(integrate<double>(f, y0, y1, QuadratureOptions{1e-13, 1e-10, 2000}),
                                   "subordinated Lévy measure");
        }
        return v;
    };
    if (tr.kind == detail::TransitionKind::Poisson) {
        const double top = x_grid.empty() ? 0.0 : *std::max_element(x_grid.begin(), x_grid.end());
        for (long k = 1; k <= static_cast<long>(std::floor(top)); ++k) {
            out.atoms.push_back({static_cast<double>(k), mix(static_cast<double>(k))});
        }
        return out;
    }
    out.x = x_grid;
    for (double x : x_grid) out.density.push_back(mix(x));
    return out;
}

// ---------------------------------------------------------------------------
// Lévy mixing, supOU and probability mixing
// ---------------------------------------------------------------------------

/// (theta_k, weight_k)
struct DiscreteMixing {
    std::vector<std::pair<double, double>> atoms;
};

/// gamma(dtheta) = density(theta) dtheta on [lo, hi]
struct DensityMixing {
    std::function<double(double)> density;
    double lo = 0.0;
    double hi = 1.0;
};

using MixingMeasure = std::variant<DiscreteMixing, DensityMixing>;

struct LevyMixSpec {
    MixingFamily family;
    MixingMeasure gamma;
    double drift = 0.0;  ///< drift of the mixed seed without compensation
    double b = 0.0;
};

/// int int min(1, x^2) nu(dx; theta) gamma(dtheta); ModelError when divergent.
inline double levy_mix_admissibility(const LevyMixSpec& spec) {
    return std::visit(
        detail::overloaded{
            [&](const DiscreteMixing& d) {
                double total = 0.0;
                for (const auto& [theta, w] : d.atoms) {
                    if (w < 0.0) throw ModelError("mixing weights must be nonnegative");
                    total += w * detail::small_jump_mass(family_member(spec.family, theta));
                }
                return total;
            },
            [&](const DensityMixing& d) {
                if (!d.density) throw ModelError("density mixing needs a density");
                auto f = [&](double theta) {
                    const double g = d.density(theta);
                    if (g == 0.0) return 0.0;
                    return g * detail::small_jump_mass(family_member(spec.family, theta));
                };
                auto r = integrate<double>(f, d.lo, d.hi, QuadratureOptions{1e-10, 1e-8, 400});
                if (!r.converged || !std::isfinite(r.value)) {
                    throw ModelError("Lévy mixing is not admissible: int min(1, x^2) n(dx, dz) diverges (estimate " +
                                     std::to_string(r.value) + " after " + std::to_string(r.intervals) +
                                     " intervals, worst region [" + std::to_string(r.worst_lo) + ", " +
                                     std::to_string(r.worst_hi) + "])");
                }
                return r.value;
            },
        },
        spec.gamma);
}

/// Seed whose Lévy measure is int nu(dx; theta) gamma(dtheta). Discrete
/// mixing yields a weighted sum of components (Poisson atoms merged).
inline LevySeed levy_mix(const LevyMixSpec& spec) {
    (void)levy_mix_admissibility(spec);
    LevyMeasure nu;
    if (const auto* d = std::get_if<DiscreteMixing>(&spec.gamma)) {
        double atom = 0.0;
        bool has_atom = false;
        for (const auto& [theta, w] : d->atoms) {
            if (w == 0.0) continue;
            JumpComponent c = family_member(spec.family, theta);
            if (const auto* p = std::get_if<PoissonAtom>(&c)) {
                atom += w * p->intensity;
                has_atom = true;
            } else {
                nu.components.push_back({w, std::move(c)});
            }
        }
        if (has_atom) nu.components.insert(nu.components.begin(), WeightedJumps{1.0, PoissonAtom{atom}});
    } else {
        const auto& g = std::get<DensityMixing>(spec.gamma);
        nu.components.push_back({1.0, ContinuousMixtureJumps{spec.family, g.density, g.lo, g.hi}});
    }
    return LevySeed::from_drift(spec.drift, spec.b, std::move(nu));
}

namespace detail {

inline std::pair<double, SubordinatorJumps> subordinator_base(const LevySeed& driver) {
    const auto& comps = driver.levy_measure().components;
    if (driver.b() != 0.0 || comps.size() != 1) {
        throw ModelError("supOU marginal needs a driver with a single gamma or compound Poisson jump component");
    }
    const auto& c = comps.front();
    if (const auto* g = std::get_if<GammaJumps>(&c.jumps)) return {c.weight, *g};
    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&c.jumps)) return {c.weight, *cp};
    if (const auto* p = std::get_if<PoissonAtom>(&c.jumps)) {
        return {c.weight, CompoundPoissonJumps{p->intensity, ConstantMarks{1.0}}};
    }
    throw ModelError("supOU marginal needs a driver with a single gamma or compound Poisson jump component");
}

}  // namespace detail

/// Stationary marginal seed of the supOU process: Lévy measure
/// sum_k w_k int_0^inf nu_L(e^{theta_k u} dx) du.
inline LevySeed supou_marginal_seed(const LevySeed& driver, const DiscreteMixing& gamma) {
    const auto [scale, base] = detail::subordinator_base(driver);
    DiscreteMixing scaled;
    double drift = 0.0;
    for (const auto& [theta, w] : gamma.atoms) {
        scaled.atoms.push_back({theta, w * scale});
        drift += w * driver.drift() / theta;
    }
    return levy_mix(LevyMixSpec{OURateFamily{base}, scaled, drift, 0.0});
}

/// sum_k w_k theta_k^{-1} e^{-theta_k h} / sum_k w_k theta_k^{-1}
inline double supou_acf(const DiscreteMixing& gamma, double h) {
    double num = 0.0, den = 0.0;
    for (const auto& [theta, w] : gamma.atoms) {
        num += w / theta * std::exp(-theta * std::abs(h));
        den += w / theta;
    }
    return num / den;
}

/// Superposition of independent OU processes, one per atom (theta_k, w_k),
/// each driven by the driver scaled by w_k.
inline std::vector<double> simulate_supou(const LevySeed& driver, const DiscreteMixing& gamma,
                                          const std::vector<double>& times, RandomStream& rng) {
    if (gamma.atoms.empty()) throw ModelError("supOU needs at least one mixing atom");
    std::vector<double> total(times.size(), 0.0);
    for (const auto& [theta, w] : gamma.atoms) {
        if (!(theta > 0.0) || w < 0.0) throw ModelError("supOU atoms need theta > 0 and w >= 0");
        if (w == 0.0) continue;
        const auto path = simulate_ou(driver.scaled(w), theta, times, rng);
        for (std::size_t i = 0; i < times.size(); ++i) total[i] += path[i];
    }
    return total;
}

/// N(mu + beta sigma^2, sigma^2) given sigma^2.
struct NormalVarianceMean {
    double mu = 0.0;
    double beta = 0.0;
};
/// Poisson(theta) given theta.
struct PoissonIntensityMix {};
using ProbabilityMixFamily = std::variant<NormalVarianceMean, PoissonIntensityMix>;

/// (value, probability)
struct DiscreteLaw {
    std::vector<std::pair<double, double>> atoms;
};
/// IG(delta, gamma): mean delta / gamma, shape delta^2.
struct InverseGaussianLaw {
    double delta = 1.0;
    double gamma = 1.0;
};
using MixingLaw = std::variant<DiscreteLaw, InverseGaussianLaw>;

inline double draw_mixing_variable(const MixingLaw& law, RandomStream& rng) {
    return std::visit(detail::overloaded{
                          [&](const DiscreteLaw& d) {
                              double total = 0.0;
                              for (const auto& a : d.atoms) total += a.second;
                              double u = rng.uniform() * total;
                              for (const auto& [v, p] : d.atoms) {
                                  if (u < p) return v;
                                  u -= p;
                              }
                              return d.atoms.back().first;
                          },
                          [&](const InverseGaussianLaw& ig) {
                              return rng.inverse_gaussian(ig.delta / ig.gamma, ig.delta * ig.delta);
                          },
                      },
                      law);
}

/// One probability-mixed seed: the mixing variable is drawn once per call.
/// The resulting marginal law is in general not infinitely divisible.
inline LevySeed probability_mix(const ProbabilityMixFamily& family, const MixingLaw& law, RandomStream& rng) {
    const double v = draw_mixing_variable(law, rng);
    if (!(v >= 0.0)) throw ModelError("probability mixing variable must be nonnegative");
    return std::visit(detail::overloaded{
                          [&](const NormalVarianceMean& n) { return LevySeed::gaussian(n.mu + n.beta * v, v); },
                          [&](const PoissonIntensityMix&) {
                              return v > 0.0 ? LevySeed::poisson(v) : LevySeed::deterministic(0.0);
                          },
                      },
                      family);
}

}  // namespace ambit
