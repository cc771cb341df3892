#pragma once

// Homogeneous Lévy bases described by their characteristic quadruplet
// (a, b, nu, c). The jump part is always a non-negative combination of
// parametric Lévy measures; the truncation function is 1_[-1,1].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ambit/error.hpp"
#include "ambit/quadrature.hpp"
#include "ambit/random.hpp"

namespace ambit {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Jump components
// ---------------------------------------------------------------------------

struct ConstantMarks {
    double value = 1.0;
};
struct ExponentialMarks {
    double mean = 1.0;
};
struct NormalMarks {
    double mean = 0.0;
    double sd = 1.0;
};
using MarkDistribution = std::variant<ConstantMarks, ExponentialMarks, NormalMarks>;

/// intensity * delta_1(dx)
struct PoissonAtom {
    double intensity = 1.0;
};

/// x^{-1} e^{-alpha x} dx on x > 0
struct GammaJumps {
    double alpha = 1.0;
};

/// (2 pi)^{-1/2} x^{-3/2} e^{-gamma^2 x / 2} dx on x > 0. With this
/// normalisation a cell of volume v carries an IG(delta = v, gamma) law.
struct InverseGaussianJumps {
    double gamma = 1.0;
};

/// intensity * P(mark in dx)
struct CompoundPoissonJumps {
    double intensity = 1.0;
    MarkDistribution marks = ConstantMarks{1.0};
};

/// Lévy measure of a subordinator; used as the driver of OU-type components.
using SubordinatorJumps = std::variant<GammaJumps, CompoundPoissonJumps>;

/// Lévy measure of the stationary marginal of an OU process with the given
/// rate driven by `base`: int_0^inf nu_base(e^{rate u} dx) du, which has
/// density rate^{-1} x^{-1} nu_base((x, inf)).
struct OUMixedJumps {
    double rate = 1.0;
    SubordinatorJumps base = CompoundPoissonJumps{};
};

/// Piecewise-linear density on the knots plus optional atoms (location, mass).
struct TabulatedJumps {
    std::vector<double> x;
    std::vector<double> density;
    std::vector<std::pair<double, double>> atoms;
};

// Parametric families nu(dx; theta) used for Lévy mixing.
struct PoissonIntensityFamily {};  // theta * delta_1
struct GammaRateFamily {};         // x^{-1} e^{-theta x}
struct InverseGaussianFamily {};   // IG jumps with gamma = theta
struct OURateFamily {              // OU marginal measure with rate theta
    SubordinatorJumps base = CompoundPoissonJumps{};
};
using MixingFamily = std::variant<PoissonIntensityFamily, GammaRateFamily, InverseGaussianFamily, OURateFamily>;

/// int nu(dx; theta) gamma(theta) dtheta over [theta_lo, theta_hi]; analytic
/// evaluation only (no sampling).
struct ContinuousMixtureJumps {
    MixingFamily family;
    std::function<double(double)> gamma_density;
    double theta_lo = 0.0;
    double theta_hi = 1.0;
};

using JumpComponent = std::variant<PoissonAtom, GammaJumps, InverseGaussianJumps, CompoundPoissonJumps, OUMixedJumps,
                                   TabulatedJumps, ContinuousMixtureJumps>;

struct WeightedJumps {
    double weight = 1.0;
    JumpComponent jumps;
};

/// nu = sum_k weight_k * nu_k. Empty means no jumps.
struct LevyMeasure {
    std::vector<WeightedJumps> components;

    LevyMeasure() = default;
    LevyMeasure(JumpComponent c) { components.push_back({1.0, std::move(c)}); }
    explicit LevyMeasure(std::vector<WeightedJumps> parts) : components(std::move(parts)) {}

    bool empty() const noexcept { return components.empty(); }
};

inline JumpComponent family_member(const MixingFamily& family, double theta) {
    return std::visit(
        [theta](const auto& f) -> JumpComponent {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, PoissonIntensityFamily>) {
                return PoissonAtom{theta};
            } else if constexpr (std::is_same_v<F, GammaRateFamily>) {
                return GammaJumps{theta};
            } else if constexpr (std::is_same_v<F, InverseGaussianFamily>) {
                return InverseGaussianJumps{theta};
            } else {
                return OUMixedJumps{theta, f.base};
            }
        },
        family);
}

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline const QuadratureOptions& jump_quadrature() {
    static const QuadratureOptions opt{1e-10, 1e-8, 4000};
    return opt;
}

/// A measure as atoms plus a density on [lo, hi] (ends may be infinite).
struct DensityView {
    std::vector<std::pair<double, double>> atoms;
    std::function<double(double)> density;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breakpoints;
};

inline double cp_tail(const CompoundPoissonJumps& cp, double x) {
    return std::visit(overloaded{
                          [&](const ConstantMarks& m) { return x < m.value ? cp.intensity : 0.0; },
                          [&](const ExponentialMarks& m) { return cp.intensity * std::exp(-x / m.mean); },
                          [&](const NormalMarks& m) { return cp.intensity * (1.0 - normal_cdf((x - m.mean) / m.sd)); },
                      },
                      cp.marks);
}

inline double subordinator_tail(const SubordinatorJumps& base, double x) {
    return std::visit(overloaded{
                          [&](const GammaJumps& g) { return boost::math::expint(1, g.alpha * x); },
                          [&](const CompoundPoissonJumps& cp) { return cp_tail(cp, x); },
                      },
                      base);
}

inline double tabulated_density(const TabulatedJumps& t, double x) {
    if (t.x.empty() || x < t.x.front() || x > t.x.back()) return 0.0;
    auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
    if (it == t.x.end()) return t.density.back();
    const std::size_t i = static_cast<std::size_t>(it - t.x.begin());
    if (i == 0) return t.density.front();
    const double x0 = t.x[i - 1], x1 = t.x[i];
    if (x1 <= x0) return t.density[i];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * t.density[i - 1] + w * t.density[i];
}

inline DensityView density_view(const JumpComponent& c) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        overloaded{
            [](const PoissonAtom& p) {
                DensityView v;
                v.atoms.push_back({1.0, p.intensity});
                return v;
            },
            [inf](const GammaJumps& g) {
                DensityView v;
                const double a = g.alpha;
                v.density = [a](double x) { return std::exp(-a * x) / x; };
                v.lo = 0.0;
                v.hi = inf;
                return v;
            },
            [inf](const InverseGaussianJumps& ig) {
                DensityView v;
                const double g2 = ig.gamma * ig.gamma;
                v.density = [g2](double x) {
                    return std::exp(-0.5 * g2 * x) / (std::sqrt(2.0 * std::numbers::pi) * x * std::sqrt(x));
                };
                v.lo = 0.0;
                v.hi = inf;
                return v;
            },
            [inf](const CompoundPoissonJumps& cp) {
                DensityView v;
                const double lam = cp.intensity;
                std::visit(overloaded{
                               [&](const ConstantMarks& m) { v.atoms.push_back({m.value, lam}); },
                               [&](const ExponentialMarks& m) {
                                   const double mu = m.mean;
                                   v.density = [lam, mu](double x) { return lam / mu * std::exp(-x / mu); };
                                   v.lo = 0.0;
                                   v.hi = inf;
                               },
                               [&](const NormalMarks& m) {
                                   const double mu = m.mean, sd = m.sd;
                                   v.density = [lam, mu, sd](double x) { return lam * normal_pdf((x - mu) / sd) / sd; };
                                   v.lo = -inf;
                                   v.hi = inf;
                                   v.breakpoints = {mu};
                               },
                           },
                           cp.marks);
                return v;
            },
            [inf](const OUMixedJumps& ou) {
                DensityView v;
                const double rate = ou.rate;
                SubordinatorJumps base = ou.base;
                v.density = [rate, base](double x) { return subordinator_tail(base, x) / (rate * x); };
                v.lo = 0.0;
                v.hi = inf;
                if (const auto* cp = std::get_if<CompoundPoissonJumps>(&ou.base)) {
                    if (const auto* cm = std::get_if<ConstantMarks>(&cp->marks)) {
                        v.hi = cm->value;
                    }
                }
                return v;
            },
            [](const TabulatedJumps& t) {
                DensityView v;
                v.atoms = t.atoms;
                if (t.x.size() >= 2) {
                    TabulatedJumps copy = t;
                    v.density = [copy](double x) { return tabulated_density(copy, x); };
                    v.lo = t.x.front();
                    v.hi = t.x.back();
                    v.breakpoints = t.x;
                }
                return v;
            },
            [](const ContinuousMixtureJumps&) -> DensityView {
                throw ModelError("continuous Lévy mixtures have no direct density view");
            },
        },
        c);
}

/// int g(x) nu(dx) for a density view, split at the view's breakpoints, at
/// -1, 0, 1 and at any extra points.
template <class T, class G>
QuadratureResult<T> measure_integral(const DensityView& v, G&& g, std::vector<double> extra = {},
                                     const QuadratureOptions& opt = jump_quadrature()) {
    QuadratureResult<T> total;
    total.converged = true;
    for (const auto& [x, m] : v.atoms) total.value += m * g(x);
    if (!v.density) return total;
    std::vector<double> pts{v.lo, v.hi, -1.0, 0.0, 1.0};
    pts.insert(pts.end(), v.breakpoints.begin(), v.breakpoints.end());
    pts.insert(pts.end(), extra.begin(), extra.end());
    std::vector<double> kept;
    for (double p : pts) {
        if (p >= v.lo && p <= v.hi && !std::isnan(p)) kept.push_back(p);
    }
    auto integrand = [&](double x) -> T {
        const double d = v.density(x);
        if (d == 0.0) return T{};
        return g(x) * d;
    };
    auto r = integrate_pieces<T>(integrand, kept, opt);
    total.value += r.value;
    total.error = r.error;
    total.intervals = r.intervals;
    total.converged = r.converged;
    total.worst_lo = r.worst_lo;
    total.worst_hi = r.worst_hi;
    return total;
}

template <class T, class Op>
T mixture_integral(const ContinuousMixtureJumps& mix, Op&& op, const std::string& what) {
    auto f = [&](double theta) -> T {
        const double w = mix.gamma_density(theta);
        if (w == 0.0) return T{};
        return w * op(family_member(mix.family, theta));
    };
    auto r = integrate<T>(f, mix.theta_lo, mix.theta_hi, QuadratureOptions{1e-10, 1e-8, 2000});
    return require_converged(r, what);
}

// --- closed forms -----------------------------------------------------------

inline cplx mark_cf(const MarkDistribution& marks, cplx z) {
    return std::visit(overloaded{
                          [&](const ConstantMarks& m) { return std::exp(kI * z * m.value); },
                          [&](const ExponentialMarks& m) { return 1.0 / (1.0 - kI * z * m.mean); },
                          [&](const NormalMarks& m) { return std::exp(kI * z * m.mean - 0.5 * z * z * m.sd * m.sd); },
                      },
                      marks);
}

inline double mark_moment(const MarkDistribution& marks, int n) {
    return std::visit(overloaded{
                          [&](const ConstantMarks& m) { return std::pow(m.value, n); },
                          [&](const ExponentialMarks& m) { return std::tgamma(n + 1.0) * std::pow(m.mean, n); },
                          [&](const NormalMarks& m) {
                              const double mu = m.mean, s2 = m.sd * m.sd;
                              switch (n) {
                                  case 1: return mu;
                                  case 2: return mu * mu + s2;
                                  case 3: return mu * mu * mu + 3.0 * mu * s2;
                                  case 4: return mu * mu * mu * mu + 6.0 * mu * mu * s2 + 3.0 * s2 * s2;
                                  default: throw std::invalid_argument("normal mark moment order must be 1..4");
                              }
                          },
                      },
                      marks);
}

/// E[J; |J| <= 1]
inline double mark_truncated_mean(const MarkDistribution& marks) {
    return std::visit(overloaded{
                          [](const ConstantMarks& m) { return std::abs(m.value) <= 1.0 ? m.value : 0.0; },
                          [](const ExponentialMarks& m) {
                              const double e = std::exp(-1.0 / m.mean);
                              return m.mean * (1.0 - e) - e;
                          },
                          [](const NormalMarks& m) {
                              const double a = (-1.0 - m.mean) / m.sd, b = (1.0 - m.mean) / m.sd;
                              return m.mean * (normal_cdf(b) - normal_cdf(a)) + m.sd * (normal_pdf(a) - normal_pdf(b));
                          },
                      },
                      marks);
}

inline cplx subordinator_cf(const SubordinatorJumps& base, cplx z);

/// int (e^{i z x} - 1) nu(dx); all supported components have finite variation.
inline cplx jump_cf(const JumpComponent& c, cplx z) {
    return std::visit(
        overloaded{
            [&](const PoissonAtom& p) { return p.intensity * (std::exp(kI * z) - 1.0); },
            [&](const GammaJumps& g) { return -std::log(1.0 - kI * z / g.alpha); },
            [&](const InverseGaussianJumps& ig) {
                return cplx(ig.gamma) - std::sqrt(cplx(ig.gamma * ig.gamma) - 2.0 * kI * z);
            },
            [&](const CompoundPoissonJumps& cp) { return cp.intensity * (mark_cf(cp.marks, z) - 1.0); },
            [&](const OUMixedJumps& ou) -> cplx {
                if (const auto* cp = std::get_if<CompoundPoissonJumps>(&ou.base)) {
                    if (const auto* em = std::get_if<ExponentialMarks>(&cp->marks)) {
                        return -(cp->intensity / ou.rate) * std::log(1.0 - kI * z * em->mean);
                    }
                }
                // (1/rate) int_0^1 J_base(z y) / y dy
                auto f = [&](double y) -> cplx { return subordinator_cf(ou.base, z * y) / y; };
                auto r = integrate<cplx>(f, 0.0, 1.0, jump_quadrature());
                return require_converged(r, "OU-mixed cumulant") / ou.rate;
            },
            [&](const TabulatedJumps& t) -> cplx {
                auto r = measure_integral<cplx>(density_view(t), [&](double x) { return std::exp(kI * z * x) - 1.0; });
                return require_converged(r, "tabulated cumulant");
            },
            [&](const ContinuousMixtureJumps& mix) -> cplx {
                return mixture_integral<cplx>(mix, [&](const JumpComponent& m) { return jump_cf(m, z); },
                                              "mixture cumulant");
            },
        },
        c);
}

inline cplx subordinator_cf(const SubordinatorJumps& base, cplx z) {
    return std::visit([&](const auto& b) { return jump_cf(JumpComponent{b}, z); }, base);
}

/// int x^n nu(dx), n >= 1
inline double jump_moment(const JumpComponent& c, int n) {
    return std::visit(
        overloaded{
            [&](const PoissonAtom& p) { return p.intensity; },
            [&](const GammaJumps& g) { return std::tgamma(static_cast<double>(n)) / std::pow(g.alpha, n); },
            [&](const InverseGaussianJumps& ig) {
                const double c2 = 0.5 * ig.gamma * ig.gamma;
                return std::tgamma(n - 0.5) * std::pow(c2, -(n - 0.5)) / std::sqrt(2.0 * std::numbers::pi);
            },
            [&](const CompoundPoissonJumps& cp) { return cp.intensity * mark_moment(cp.marks, n); },
            [&](const OUMixedJumps& ou) {
                const double base = std::visit([&](const auto& b) { return jump_moment(JumpComponent{b}, n); }, ou.base);
                return base / (n * ou.rate);
            },
            [&](const TabulatedJumps& t) {
                auto r = measure_integral<double>(density_view(t), [n](double x) { return std::pow(x, n); });
                return require_converged(r, "tabulated moment");
            },
            [&](const ContinuousMixtureJumps& mix) {
                return mixture_integral<double>(mix, [&](const JumpComponent& m) { return jump_moment(m, n); },
                                                "mixture moment");
            },
        },
        c);
}

/// int_{[-1,1]} x nu(dx)
inline double truncated_mean(const JumpComponent& c) {
    return std::visit(
        overloaded{
            [](const PoissonAtom& p) { return p.intensity; },
            [](const GammaJumps& g) { return -std::expm1(-g.alpha) / g.alpha; },
            [](const InverseGaussianJumps& ig) {
                return boost::math::erf(ig.gamma / std::numbers::sqrt2) / ig.gamma;
            },
            [](const CompoundPoissonJumps& cp) { return cp.intensity * mark_truncated_mean(cp.marks); },
            [](const OUMixedJumps& ou) {
                // rate^{-1} int_0^1 tail(x) dx
                const double integral = std::visit(
                    overloaded{
                        [](const GammaJumps& g) {
                            return boost::math::expint(1, g.alpha) - std::expm1(-g.alpha) / g.alpha;
                        },
                        [](const CompoundPoissonJumps& cp) {
                            return std::visit(overloaded{
                                                  [&](const ConstantMarks& m) { return cp.intensity * std::min(m.value, 1.0); },
                                                  [&](const ExponentialMarks& m) {
                                                      return cp.intensity * m.mean * (-std::expm1(-1.0 / m.mean));
                                                  },
                                                  [&](const NormalMarks&) -> double {
                                                      throw ModelError("OU-mixed base must have positive marks");
                                                  },
                                              },
                                              cp.marks);
                        },
                    },
                    ou.base);
                return integral / ou.rate;
            },
            [](const TabulatedJumps& t) {
                auto r = measure_integral<double>(density_view(t), [](double x) { return std::abs(x) <= 1.0 ? x : 0.0; });
                return require_converged(r, "tabulated truncated mean");
            },
            [](const ContinuousMixtureJumps& mix) {
                return mixture_integral<double>(mix, [](const JumpComponent& m) { return truncated_mean(m); },
                                                "mixture truncated mean");
            },
        },
        c);
}

/// int min(1, x^2) nu(dx)
inline double small_jump_mass(const JumpComponent& c) {
    if (const auto* mix = std::get_if<ContinuousMixtureJumps>(&c)) {
        return mixture_integral<double>(*mix, [](const JumpComponent& m) { return small_jump_mass(m); },
                                        "mixture admissibility integral");
    }
    auto r = measure_integral<double>(density_view(c), [](double x) { return std::min(1.0, x * x); });
    if (!r.converged || !std::isfinite(r.value)) {
        throw ModelError("Lévy measure fails int min(1, x^2) nu(dx) < inf (estimate " + std::to_string(r.value) + ")");
    }
    return r.value;
}

inline bool has_nonnegative_support(const JumpComponent& c) {
    return std::visit(overloaded{
                          [](const CompoundPoissonJumps& cp) {
                              return std::visit(overloaded{
                                                    [](const ConstantMarks& m) { return m.value >= 0.0; },
                                                    [](const ExponentialMarks&) { return true; },
                                                    [](const NormalMarks&) { return false; },
                                                },
                                                cp.marks);
                          },
                          [](const TabulatedJumps& t) {
                              for (const auto& [x, m] : t.atoms) {
                                  if (x < 0.0 && m > 0.0) return false;
                              }
                              return t.x.empty() || t.x.front() >= 0.0;
                          },
                          [](const auto&) { return true; },
                      },
                      c);
}

inline bool is_finite_activity(const JumpComponent& c) {
    return std::holds_alternative<PoissonAtom>(c) || std::holds_alternative<CompoundPoissonJumps>(c) ||
           std::holds_alternative<TabulatedJumps>(c);
}

/// Total mass of a finite-activity component.
inline double total_mass(const JumpComponent& c) {
    return std::visit(overloaded{
                          [](const PoissonAtom& p) { return p.intensity; },
                          [](const CompoundPoissonJumps& cp) { return cp.intensity; },
                          [](const TabulatedJumps& t) {
                              auto r = measure_integral<double>(density_view(t), [](double) { return 1.0; });
                              return r.value;
                          },
                          [](const auto&) -> double { throw ModelError("component has infinite activity"); },
                      },
                      c);
}

inline double sample_mark(const MarkDistribution& marks, RandomStream& rng) {
    return std::visit(overloaded{
                          [](const ConstantMarks& m) { return m.value; },
                          [&](const ExponentialMarks& m) { return rng.exponential(m.mean); },
                          [&](const NormalMarks& m) { return rng.normal(m.mean, m.sd); },
                      },
                      marks);
}

/// One jump size drawn from the normalised measure of a finite-activity component.
inline double sample_jump(const JumpComponent& c, RandomStream& rng) {
    return std::visit(
        overloaded{
            [](const PoissonAtom&) { return 1.0; },
            [&](const CompoundPoissonJumps& cp) { return sample_mark(cp.marks, rng); },
            [&](const TabulatedJumps& t) {
                double atom_mass = 0.0;
                for (const auto& a : t.atoms) atom_mass += a.second;
                std::vector<double> seg_mass;
                double cont = 0.0;
                for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
                    const double m = 0.5 * (t.density[i] + t.density[i + 1]) * (t.x[i + 1] - t.x[i]);
                    seg_mass.push_back(m);
                    cont += m;
                }
                double u = rng.uniform() * (atom_mass + cont);
                for (const auto& a : t.atoms) {
                    if (u < a.second) return a.first;
                    u -= a.second;
                }
                for (std::size_t i = 0; i < seg_mass.size(); ++i) {
                    if (u < seg_mass[i] || i + 1 == seg_mass.size()) {
                        // invert the linear density on this segment
                        const double x0 = t.x[i], w = t.x[i + 1] - t.x[i];
                        const double f0 = t.density[i], f1 = t.density[i + 1];
                        const double slope = (f1 - f0) / w;
                        if (std::abs(slope) < 1e-14 * std::max(1.0, f0)) return x0 + u / f0;
                        const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * u);
                        return x0 + (std::sqrt(disc) - f0) / slope;
                    }
                    u -= seg_mass[i];
                }
                return t.x.back();
            },
            [](const auto&) -> double { throw ModelError("component has infinite activity"); },
        },
        c);
}

/// Draw from the ID law with cumulant function s * int (e^{izx}-1) nu(dx).
inline double sample_component(const JumpComponent& c, double s, RandomStream& rng) {
    return std::visit(
        overloaded{
            [&](const PoissonAtom& p) { return static_cast<double>(rng.poisson(p.intensity * s)); },
            [&](const GammaJumps& g) { return rng.gamma(s, g.alpha); },
            [&](const InverseGaussianJumps& ig) { return rng.inverse_gaussian(s / ig.gamma, s * s); },
            [&](const CompoundPoissonJumps& cp) {
                const std::uint64_t n = rng.poisson(cp.intensity * s);
                double total = 0.0;
                for (std::uint64_t k = 0; k < n; ++k) total += sample_mark(cp.marks, rng);
                return total;
            },
            [&](const OUMixedJumps& ou) -> double {
                const auto* cp = std::get_if<CompoundPoissonJumps>(&ou.base);
                if (!cp) throw ModelError("sampling OU-mixed jumps requires a compound Poisson base");
                if (const auto* em = std::get_if<ExponentialMarks>(&cp->marks)) {
                    return rng.gamma(s * cp->intensity / ou.rate, 1.0 / em->mean);
                }
                // shot noise: int_0^U e^{-rate u} dL_u over time-volume s
                const double horizon = 40.0 / ou.rate;
                const std::uint64_t n = rng.poisson(cp->intensity * s * horizon);
                double total = 0.0;
                for (std::uint64_t k = 0; k < n; ++k) {
                    total += sample_mark(cp->marks, rng) * std::exp(-ou.rate * horizon * rng.uniform());
                }
                return total;
            },
            [&](const TabulatedJumps& t) {
                const std::uint64_t n = rng.poisson(total_mass(t) * s);
                double total = 0.0;
                for (std::uint64_t k = 0; k < n; ++k) total += sample_jump(JumpComponent{t}, rng);
                return total;
            },
            [](const ContinuousMixtureJumps&) -> double {
                throw ModelError("continuous Lévy mixtures are analytic only; use a discrete mixing measure to simulate");
            },
        },
        c);
}

inline void validate_component(const JumpComponent& c) {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ModelError(std::string(what) + " must be positive and finite");
    };
    std::visit(overloaded{
                   [&](const PoissonAtom& p) { positive(p.intensity, "Poisson intensity"); },
                   [&](const GammaJumps& g) { positive(g.alpha, "gamma alpha"); },
                   [&](const InverseGaussianJumps& ig) { positive(ig.gamma, "inverse Gaussian gamma"); },
                   [&](const CompoundPoissonJumps& cp) {
                       if (!(cp.intensity >= 0.0)) throw ModelError("compound Poisson intensity must be nonnegative");
                       std::visit(overloaded{
                                      [](const ConstantMarks&) {},
                                      [&](const ExponentialMarks& m) { positive(m.mean, "exponential mark mean"); },
                                      [&](const NormalMarks& m) { positive(m.sd, "normal mark sd"); },
                                  },
                                  cp.marks);
                   },
                   [&](const OUMixedJumps& ou) {
                       positive(ou.rate, "OU rate");
                       std::visit([](const auto& b) { validate_component(JumpComponent{b}); }, ou.base);
                       if (!has_nonnegative_support(std::visit([](const auto& b) { return JumpComponent{b}; }, ou.base))) {
                           throw ModelError("OU-mixed base must be a subordinator");
                       }
                   },
                   [&](const TabulatedJumps& t) {
                       if (t.x.size() != t.density.size()) throw ModelError("tabulated density: knot/value size mismatch");
                       for (std::size_t i = 0; i < t.x.size(); ++i) {
                           if (t.density[i] < 0.0) throw ModelError("tabulated density must be nonnegative");
                           if (i > 0 && t.x[i] < t.x[i - 1]) throw ModelError("tabulated knots must be sorted");
                       }
                       for (const auto& a : t.atoms) {
                           if (a.second < 0.0) throw ModelError("atom masses must be nonnegative");
                           if (a.first == 0.0) throw ModelError("Lévy measures carry no atom at 0");
                       }
                   },
                   [&](const ContinuousMixtureJumps& mix) {
                       if (!mix.gamma_density) throw ModelError("continuous mixture needs a mixing density");
                       if (!(mix.theta_hi > mix.theta_lo)) throw ModelError("continuous mixture needs theta_lo < theta_hi");
                   },
               },
               c);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Characteristic quadruplet and seed
// ---------------------------------------------------------------------------

/// Control measure density with respect to Lebesgue measure. Empty means unit
/// density, which is the only case supported for sampling.
struct ControlMeasure {
    std::function<double(double xi, double s)> density;

    bool is_lebesgue() const noexcept { return !static_cast<bool>(density); }
    double at(double xi, double s) const { return density ? density(xi, s) : 1.0; }
};

struct CharacteristicQuadruplet {
    double a = 0.0;  ///< drift density under the 1_[-1,1] truncation
    double b = 0.0;  ///< Gaussian variance density
    LevyMeasure levy_measure;
    ControlMeasure control;
};

/// Lévy seed L' of a homogeneous basis. Immutable once constructed.
class LevySeed {
public:
    explicit LevySeed(CharacteristicQuadruplet cq) : cq_(std::move(cq)) { validate(); }

    /// Builds a seed whose drift outside the truncation convention is `drift`,
    /// i.e. a = drift + int_{[-1,1]} x nu(dx).
    static LevySeed from_drift(double drift, double b, LevyMeasure nu) {
        double trunc = 0.0;
        for (const auto& part : nu.components) trunc += part.weight * detail::truncated_mean(part.jumps);
        return LevySeed(CharacteristicQuadruplet{drift + trunc, b, std::move(nu), {}});
    }

    static LevySeed gaussian(double mean, double variance) {
        return LevySeed(CharacteristicQuadruplet{mean, variance, {}, {}});
    }
    static LevySeed poisson(double intensity) { return from_drift(0.0, 0.0, LevyMeasure(PoissonAtom{intensity})); }
    static LevySeed gamma(double alpha) { return from_drift(0.0, 0.0, LevyMeasure(GammaJumps{alpha})); }
    static LevySeed inverse_gaussian(double gamma) {
        return from_drift(0.0, 0.0, LevyMeasure(InverseGaussianJumps{gamma}));
    }
    static LevySeed compound_poisson(double intensity, MarkDistribution marks, double drift = 0.0) {
        return from_drift(drift, 0.0, LevyMeasure(CompoundPoissonJumps{intensity, marks}));
    }
    /// Deterministic seed L' = drift.
    static LevySeed deterministic(double drift) { return gaussian(drift, 0.0); }

    const CharacteristicQuadruplet& cq() const noexcept { return cq_; }
    double a() const noexcept { return cq_.a; }
    double b() const noexcept { return cq_.b; }
    const LevyMeasure& levy_measure() const noexcept { return cq_.levy_measure; }

    /// Drift once the jump part is written without compensation.
    double drift() const {
        double trunc = 0.0;
        for (const auto& part : cq_.levy_measure.components) trunc += part.weight * detail::truncated_mean(part.jumps);
        return cq_.a - trunc;
    }

    /// Seed with cumulant function factor * C(zeta; L').
    LevySeed scaled(double factor) const {
        if (!(factor >= 0.0)) throw ModelError("seed scaling factor must be nonnegative");
        CharacteristicQuadruplet cq = cq_;
        cq.a *= factor;
        cq.b *= factor;
        for (auto& part : cq.levy_measure.components) part.weight *= factor;
        return LevySeed(std::move(cq));
    }

    bool is_subordinator() const {
        if (cq_.b != 0.0) return false;
        for (const auto& part : cq_.levy_measure.components) {
            if (part.weight > 0.0 && !detail::has_nonnegative_support(part.jumps)) return false;
        }
        return drift() >= -1e-12;
    }

    bool is_finite_activity() const {
        for (const auto& part : cq_.levy_measure.components) {
            if (part.weight > 0.0 && !detail::is_finite_activity(part.jumps)) return false;
        }
        return true;
    }

    bool has_jumps() const {
        for (const auto& part : cq_.levy_measure.components) {
            if (part.weight > 0.0) return true;
        }
        return false;
    }

private:
    void validate() const {
        if (!(cq_.b >= 0.0) || !std::isfinite(cq_.b)) throw ModelError("Gaussian variance b must be nonnegative");
        if (!std::isfinite(cq_.a)) throw ModelError("drift a must be finite");
        for (const auto& part : cq_.levy_measure.components) {
            if (!(part.weight >= 0.0)) throw ModelError("Lévy measure weights must be nonnegative");
            detail::validate_component(part.jumps);
            if (std::holds_alternative<GammaJumps>(part.jumps) ||
                std::holds_alternative<InverseGaussianJumps>(part.jumps)) {
                (void)detail::small_jump_mass(part.jumps);
            }
        }
    }

    CharacteristicQuadruplet cq_;
};

/// Cumulant function C(z; L') = i z a - z^2 b / 2 + int (e^{izx} - 1 - i z x 1_[-1,1](x)) nu(dx).
/// Accepts complex z for analytic continuation (e.g. cumulant generating
/// function along the imaginary axis).
inline cplx seed_cumulant(const LevySeed& seed, cplx z) {
    if (z == cplx(0.0)) return cplx(0.0);
    cplx c = kI * z * seed.a() - 0.5 * z * z * seed.b();
    for (const auto& part : seed.levy_measure().components) {
        if (part.weight == 0.0) continue;
        c += part.weight * (detail::jump_cf(part.jumps, z) - kI * z * detail::truncated_mean(part.jumps));
    }
    return c;
}

inline cplx seed_cumulant(const LevySeed& seed, double zeta) { return seed_cumulant(seed, cplx(zeta)); }

/// Same quantity evaluated purely by adaptive quadrature of the truncated
/// Lévy–Khintchine integrand (split at +-1). Throws QuadratureError.
inline cplx seed_cumulant_quadrature(const LevySeed& seed, double zeta) {
    cplx c = kI * zeta * seed.a() - 0.5 * zeta * zeta * seed.b();
    auto integrand = [zeta](double x) -> cplx {
        const double trunc = std::abs(x) <= 1.0 ? x : 0.0;
        return std::exp(kI * zeta * x) - 1.0 - kI * zeta * trunc;
    };
    for (const auto& part : seed.levy_measure().components) {
        if (part.weight == 0.0) continue;
        cplx jump;
        if (const auto* mix = std::get_if<ContinuousMixtureJumps>(&part.jumps)) {
            jump = detail::mixture_integral<cplx>(
                *mix,
                [&](const JumpComponent& m) {
                    return require_converged(detail::measure_integral<cplx>(detail::density_view(m), integrand),
                                             "seed cumulant");
                },
                "seed cumulant");
        } else {
            auto r = detail::measure_integral<cplx>(detail::density_view(part.jumps), integrand);
            jump = require_converged(r, "seed cumulant");
        }
        c += part.weight * jump;
    }
    return c;
}

/// i-th cumulant of the seed, i in 1..4. kappa_1 includes the drift coming
/// from the truncation convention.
inline double cumulant(const LevySeed& seed, int order) {
    if (order < 1 || order > 4) throw std::invalid_argument("cumulant order must be in 1..4");
    double k = 0.0;
    if (order == 1) k = seed.drift();
    if (order == 2) k = seed.b();
    for (const auto& part : seed.levy_measure().components) {
        if (part.weight == 0.0) continue;
        const double m = detail::jump_moment(part.jumps, order);
        if (!std::isfinite(m)) throw std::domain_error("seed moment of order " + std::to_string(order) + " is infinite");
        k += part.weight * m;
    }
    return k;
}

inline double seed_mean(const LevySeed& seed) { return cumulant(seed, 1); }
inline double seed_variance(const LevySeed& seed) { return cumulant(seed, 2); }

/// Increment sampler for cells of a fixed Lebesgue volume.
class CellIncrementSampler {
public:
    CellIncrementSampler(LevySeed seed, double volume) : seed_(std::move(seed)), volume_(volume) {
        if (!(volume > 0.0)) throw std::invalid_argument("cell volume must be positive");
        if (!seed_.cq().control.is_lebesgue()) {
            throw ModelError("sampling requires a unit-density Lebesgue control measure");
        }
        drift_ = seed_.drift();
    }

    const LevySeed& seed() const noexcept { return seed_; }
    double volume() const noexcept { return volume_; }

    double operator()(RandomStream& rng) const { return sample(rng, volume_); }

    /// Draw for an arbitrary volume (used by extended subordination).
    double sample(RandomStream& rng, double volume) const {
        if (volume <= 0.0) return 0.0;
        double x = drift_ * volume;
        if (seed_.b() > 0.0) x += std::sqrt(seed_.b() * volume) * rng.normal();
        for (const auto& part : seed_.levy_measure().components) {
            if (part.weight == 0.0) continue;
            x += detail::sample_component(part.jumps, part.weight * volume, rng);
        }
        return x;
    }

private:
    LevySeed seed_;
    double volume_;
    double drift_ = 0.0;
};

inline double sample_increment(const CellIncrementSampler& sampler, RandomStream& rng) { return sampler(rng); }

// ---------------------------------------------------------------------------
// Quantities entering the Rajput–Rosinski integrability conditions
// ---------------------------------------------------------------------------

/// V1(u) = u a + int (rho(xu) - u rho(x)) nu(dx), rho(x) = x 1_[-1,1](x)
inline double integrability_v1(const LevySeed& seed, double u) {
    double v = u * seed.a();
    if (u == 0.0) return 0.0;
    auto rho = [](double x) { return std::abs(x) <= 1.0 ? x : 0.0; };
    auto g = [&](double x) { return rho(x * u) - u * rho(x); };
    const double cut = 1.0 / std::abs(u);
    for (const auto& part : seed.levy_measure().components) {
        if (part.weight == 0.0) continue;
        double j;
        if (const auto* mix = std::get_if<ContinuousMixtureJumps>(&part.jumps)) {
            j = detail::mixture_integral<double>(
                *mix,
                [&](const JumpComponent& m) {
                    return detail::measure_integral<double>(detail::density_view(m), g, {cut, -cut}).value;
                },
                "V1");
        } else {
            j = require_converged(detail::measure_integral<double>(detail::density_view(part.jumps), g, {cut, -cut}),
                                  "V1");
        }
        v += part.weight * j;
    }
    return v;
}

/// V2(u) = int min(1, |xu|^2) nu(dx)
inline double integrability_v2(const LevySeed& seed, double u) {
    if (u == 0.0) return 0.0;
    auto g = [u](double x) { return std::min(1.0, x * x * u * u); };
    const double cut = 1.0 / std::abs(u);
    double v = 0.0;
    for (const auto& part : seed.levy_measure().components) {
        if (part.weight == 0.0) continue;
        double j;
        if (const auto* mix = std::get_if<ContinuousMixtureJumps>(&part.jumps)) {
            j = detail::mixture_integral<double>(
                *mix,
                [&](const JumpComponent& m) {
                    return detail::measure_integral<double>(detail::density_view(m), g, {cut, -cut}).value;
                },
                "V2");
        } else {
            j = require_converged(detail::measure_integral<double>(detail::density_view(part.jumps), g, {cut, -cut}),
                                  "V2");
        }
        v += part.weight * j;
    }
    return v;
}

}  // namespace ambit
