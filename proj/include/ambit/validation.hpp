#pragma once

// Validation scenarios comparing simulated statistics with analytic values.
// Each suite is a pure function of its options; reports hold no timings so
// reruns with the same master seed serialise identically.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ambit/ambit_field.hpp"
#include "ambit/estimation.hpp"
#include "ambit/geometry.hpp"
#include "ambit/levy_basis.hpp"
#include "ambit/quadrature.hpp"
#include "ambit/random.hpp"
#include "ambit/trawl.hpp"
#include "ambit/volatility.hpp"

namespace ambit {

struct Check {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string suite;
    std::string description;
    std::uint64_t master_seed = 0;
    std::size_t replicates = 0;
    std::vector<Check> checks;

    bool pass() const {
        if (checks.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct ValidationOptions {
    std::uint64_t master_seed = 20240611;
    double scale = 1.0;  ///< multiplies every replicate count
};

namespace validation {

inline Check check(std::string name, double measured, double target, double tolerance) {
    const bool ok = std::isfinite(measured) && std::isfinite(tolerance) && std::abs(measured - target) <= tolerance;
    return {std::move(name), measured, target, tolerance, ok};
}

inline std::size_t reps(std::size_t base, const ValidationOptions& o) {
    return std::max<std::size_t>(50, static_cast<std::size_t>(std::llround(static_cast<double>(base) * o.scale)));
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline double hypot_se(double a, double b) { return std::sqrt(a * a + b * b); }

inline std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t i) {
    std::vector<double> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = rows[r][i];
    return out;
}

// ---------------------------------------------------------------------------

inline SuiteReport trawl_acf(const ValidationOptions& o) {
    SuiteReport rep{"trawl-acf", "exponential trawl (lambda 0.7, Gaussian seed): ACF vs exp(-lambda h)", o.master_seed};
    const TrawlModel m{TrawlSet::exponential(0.7), LevySeed::gaussian(0.0, 1.0)};
    const std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0};
    rep.replicates = reps(10000, o);
    const auto paths = run_replicates(rep.replicates, o.master_seed, 1,
                                      [&](std::size_t, RandomStream& rng) { return simulate_grid(m, times, {}, rng).values; });
    for (const auto& e : empirical_acf(paths, {1, 2, 4})) {
        const double h = 0.5 * static_cast<double>(e.lag);
        rep.checks.push_back(check("acf h=" + fmt(h), e.value, acf(m, h), 3.0 * e.se));
    }
    return rep;
}

inline SuiteReport trawl_marginal(const ValidationOptions& o) {
    SuiteReport rep{"trawl-marginal", "exponential trawl marginals: Gaussian variance b/lambda, Poisson(2) mean and variance",
                    o.master_seed};
    rep.replicates = reps(10000, o);
    const TrawlSet trawl = TrawlSet::exponential(0.7);
    auto marginal = [&](const LevySeed& seed, std::uint64_t tag) {
        const TrawlModel m{trawl, seed};
        const auto y = run_replicates(rep.replicates, o.master_seed, tag, [&](std::size_t, RandomStream& rng) {
            return simulate_grid(m, {0.0}, {}, rng).values[0];
        });
        return summarize(y);
    };
    const LevySeed gauss = LevySeed::gaussian(0.0, 1.0);
    const auto g = marginal(gauss, 2);
    rep.checks.push_back(check("gaussian variance", g.k[1], marginal_cumulant_order({trawl, gauss}, 2), 3.0 * g.se[1]));
    const LevySeed pois = LevySeed::poisson(2.0);
    const auto p = marginal(pois, 3);
    rep.checks.push_back(check("poisson mean", p.k[0], marginal_cumulant_order({trawl, pois}, 1), 3.0 * p.se[0]));
    rep.checks.push_back(check("poisson variance", p.k[1], marginal_cumulant_order({trawl, pois}, 2), 3.0 * p.se[1]));
    return rep;
}

inline SuiteReport shape_invariance(const ValidationOptions& o) {
    SuiteReport rep{"shape-invariance", "exponential(1) and unit step trawls share marginal laws", o.master_seed};
    rep.replicates = reps(10000, o);
    const LevySeed seed = LevySeed::compound_poisson(1.5, ExponentialMarks{1.0});
    const TrawlModel a{TrawlSet::exponential(1.0), seed};
    const TrawlModel b{TrawlSet::step(1.0, 1.0), seed};
    const std::vector<double> zetas{-2.0, -0.5, 0.5, 1.0, 2.0};
    for (double z : zetas) {
        const cplx ca = marginal_cumulant(a, z), cb = marginal_cumulant(b, z);
        rep.checks.push_back(check("analytic |dC| zeta=" + fmt(z), std::abs(ca - cb), 0.0, 1e-12 * std::max(1.0, std::abs(ca))));
    }
    auto draw = [&](const TrawlModel& m, std::uint64_t tag) {
        return run_replicates(rep.replicates, o.master_seed, tag, [&](std::size_t, RandomStream& rng) {
            return simulate_exact_cp(m, {0.0}, rng).values[0];
        });
    };
    const auto cfa = empirical_cf(draw(a, 4), zetas);
    const auto cfb = empirical_cf(draw(b, 5), zetas);
    for (std::size_t i = 0; i < zetas.size(); ++i) {
        const std::string z = fmt(zetas[i]);
        rep.checks.push_back(check("empirical Re cf zeta=" + z, cfa[i].value.real(), cfb[i].value.real(),
                                   3.0 * hypot_se(cfa[i].se_re, cfb[i].se_re)));
        rep.checks.push_back(check("empirical Im cf zeta=" + z, cfa[i].value.imag(), cfb[i].value.imag(),
                                   3.0 * hypot_se(cfa[i].se_im, cfb[i].se_im)));
    }
    return rep;
}

inline SuiteReport dual_simulator(const ValidationOptions& o) {
    SuiteReport rep{"dual-simulator", "compound Poisson trawl: grid simulator (dx = dt = 0.01) vs exact point simulator",
                    o.master_seed};
    rep.replicates = reps(10000, o);
    const TrawlModel m{TrawlSet::exponential(0.7), LevySeed::compound_poisson(2.0, ExponentialMarks{1.0})};
    const GridOptions grid;
    const std::vector<double> times{0.0, 1.0};
    const auto g = run_replicates(rep.replicates, o.master_seed, 6,
                                  [&](std::size_t, RandomStream& rng) { return simulate_grid(m, times, grid, rng).values; });
    const auto e = run_replicates(rep.replicates, o.master_seed, 7,
                                  [&](std::size_t, RandomStream& rng) { return simulate_exact_cp(m, times, rng).values; });
    const double bias = grid.dx + grid.dt;
    const auto sg = summarize(column(g, 0)), se = summarize(column(e, 0));
    auto tol = [&](double s1, double s2, double analytic) {
        return 3.0 * hypot_se(s1, s2) + bias * std::max(1.0, std::abs(analytic));
    };
    rep.checks.push_back(check("k1", sg.k[0], se.k[0], tol(sg.se[0], se.se[0], marginal_cumulant_order(m, 1))));
    rep.checks.push_back(check("k2", sg.k[1], se.k[1], tol(sg.se[1], se.se[1], marginal_cumulant_order(m, 2))));
    const Estimate cg = covariance(column(g, 0), column(g, 1));
    const Estimate ce = covariance(column(e, 0), column(e, 1));
    rep.checks.push_back(check("lag-1 covariance", cg.value, ce.value, tol(cg.se, ce.se, autocovariance(m, 1.0))));
    return rep;
}

inline SuiteReport increment_cumulant_suite(const ValidationOptions& o) {
    SuiteReport rep{"increment-cumulant", "log-CF of Y_{t+h} - Y_t vs the increment cumulant (h = 1)", o.master_seed};
    rep.replicates = reps(10000, o);
    const TrawlModel m{TrawlSet::exponential(0.7), LevySeed::compound_poisson(2.0, ExponentialMarks{1.0})};
    const double h = 1.0;
    const auto inc = run_replicates(rep.replicates, o.master_seed, 8, [&](std::size_t, RandomStream& rng) {
        const auto p = simulate_exact_cp(m, {0.0, h}, rng);
        return p.values[1] - p.values[0];
    });
    const std::vector<double> zetas{-1.0, -0.5, 0.3, 0.7, 1.2};
    const auto lcf = empirical_log_cf(inc, zetas);
    for (const auto& e : lcf) {
        const cplx c = increment_cumulant(m, h, e.zeta);
        const double im = c.imag() + std::remainder(e.value.imag() - c.imag(), 2.0 * std::numbers::pi);
        rep.checks.push_back(check("Re log cf zeta=" + fmt(e.zeta), e.value.real(), c.real(), 3.0 * e.se_re));
        rep.checks.push_back(check("Im log cf zeta=" + fmt(e.zeta), im, c.imag(), 3.0 * e.se_im));
    }
    return rep;
}

inline AmbitFieldSpec isometry_spec() {
    Kernel k;
    k.h = [](double x, double t, double xi, double s) {
        return std::exp(-(t - s)) * (1.0 + 0.5 * std::cos(std::numbers::pi * (xi - x)));
    };
    return {0.0, k, AmbitSet(ProductAmbitSet{{0.5}, 1.5}), DeterministicVol{[](double, double) { return 1.0; }},
            LevySeed::gaussian(0.0, 1.0)};
}

inline SuiteReport ito_isometry(const ValidationOptions& o) {
    SuiteReport rep{"ito-isometry", "zero-mean Gaussian basis: E[(int h dL)^2] vs the discretised norm of h", o.master_seed};
    rep.replicates = reps(10000, o);
    const AmbitFieldSpec spec = isometry_spec();
    FieldGrid g;
    g.dx = g.dt = 0.02;
    const auto sq = run_replicates(rep.replicates, o.master_seed, 9, [&](std::size_t, RandomStream& rng) {
        const double y = simulate_field(spec, g, rng).at(0, 0);
        return y * y;
    });
    const Estimate e = mean_estimate(sq);
    rep.checks.push_back(check("E[Y^2]", e.value, discretized_isometry_norm(spec, 0.0, 0.0, g), 3.0 * e.se));
    return rep;
}

inline SuiteReport second_order_suite(const ValidationOptions& o) {
    SuiteReport rep{"second-order", "ambit field mean, variance and covariance with deterministic and OUTVF sigma",
                    o.master_seed};
    rep.replicates = reps(10000, o);
    AmbitFieldSpec spec{0.0, Kernel::exponential(1.0), AmbitSet(ProductAmbitSet{{0.5}, 1.0}),
                        DeterministicVol{[](double xi, double) { return 1.0 + 0.5 * std::cos(xi); }},
                        LevySeed::gaussian(0.5, 1.0)};
    FieldGrid g;
    g.xs = {0.0, 0.3};
    g.ts = {0.0, 0.5};
    g.dx = g.dt = 0.05;
    const std::vector<FieldPoint> pts{{0.0, 0.0}, {0.3, 0.5}};

    auto run = [&](const std::string& label, const SecondOrder& target, std::uint64_t tag) {
        const auto ys = run_replicates(rep.replicates, o.master_seed, tag, [&](std::size_t, RandomStream& rng) {
            const auto f = simulate_field(spec, g, rng);
            return std::vector<double>{f.at(0, 0), f.at(1, 1)};
        });
        const auto y1 = column(ys, 0), y2 = column(ys, 1);
        const Estimate m1 = mean_estimate(y1), v1 = covariance(y1, y1), v2 = covariance(y2, y2), c = covariance(y1, y2);
        rep.checks.push_back(check(label + " mean(0,0)", m1.value, target.mean[0], 3.0 * hypot_se(m1.se, target.mean_se[0])));
        rep.checks.push_back(check(label + " var(0,0)", v1.value, target.cov[0][0], 3.0 * hypot_se(v1.se, target.cov_se[0][0])));
        rep.checks.push_back(check(label + " var(0.3,0.5)", v2.value, target.cov[1][1], 3.0 * hypot_se(v2.se, target.cov_se[1][1])));
        rep.checks.push_back(check(label + " cov", c.value, target.cov[0][1], 3.0 * hypot_se(c.se, target.cov_se[0][1])));
    };
    run("deterministic", second_order(spec, pts), 10);

    spec.vol = OUTVFVol{1.0, 1.0, 1.0, LevySeed::compound_poisson(1.0, ExponentialMarks{1.0}),
                        LevySeed::compound_poisson(2.0, ExponentialMarks{1.0}), 0.05};
    run("outvf", second_order_mc(spec, pts, g, reps(4000, o), o.master_seed ^ 0x0f0f), 11);
    return rep;
}

inline SuiteReport semimartingale(const ValidationOptions& o) {
    SuiteReport rep{"semimartingale", "h(t; s) = exp(-(t - s)): decomposition error is first order in dt", o.master_seed};
    rep.replicates = std::max<std::size_t>(5, static_cast<std::size_t>(std::llround(20.0 * o.scale)));
    const SemimartingaleSpec spec{Kernel::exponential(1.0), 0.5, LevySeed::gaussian(0.0, 1.0)};
    const std::vector<double> dts{0.02, 0.01, 0.005};
    const auto errs = run_replicates(rep.replicates, o.master_seed, 12, [&](std::size_t, RandomStream& rng) {
        return semimartingale_refinement(spec, 1.0, dts, 0.1, rng);
    });
    std::vector<double> mean(dts.size(), 0.0);
    for (const auto& e : errs)
        for (std::size_t i = 0; i < e.size(); ++i) mean[i] += e[i] / static_cast<double>(errs.size());
    for (std::size_t i = 0; i + 1 < dts.size(); ++i) {
        rep.checks.push_back(check("order dt=" + fmt(dts[i]) + "->" + fmt(dts[i + 1]),
                                   std::log2(mean[i] / mean[i + 1]) / std::log2(dts[i] / dts[i + 1]), 1.0, 0.25));
    }
    return rep;
}

inline OUTVFVol outvf_example() {
    // Var(Y_1) = Var(X~_0) = 2 with kappa = lambda = mu = 1
    return {1.0, 1.0, 1.0, LevySeed::compound_poisson(1.0, ExponentialMarks{1.0}),
            LevySeed::compound_poisson(2.0, ExponentialMarks{1.0}), 0.01};
}

inline SuiteReport outvf_cov(const ValidationOptions& o) {
    SuiteReport rep{"outvf-cov", "OUTVF correlation vs exp(-|dt|) exp(-|dx|)", o.master_seed};
    rep.replicates = reps(10000, o);
    const OUTVFVol h = outvf_example();
    const std::vector<double> xs{0.5, 0.75, 1.0, 1.5};
    const std::vector<double> ts{0.0, 0.25, 0.5, 1.0};
    // (time index, location index) paired with the base point (0, 0.5)
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {2, 0}, {3, 2}, {1, 3}};
    const auto draws = run_replicates(rep.replicates, o.master_seed, 13, [&](std::size_t, RandomStream& rng) {
        const VolField f = simulate_vol(h, xs, ts, rng);
        std::vector<double> v{f.sigma2(0, 0)};
        for (const auto& [it, ix] : pairs) v.push_back(f.sigma2(it, ix));
        return v;
    });
    const auto base = column(draws, 0);
    const Estimate m = mean_estimate(base);
    rep.checks.push_back(check("mean tau_0(0.5)", m.value, outvf_mean(h, 0.5), 3.0 * m.se));
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double dt = ts[pairs[p].first], dx = xs[pairs[p].second] - xs[0];
        const Estimate r = correlation(base, column(draws, p + 1));
        rep.checks.push_back(check("cor dt=" + fmt(dt) + " dx=" + fmt(dx), r.value, std::exp(-dt - dx), 3.0 * r.se));
    }
    return rep;
}

inline SuiteReport subordination_identity(const ValidationOptions& o) {
    SuiteReport rep{"subordination-identity", "conditional CF of L(A ⋏ T) is exp(T(A) C(zeta; L'))", o.master_seed};
    rep.replicates = reps(10000, o);
    const Rectangle a{0.0, 1.0, 0.0, 1.0};
    const double d = 0.1;
    const std::vector<double> zetas{0.5, 1.0, 1.5};
    const std::vector<std::pair<std::string, LevySeed>> seeds{{"gaussian", LevySeed::gaussian(0.3, 1.0)},
                                                             {"poisson", LevySeed::poisson(1.0)}};
    std::uint64_t tag = 20;
    for (const auto& [label, seed] : seeds) {
        // deterministic tau
        const MetaTimeMap tau([](double x, double t) { return 0.5 + x * t; });
        const auto vols = meta_volumes(tau, a, d, d);
        double T = 0.0;
        for (double v : vols) T += v;
        const auto det = run_replicates(rep.replicates, o.master_seed, tag++, [&](std::size_t, RandomStream& rng) {
            return subordinate_cells(seed, vols, rng).value;
        });
        const auto cf = empirical_cf(det, zetas);
        for (const auto& e : cf) {
            const cplx target = std::exp(subordinated_cumulant(seed, T, e.zeta));
            const std::string z = label + " deterministic tau zeta=" + fmt(e.zeta);
            rep.checks.push_back(check(z + " Re", e.value.real(), target.real(), 3.0 * e.se_re));
            rep.checks.push_back(check(z + " Im", e.value.imag(), target.imag(), 3.0 * e.se_im));
        }

        // random tau = G (0.5 + x t), G ~ Gamma(2, rate 2); E[exp(i zeta L - T C)] = 1
        const auto rnd = run_replicates(rep.replicates, o.master_seed, tag++, [&](std::size_t, RandomStream& rng) {
            const double G = rng.gamma(2.0, 2.0);
            const MetaTimeMap tr([G](double x, double t) { return G * (0.5 + x * t); });
            const SubordinationDraw s = subordinate_cells(seed, meta_volumes(tr, a, d, d), rng);
            return std::vector<double>{s.value, s.meta_volume};
        });
        for (double z : zetas) {
            std::vector<double> re(rnd.size()), im(rnd.size());
            for (std::size_t i = 0; i < rnd.size(); ++i) {
                const cplx w = std::exp(kI * z * rnd[i][0] - subordinated_cumulant(seed, rnd[i][1], z));
                re[i] = w.real();
                im[i] = w.imag();
            }
            const Estimate er = mean_estimate(re), ei = mean_estimate(im);
            const std::string n = label + " random tau zeta=" + fmt(z);
            rep.checks.push_back(check(n + " Re E[e^{i zeta L - T C}]", er.value, 1.0, 3.0 * er.se));
            rep.checks.push_back(check(n + " Im E[e^{i zeta L - T C}]", ei.value, 0.0, 3.0 * ei.se));
        }

        // tau = 1 reduces to L(A)
        const auto ones = meta_volumes(MetaTimeMap::identity(), a, d, d);
        double T1 = 0.0;
        for (double v : ones) T1 += v;
        rep.checks.push_back(check(label + " identity T(A) = Leb(A)", T1, 1.0, 1e-12));
        const auto sub = run_replicates(rep.replicates, o.master_seed, tag++, [&](std::size_t, RandomStream& rng) {
            return subordinate_cells(seed, ones, rng).value;
        });
        const CellIncrementSampler plain(seed, 1.0);
        const auto direct = run_replicates(rep.replicates, o.master_seed, tag++,
                                           [&](std::size_t, RandomStream& rng) { return plain(rng); });
        const auto cs = empirical_cf(sub, zetas), cd = empirical_cf(direct, zetas);
        for (std::size_t i = 0; i < zetas.size(); ++i) {
            const std::string z = label + " identity tau zeta=" + fmt(zetas[i]);
            rep.checks.push_back(
                check(z + " Re", cs[i].value.real(), cd[i].value.real(), 3.0 * hypot_se(cs[i].se_re, cd[i].se_re)));
            rep.checks.push_back(
                check(z + " Im", cs[i].value.imag(), cd[i].value.imag(), 3.0 * hypot_se(cs[i].se_im, cd[i].se_im)));
        }
    }
    return rep;
}

/// sum_k w_k int_0^inf int_0^inf (e^{i zeta x e^{-theta_k u}} - 1) nu_L(dx) du for
/// a compound Poisson driver with exponential jumps, by nested quadrature.
inline cplx supou_cumulant_double_quadrature(double intensity, double jump_mean, const DiscreteMixing& gamma,
                                             double zeta) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const QuadratureOptions opt{1e-13, 1e-11, 4000};
    cplx total = 0.0;
    for (const auto& [theta, w] : gamma.atoms) {
        auto inner = [&](double u) -> cplx {
            const double scale = zeta * std::exp(-theta * u);
            auto f = [&](double x) -> cplx {
                return (std::exp(kI * scale * x) - 1.0) * intensity * std::exp(-x / jump_mean) / jump_mean;
            };
            return require_converged(integrate<cplx>(f, 0.0, inf, opt), "supOU inner integral");
        };
        total += w * require_converged(integrate<cplx>(inner, 0.0, inf, opt), "supOU outer integral");
    }
    return total;
}

inline SuiteReport supou_mixing(const ValidationOptions& o) {
    SuiteReport rep{"supou-mixing", "two-atom supOU: ACF and Lévy-mixed marginal cumulant", o.master_seed};
    rep.replicates = reps(10000, o);
    const LevySeed driver = LevySeed::compound_poisson(1.0, ExponentialMarks{1.0});
    const DiscreteMixing gamma{{{0.5, 1.0}, {2.0, 1.0}}};
    const std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0};
    const auto paths = run_replicates(rep.replicates, o.master_seed, 30, [&](std::size_t, RandomStream& rng) {
        return simulate_supou(driver, gamma, times, rng);
    });
    for (const auto& e : empirical_acf(paths, {1, 2, 4})) {
        const double h = 0.5 * static_cast<double>(e.lag);
        rep.checks.push_back(check("acf h=" + fmt(h), e.value, supou_acf(gamma, h), 3.0 * e.se));
    }
    const LevySeed mixed = supou_marginal_seed(driver, gamma);
    for (double z : {0.5, 1.0, 2.0}) {
        const cplx c = seed_cumulant(mixed, z);
        const cplx q = supou_cumulant_double_quadrature(1.0, 1.0, gamma, z);
        rep.checks.push_back(check("|C - quadrature| zeta=" + fmt(z), std::abs(c - q), 0.0, 1e-6));
    }
    return rep;
}

/// Composite Simpson rule on [lo, hi] with n (even) panels.
template <class F>
double simpson(F&& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline SuiteReport integrability(const ValidationOptions& o) {
    SuiteReport rep{"integrability", "Gaussian seed, bounded kernel: integrability integrals vs a fine-grid oracle",
                    o.master_seed};
    const double a = 0.4, b = 1.5, depth = 2.0, w = 0.5;
    Kernel k;
    k.h = [](double x, double t, double xi, double s) { return std::exp(-(t - s)) * (1.0 + (xi - x) * (xi - x)); };
    const AmbitFieldSpec spec{0.0, k, AmbitSet(ProductAmbitSet{{w}, depth}),
                              DeterministicVol{[](double, double) { return 1.0; }}, LevySeed::gaussian(a, b)};
    const IntegrabilityReport r = check_integrability(spec);
    auto grid = [&](auto g) {
        return simpson([&](double u) { return simpson([&](double xi) { return g(std::exp(-u) * (1.0 + xi * xi)); }, -w, w, 200); },
                       0.0, depth, 2000);
    };
    const double i1 = grid([&](double f) { return std::abs(a * f); });
    const double i2 = grid([&](double f) { return f * f * b; });
    rep.checks.push_back(check("int |V1(f)| dc", r.drift.value, i1, 1e-4 * std::abs(i1)));
    rep.checks.push_back(check("int f^2 b dc", r.gaussian.value, i2, 1e-4 * std::abs(i2)));
    rep.checks.push_back(check("int V2(f) dc", r.jumps.value, 0.0, 1e-12));
    rep.checks.push_back(check("verdict integrable", r.integrable() ? 1.0 : 0.0, 1.0, 0.0));
    return rep;
}

// ---------------------------------------------------------------------------

struct Suite {
    std::string name;
    std::string description;
    std::function<SuiteReport(const ValidationOptions&)> run;
};

inline const std::vector<Suite>& suites() {
    static const std::vector<Suite> all{
        {"trawl-acf", "exponential trawl ACF", trawl_acf},
        {"trawl-marginal", "trawl marginal variance and Poisson moments", trawl_marginal},
        {"shape-invariance", "equal-leb trawls share marginals", shape_invariance},
        {"dual-simulator", "grid vs exact compound Poisson trawl", dual_simulator},
        {"increment-cumulant", "trawl increment log-CF", increment_cumulant_suite},
        {"ito-isometry", "Itô isometry for a Gaussian basis", ito_isometry},
        {"second-order", "ambit field second-order structure", second_order_suite},
        {"semimartingale", "semimartingale decomposition convergence", semimartingale},
        {"outvf-cov", "OUTVF covariance", outvf_cov},
        {"subordination-identity", "extended subordination cumulant identity", subordination_identity},
        {"supou-mixing", "supOU via Lévy mixing", supou_mixing},
        {"integrability", "integrability checker vs fine grid", integrability},
    };
    return all;
}

class UnknownSuite : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline const Suite& find_suite(const std::string& name) {
    for (const auto& s : suites())
        if (s.name == name) return s;
    std::string known;
    for (const auto& s : suites()) known += (known.empty() ? "" : ", ") + s.name;
    throw UnknownSuite("unknown suite '" + name + "'; known suites: " + known);
}

}  // namespace validation

}  // namespace ambit
