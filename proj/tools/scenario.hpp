#pragma once

// YAML scenario configs for the command-line tool: parsing with field-level
// validation, simulation, CSV output and analytic-vs-empirical summaries.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "ambit/ambit_field.hpp"
#include "ambit/estimation.hpp"
#include "ambit/random.hpp"
#include "ambit/trawl.hpp"
#include "ambit/volatility.hpp"

namespace ambit::cli {

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr int kCsvSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class ScenarioKind { Trawl, Field, Volatility };

struct Scenario {
    ScenarioKind kind = ScenarioKind::Trawl;
    std::optional<TrawlModel> trawl;
    bool exact = false;  ///< exact point simulation for trawls
    std::optional<AmbitFieldSpec> field;
    std::optional<VolatilityFieldHandle> vol;
    std::vector<double> times{0.0};
    std::vector<double> xs{0.0};
    double dx = 0.01;
    double dt = 0.01;
    double tail_eps = 1e-4;
    double max_lookback = 1e4;
    std::size_t replicates = 1000;
    std::uint64_t master_seed = 1;
    std::vector<std::size_t> acf_lags{1};
    std::vector<double> zetas{0.5, 1.0};
    std::size_t vol_draws = 2000;
    std::string directory = "out";
    std::string paths_file = "paths.csv";
    std::string summary_file = "summary.json";
    std::optional<std::size_t> path_replicates;  ///< replicates written to CSV
};

namespace detail {

struct Node {
    YAML::Node node;
    std::string path;

    Node child(const std::string& key) const { return {node[key], path.empty() ? key : path + "." + key}; }
    bool has(const std::string& key) const { return node.IsMap() && node[key].IsDefined() && !node[key].IsNull(); }

    void require_map() const {
        if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
    }
    void allow(std::initializer_list<const char*> keys) const {
        require_map();
        std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& kv : node) {
            const auto k = kv.first.as<std::string>();
            if (!ok.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown field");
        }
    }

    template <class T>
    T as() const {
        if (!node.IsDefined() || node.IsNull()) throw ConfigError(path, "required field is missing");
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(path, "has the wrong type");
        }
    }
    template <class T>
    T get(const std::string& key) const {
        return child(key).as<T>();
    }
    template <class T>
    T get(const std::string& key, T fallback) const {
        return has(key) ? child(key).as<T>() : fallback;
    }
    double positive(const std::string& key) const {
        const double v = get<double>(key);
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(child(key).path, "must be positive");
        return v;
    }
    double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }
    double nonnegative(const std::string& key, double fallback) const {
        const double v = get<double>(key, fallback);
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(child(key).path, "must be nonnegative");
        return v;
    }
};

inline MarkDistribution parse_marks(const Node& n) {
    const auto type = n.get<std::string>("type");
    if (type == "constant") {
        n.allow({"type", "value"});
        return ConstantMarks{n.get<double>("value")};
    }
    if (type == "exponential") {
        n.allow({"type", "mean"});
        return ExponentialMarks{n.positive("mean")};
    }
    if (type == "normal") {
        n.allow({"type", "mean", "sd"});
        return NormalMarks{n.get<double>("mean", 0.0), n.positive("sd")};
    }
    throw ConfigError(n.child("type").path, "unknown mark distribution '" + type + "' (constant, exponential, normal)");
}

inline LevySeed parse_seed(const Node& n) {
    const auto type = n.get<std::string>("type");
    if (type == "gaussian") {
        n.allow({"type", "mean", "variance"});
        return LevySeed::gaussian(n.get<double>("mean", 0.0), n.nonnegative("variance", 1.0));
    }
    if (type == "poisson") {
        n.allow({"type", "intensity"});
        return LevySeed::poisson(n.positive("intensity"));
    }
    if (type == "gamma") {
        n.allow({"type", "alpha"});
        return LevySeed::gamma(n.positive("alpha"));
    }
    if (type == "inverse-gaussian") {
        n.allow({"type", "gamma"});
        return LevySeed::inverse_gaussian(n.positive("gamma"));
    }
    if (type == "compound-poisson") {
        n.allow({"type", "intensity", "marks", "drift"});
        return LevySeed::compound_poisson(n.positive("intensity"), parse_marks(n.child("marks")),
                                          n.get<double>("drift", 0.0));
    }
    throw ConfigError(n.child("type").path,
                      "unknown seed '" + type + "' (gaussian, poisson, gamma, inverse-gaussian, compound-poisson)");
}

inline TrawlSet parse_trawl(const Node& n) {
    const auto type = n.get<std::string>("type");
    try {
        if (type == "exponential") {
            n.allow({"type", "lambda"});
            return TrawlSet::exponential(n.positive("lambda"));
        }
        if (type == "step") {
            n.allow({"type", "width", "height"});
            return TrawlSet::step(n.positive("width"), n.positive("height", 1.0));
        }
        if (type == "tabulated") {
            n.allow({"type", "knots"});
            const Node k = n.child("knots");
            if (!k.node.IsSequence() || k.node.size() < 2) throw ConfigError(k.path, "needs at least two [u, d] knots");
            TabulatedDepth d;
            for (std::size_t i = 0; i < k.node.size(); ++i) {
                const Node p{k.node[i], k.path + "[" + std::to_string(i) + "]"};
                if (!p.node.IsSequence() || p.node.size() != 2) throw ConfigError(p.path, "expected [u, d]");
                d.knots.push_back({p.node[0].as<double>(), p.node[1].as<double>()});
            }
            return TrawlSet(d);
        }
    } catch (const ModelError& e) {
        throw ConfigError(n.path, e.what());
    }
    throw ConfigError(n.child("type").path, "unknown trawl '" + type + "' (exponential, step, tabulated)");
}

inline AmbitSet parse_ambit_set(const Node& n) {
    const auto type = n.get<std::string>("type");
    if (type == "product") {
        n.allow({"type", "half_width", "depth"});
        return AmbitSet(ProductAmbitSet{{n.nonnegative("half_width", 0.5)}, n.positive("depth")});
    }
    return AmbitSet(parse_trawl(n));
}

inline Kernel parse_kernel(const Node& n) {
    const auto type = n.get<std::string>("type");
    if (type == "constant") {
        n.allow({"type", "value"});
        return Kernel::constant(n.get<double>("value", 1.0));
    }
    if (type == "exponential") {
        n.allow({"type", "lambda"});
        return Kernel::exponential(n.positive("lambda"));
    }
    if (type == "exp-gaussian") {
        // e^{-lambda (t - s)} e^{-(xi - x)^2 / (2 ell^2)}
        n.allow({"type", "lambda", "ell"});
        const double lambda = n.positive("lambda"), ell = n.positive("ell");
        Kernel k;
        k.h = [lambda, ell](double x, double t, double xi, double s) {
            return std::exp(-lambda * (t - s) - (xi - x) * (xi - x) / (2.0 * ell * ell));
        };
        k.dt = [lambda, ell](double x, double t, double xi, double s) {
            return -lambda * std::exp(-lambda * (t - s) - (xi - x) * (xi - x) / (2.0 * ell * ell));
        };
        return k;
    }
    throw ConfigError(n.child("type").path, "unknown kernel '" + type + "' (constant, exponential, exp-gaussian)");
}

inline VolatilityFieldHandle parse_vol(const Node& n) {
    const auto type = n.get<std::string>("type");
    if (type == "constant") {
        n.allow({"type", "value"});
        const double v = n.nonnegative("value", 1.0);
        return DeterministicVol{[v](double, double) { return v; }};
    }
    if (type == "outvf") {
        n.allow({"type", "lambda", "mu", "kappa", "y_driver", "x_driver", "slab_width"});
        OUTVFVol v{n.positive("lambda"), n.positive("mu"), n.positive("kappa"), parse_seed(n.child("y_driver")),
                   parse_seed(n.child("x_driver")), n.positive("slab_width", 0.01)};
        if (!v.y_driver.is_subordinator()) throw ConfigError(n.child("y_driver").path, "must be a subordinator");
        if (!v.x_driver.is_subordinator()) throw ConfigError(n.child("x_driver").path, "must be a subordinator");
        return v;
    }
    if (type == "ou") {
        n.allow({"type", "rate", "driver"});
        TemporalOUVol v{n.positive("rate"), parse_seed(n.child("driver"))};
        if (!v.driver.is_subordinator()) throw ConfigError(n.child("driver").path, "must be a subordinator");
        return v;
    }
    throw ConfigError(n.child("type").path, "unknown volatility '" + type + "' (constant, outvf, ou)");
}

inline std::vector<double> parse_points(const Node& n, const char* what) {
    std::vector<double> out;
    if (n.node.IsSequence()) {
        for (const auto& v : n.node) out.push_back(v.as<double>());
    } else if (n.node.IsMap()) {
        n.allow({"start", "stop", "step"});
        const double a = n.get<double>("start", 0.0), b = n.get<double>("stop"), h = n.positive("step");
        if (b < a) throw ConfigError(n.child("stop").path, "must not precede start");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
        for (std::size_t i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * h);
    } else {
        throw ConfigError(n.path, std::string("expected a list of ") + what + " or {start, stop, step}");
    }
    if (out.empty()) throw ConfigError(n.path, std::string("needs at least one of the ") + what);
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i] > out[i - 1])) throw ConfigError(n.path, std::string(what) + " must be strictly increasing");
    }
    return out;
}

}  // namespace detail

inline Scenario parse_scenario(const YAML::Node& root) {
    using detail::Node;
    const Node doc{root, ""};
    doc.allow({"model", "grid", "mc", "outputs"});
    Scenario sc;

    const Node model = doc.child("model");
    model.require_map();
    const auto type = model.get<std::string>("type");
    if (type == "trawl") {
        model.allow({"type", "trawl", "seed", "method"});
        sc.kind = ScenarioKind::Trawl;
        sc.trawl = TrawlModel{detail::parse_trawl(model.child("trawl")), detail::parse_seed(model.child("seed"))};
        const auto method = model.get<std::string>("method", "grid");
        if (method != "grid" && method != "exact") throw ConfigError(model.child("method").path, "must be grid or exact");
        sc.exact = method == "exact";
        if (sc.exact && (!sc.trawl->seed.is_finite_activity() || sc.trawl->seed.b() != 0.0)) {
            throw ConfigError(model.child("method").path, "exact simulation needs a compound Poisson seed");
        }
    } else if (type == "ambit-field") {
        model.allow({"type", "mu", "ambit_set", "kernel", "volatility", "seed"});
        sc.kind = ScenarioKind::Field;
        sc.field = AmbitFieldSpec{model.get<double>("mu", 0.0), detail::parse_kernel(model.child("kernel")),
                                  detail::parse_ambit_set(model.child("ambit_set")),
                                  model.has("volatility") ? detail::parse_vol(model.child("volatility"))
                                                          : VolatilityFieldHandle(DeterministicVol{[](double, double) { return 1.0; }}),
                                  detail::parse_seed(model.child("seed"))};
        sc.dx = sc.dt = 0.05;
        sc.max_lookback = 1e3;
    } else if (type == "volatility") {
        model.allow({"type", "volatility"});
        sc.kind = ScenarioKind::Volatility;
        sc.vol = detail::parse_vol(model.child("volatility"));
        if (!std::holds_alternative<OUTVFVol>(*sc.vol)) {
            throw ConfigError(model.child("volatility").child("type").path, "volatility scenarios support outvf");
        }
    } else {
        throw ConfigError(model.child("type").path, "unknown model '" + type + "' (trawl, ambit-field, volatility)");
    }

    if (doc.has("grid")) {
        const Node g = doc.child("grid");
        g.allow({"times", "locations", "dx", "dt", "tail_eps", "max_lookback"});
        if (g.has("times")) sc.times = detail::parse_points(g.child("times"), "times");
        if (g.has("locations")) sc.xs = detail::parse_points(g.child("locations"), "locations");
        sc.dx = g.positive("dx", sc.dx);
        sc.dt = g.positive("dt", sc.dt);
        sc.tail_eps = g.positive("tail_eps", sc.tail_eps);
        sc.max_lookback = g.positive("max_lookback", sc.max_lookback);
    }
    if (sc.kind == ScenarioKind::Trawl && sc.xs.size() != 1) {
        throw ConfigError("grid.locations", "trawl scenarios are purely temporal");
    }
    if (sc.kind == ScenarioKind::Volatility) {
        const double w = std::get<OUTVFVol>(*sc.vol).slab_width;
        for (double x : sc.xs) {
            if (x < 0.0 || std::abs(x / w - std::round(x / w)) > 1e-6) {
                throw ConfigError("grid.locations", "OUTVF locations must be nonnegative multiples of slab_width");
            }
        }
    }

    if (doc.has("mc")) {
        const Node mc = doc.child("mc");
        mc.allow({"replicates", "master_seed", "acf_lags", "zetas", "vol_draws"});
        const long r = mc.get<long>("replicates", 1000);
        if (r < 0) throw ConfigError(mc.child("replicates").path, "must be nonnegative");
        sc.replicates = static_cast<std::size_t>(r);
        sc.master_seed = mc.get<std::uint64_t>("master_seed", sc.master_seed);
        if (mc.has("acf_lags")) {
            sc.acf_lags.clear();
            for (const auto& v : mc.child("acf_lags").node) {
                const long l = v.as<long>();
                if (l <= 0) throw ConfigError(mc.child("acf_lags").path, "lags must be positive step counts");
                sc.acf_lags.push_back(static_cast<std::size_t>(l));
            }
        }
        if (mc.has("zetas")) sc.zetas = mc.get<std::vector<double>>("zetas");
        sc.vol_draws = static_cast<std::size_t>(mc.positive("vol_draws", static_cast<double>(sc.vol_draws)));
    }
    if (doc.has("outputs")) {
        const Node o = doc.child("outputs");
        o.allow({"directory", "paths", "summary", "path_replicates"});
        sc.directory = o.get<std::string>("directory", sc.directory);
        sc.paths_file = o.get<std::string>("paths", sc.paths_file);
        sc.summary_file = o.get<std::string>("summary", sc.summary_file);
        if (o.has("path_replicates")) sc.path_replicates = o.get<std::size_t>("path_replicates");
    }
    if (const char* env = std::getenv("AMBIT_OUTPUT_DIR"); env && *env) sc.directory = env;
    return sc;
}

inline Scenario load_scenario(const std::string& file) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(file);
    } catch (const YAML::Exception& e) {
        throw ConfigError(file, std::string("cannot parse: ") + e.what());
    }
    try {
        return parse_scenario(root);
    } catch (const ModelError& e) {
        throw ConfigError("model", e.what());
    }
}

// ---------------------------------------------------------------------------
// Simulation and summaries
// ---------------------------------------------------------------------------

struct SummaryRow {
    std::string statistic;
    double analytic = 0.0;
    std::optional<double> empirical;
    std::optional<double> se;
};

inline nlohmann::json row_json(const SummaryRow& r) {
    nlohmann::json j{{"statistic", r.statistic}, {"analytic", r.analytic}};
    j["empirical"] = r.empirical ? nlohmann::json(*r.empirical) : nlohmann::json(nullptr);
    j["se"] = r.se ? nlohmann::json(*r.se) : nlohmann::json(nullptr);
    if (r.empirical && r.se && *r.se > 0.0) {
        j["z"] = (*r.empirical - r.analytic) / *r.se;
    } else {
        j["z"] = nullptr;
    }
    return j;
}

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline bool regular(const std::vector<double>& t) {
    if (t.size() < 2) return false;
    const double h = t[1] - t[0];
    for (std::size_t i = 2; i < t.size(); ++i)
        if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * std::max(1.0, h)) return false;
    return true;
}

inline std::vector<FieldPoint> grid_points(const Scenario& sc) {
    std::vector<FieldPoint> pts;
    for (double t : sc.times)
        for (double x : sc.xs) pts.push_back({x, t});
    return pts;
}

inline void trawl_rows(const Scenario& sc, const std::vector<std::vector<double>>& paths, std::vector<SummaryRow>& rows) {
    const TrawlModel& m = *sc.trawl;
    const bool sampled = !paths.empty();
    std::vector<double> y0;
    for (const auto& p : paths) y0.push_back(p[0]);
    std::optional<EmpiricalSummary> s;
    if (y0.size() >= 5) s = summarize(y0);
    for (int k = 1; k <= 4; ++k) {
        SummaryRow r{"k" + std::to_string(k), marginal_cumulant_order(m, k)};
        if (s) {
            r.empirical = s->k[k - 1];
            if (std::isfinite(s->se[k - 1])) r.se = s->se[k - 1];
        }
        rows.push_back(r);
    }
    std::vector<CfEstimate> lcf;
    if (sampled && y0.size() >= 2) lcf = empirical_log_cf(y0, sc.zetas);
    for (std::size_t i = 0; i < sc.zetas.size(); ++i) {
        const double z = sc.zetas[i];
        const cplx c = marginal_cumulant(m, z);
        SummaryRow re{"Re C(zeta=" + num(z) + ")", c.real()}, im{"Im C(zeta=" + num(z) + ")", c.imag()};
        if (!lcf.empty()) {
            re.empirical = lcf[i].value.real();
            re.se = lcf[i].se_re;
            im.empirical = c.imag() + std::remainder(lcf[i].value.imag() - c.imag(), 2.0 * std::numbers::pi);
            im.se = lcf[i].se_im;
        }
        rows.push_back(re);
        rows.push_back(im);
    }
    if (!regular(sc.times)) return;
    const double h = sc.times[1] - sc.times[0];
    std::vector<std::size_t> lags;
    for (std::size_t l : sc.acf_lags)
        if (l < sc.times.size()) lags.push_back(l);
    std::vector<AcfEstimate> acfs;
    if (paths.size() >= 2 && !lags.empty()) acfs = empirical_acf(paths, lags);
    for (std::size_t i = 0; i < lags.size(); ++i) {
        SummaryRow r{"acf(h=" + num(static_cast<double>(lags[i]) * h) + ")", acf(m, static_cast<double>(lags[i]) * h)};
        if (!acfs.empty()) {
            r.empirical = acfs[i].value;
            r.se = acfs[i].se;
        }
        rows.push_back(r);
    }
    std::vector<double> inc;
    for (const auto& p : paths) inc.push_back(p[1] - p[0]);
    std::vector<CfEstimate> icf;
    if (inc.size() >= 2) icf = empirical_log_cf(inc, sc.zetas);
    for (std::size_t i = 0; i < sc.zetas.size(); ++i) {
        const double z = sc.zetas[i];
        const cplx c = increment_cumulant(m, h, z);
        const std::string tag = "(h=" + num(h) + ", zeta=" + num(z) + ")";
        SummaryRow re{"Re C_increment" + tag, c.real()}, im{"Im C_increment" + tag, c.imag()};
        if (!icf.empty()) {
            re.empirical = icf[i].value.real();
            re.se = icf[i].se_re;
            im.empirical = c.imag() + std::remainder(icf[i].value.imag() - c.imag(), 2.0 * std::numbers::pi);
            im.se = icf[i].se_im;
        }
        rows.push_back(re);
        rows.push_back(im);
    }
}

/// Mean and variance at every grid point and covariance of the first point
/// with the others, from per-replicate values at the points.
inline void moment_rows(const std::vector<FieldPoint>& pts, const std::vector<std::vector<double>>& vals,
                        const std::vector<double>& mean, const std::vector<double>& mean_se,
                        const std::vector<double>& var, const std::vector<double>& cov0,
                        const std::vector<double>& target_var_se, const std::vector<double>& target_cov_se,
                        std::vector<SummaryRow>& rows) {
    auto label = [&](std::size_t i) { return "(t=" + num(pts[i].t) + ", x=" + num(pts[i].x) + ")"; };
    const bool sampled = vals.size() >= 2;
    auto col = [&](std::size_t i) {
        std::vector<double> c;
        for (const auto& v : vals) c.push_back(v[i]);
        return c;
    };
    auto combine = [](double a, double b) { return std::sqrt(a * a + b * b); };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        SummaryRow m{"mean" + label(i), mean[i]}, v{"variance" + label(i), var[i]};
        if (sampled) {
            const auto c = col(i);
            const Estimate em = mean_estimate(c), ev = covariance(c, c);
            m.empirical = em.value;
            m.se = combine(em.se, mean_se[i]);
            v.empirical = ev.value;
            v.se = combine(ev.se, target_var_se[i]);
        }
        rows.push_back(m);
        rows.push_back(v);
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        SummaryRow c{"covariance" + label(0) + label(i), cov0[i]};
        if (sampled) {
            const Estimate e = covariance(col(0), col(i));
            c.empirical = e.value;
            c.se = combine(e.se, target_cov_se[i]);
        }
        rows.push_back(c);
    }
}

}  // namespace detail

struct SimulationResult {
    std::vector<std::string> csv_header;
    std::vector<std::vector<double>> csv_rows;
    std::vector<SummaryRow> summary;
};

inline SimulationResult run_scenario(const Scenario& sc) {
    SimulationResult res;
    const std::size_t n = sc.replicates;
    const std::size_t shown = std::min(n, sc.path_replicates.value_or(n));
    if (sc.kind == ScenarioKind::Trawl) {
        const GridOptions opt{sc.dx, sc.dt, sc.tail_eps, sc.max_lookback};
        const auto paths = run_replicates(n, sc.master_seed, 0, [&](std::size_t, RandomStream& rng) {
            return sc.exact ? simulate_exact_cp(*sc.trawl, sc.times, rng).values
                            : simulate_grid(*sc.trawl, sc.times, opt, rng).values;
        });
        res.csv_header = {"replicate", "t", "Y"};
        for (std::size_t r = 0; r < shown; ++r)
            for (std::size_t i = 0; i < sc.times.size(); ++i)
                res.csv_rows.push_back({static_cast<double>(r), sc.times[i], paths[r][i]});
        detail::trawl_rows(sc, paths, res.summary);
        return res;
    }

    const auto pts = detail::grid_points(sc);
    const std::size_t np = pts.size();
    std::vector<std::vector<double>> vals;
    std::vector<double> mean(np), mean_se(np, 0.0), var(np), cov0(np), var_se(np, 0.0), cov_se(np, 0.0);
    if (sc.kind == ScenarioKind::Field) {
        FieldGrid g{sc.xs, sc.times, sc.dx, sc.dt, sc.tail_eps, sc.max_lookback};
        vals = run_replicates(n, sc.master_seed, 0, [&](std::size_t, RandomStream& rng) {
            return simulate_field(*sc.field, g, rng).values;
        });
        res.csv_header = {"replicate", "t", "x", "Y"};
        // lattice-consistent targets; volatility moments by Monte Carlo when sigma is random
        const SecondOrder so = second_order_mc(*sc.field, pts, g, sc.vol_draws, sc.master_seed ^ 0x5eedULL);
        for (std::size_t i = 0; i < np; ++i) {
            mean[i] = so.mean[i];
            mean_se[i] = so.mean_se[i];
            var[i] = so.cov[i][i];
            var_se[i] = so.cov_se[i][i];
            cov0[i] = so.cov[0][i];
            cov_se[i] = so.cov_se[0][i];
        }
    } else {
        const auto& h = std::get<OUTVFVol>(*sc.vol);
        vals = run_replicates(n, sc.master_seed, 0, [&](std::size_t, RandomStream& rng) {
            const VolField f = simulate_vol(h, sc.xs, sc.times, rng);
            std::vector<double> v;
            for (std::size_t it = 0; it < sc.times.size(); ++it)
                for (std::size_t ix = 0; ix < sc.xs.size(); ++ix) v.push_back(f.sigma2(it, ix));
            return v;
        });
        res.csv_header = {"replicate", "t", "x", "sigma2"};
        for (std::size_t i = 0; i < np; ++i) {
            mean[i] = outvf_mean(h, pts[i].x);
            var[i] = outvf_covariance(h, pts[i].t, pts[i].x, pts[i].t, pts[i].x);
            cov0[i] = outvf_covariance(h, pts[0].t, pts[0].x, pts[i].t, pts[i].x);
        }
    }
    for (std::size_t r = 0; r < shown; ++r)
        for (std::size_t i = 0; i < np; ++i) res.csv_rows.push_back({static_cast<double>(r), pts[i].t, pts[i].x, vals[r][i]});
    detail::moment_rows(pts, vals, mean, mean_se, var, cov0, var_se, cov_se, res.summary);
    return res;
}

inline std::string kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Trawl: return "trawl";
        case ScenarioKind::Field: return "ambit-field";
        case ScenarioKind::Volatility: return "volatility";
    }
    return "";
}

inline std::string csv_text(const SimulationResult& r) {
    std::string out;
    for (std::size_t i = 0; i < r.csv_header.size(); ++i) out += (i ? "," : "") + r.csv_header[i];
    out += "\n";
    for (const auto& row : r.csv_rows) {
        out += std::to_string(static_cast<long long>(row[0]));
        for (std::size_t i = 1; i < row.size(); ++i) out += "," + detail::num(row[i]);
        out += "\n";
    }
    return out;
}

inline nlohmann::json summary_json(const Scenario& sc, const SimulationResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : r.summary) rows.push_back(row_json(s));
    return {{"schema_version", kSummarySchemaVersion},
            {"csv_schema_version", kCsvSchemaVersion},
            {"model", kind_name(sc.kind)},
            {"master_seed", sc.master_seed},
            {"replicates", sc.replicates},
            {"analytic_only", sc.replicates == 0},
            {"paths", sc.paths_file},
            {"rows", std::move(rows)}};
}

/// Writes the CSV and summary into the scenario's output directory.
inline void write_outputs(const Scenario& sc, const SimulationResult& r) {
    namespace fs = std::filesystem;
    fs::create_directories(sc.directory);
    std::ofstream(fs::path(sc.directory) / sc.paths_file, std::ios::binary) << csv_text(r);
    std::ofstream(fs::path(sc.directory) / sc.summary_file, std::ios::binary) << summary_json(sc, r).dump(2) << "\n";
}

/// Integrability report at (x, t) = (0, 0); trawls use h = 1 on the trawl set.
inline nlohmann::json integrability_json(const Scenario& sc, bool& integrable) {
    AmbitFieldSpec spec = sc.field ? *sc.field
                                   : AmbitFieldSpec{0.0, Kernel::constant(1.0), AmbitSet(sc.trawl->trawl),
                                                    DeterministicVol{[](double, double) { return 1.0; }}, sc.trawl->seed};
    const IntegrabilityReport rep = check_integrability(spec);
    integrable = rep.integrable();
    auto one = [](const IntegralVerdict& v) {
        nlohmann::json j{{"integral", v.name}, {"value", v.value}, {"error", v.error}, {"finite", v.finite}};
        if (!v.finite) j["dominant_region"] = {{"t_lo", v.region_lo}, {"t_hi", v.region_hi}};
        return j;
    };
    return {{"schema_version", kSummarySchemaVersion},
            {"integrable", integrable},
            {"integrals", {one(rep.drift), one(rep.gaussian), one(rep.jumps)}}};
}

}  // namespace ambit::cli
