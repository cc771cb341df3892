#include <gtest/gtest.h>

#include <string>

#include <yaml-cpp/yaml.h>

#include "scenario.hpp"

using namespace ambit;
using namespace ambit::cli;

namespace {

const char* kTrawl = R"(
model:
  type: trawl
  trawl: {type: exponential, lambda: 0.7}
  seed: {type: poisson, intensity: 2.0}
  method: exact
grid:
  times: [0.0, 0.5, 1.0]
mc:
  replicates: 50
  master_seed: 3
outputs:
  directory: out/t
  path_replicates: 2
)";

std::string config_error_field(const std::string& yaml) {
    try {
        parse_scenario(YAML::Load(yaml));
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<none>";
}

}  // namespace

TEST(Config, ParsesTrawlScenario) {
    const auto sc = parse_scenario(YAML::Load(kTrawl));
    EXPECT_EQ(sc.kind, ScenarioKind::Trawl);
    EXPECT_TRUE(sc.exact);
    EXPECT_EQ(sc.replicates, 50u);
    EXPECT_EQ(sc.times.size(), 3u);
    EXPECT_NEAR(sc.trawl->trawl.leb(), 1.0 / 0.7, 1e-12);
}

TEST(Config, RangeGrid) {
    std::string y = kTrawl;
    y.replace(y.find("[0.0, 0.5, 1.0]"), 15, "{start: 0.0, stop: 1.0, step: 0.25}");
    EXPECT_EQ(parse_scenario(YAML::Load(y)).times.size(), 5u);
}

TEST(Config, ErrorsNameTheField) {
    std::string y = kTrawl;
    y.replace(y.find("intensity: 2.0"), 14, "intensity: -2.0");
    EXPECT_EQ(config_error_field(y), "model.seed.intensity");

    y = kTrawl;
    y.replace(y.find("master_seed"), 11, "master_sed");
    EXPECT_EQ(config_error_field(y), "mc.master_sed");

    y = kTrawl;
    y.replace(y.find("lambda: 0.7"), 11, "lambda: abc");
    EXPECT_EQ(config_error_field(y), "model.trawl.lambda");
}

TEST(Config, ExactNeedsCompoundPoisson) {
    std::string y = kTrawl;
    y.replace(y.find("{type: poisson, intensity: 2.0}"), 31, "{type: gamma, alpha: 1.0}");
    EXPECT_EQ(config_error_field(y), "model.method");
}

TEST(Run, CsvHeaderAndDeterminism) {
    const auto sc = parse_scenario(YAML::Load(kTrawl));
    const auto a = run_scenario(sc);
    const auto b = run_scenario(sc);
    const auto text = csv_text(a);
    EXPECT_EQ(text.substr(0, text.find('\n')), "replicate,t,Y");
    EXPECT_EQ(a.csv_rows.size(), 2u * 3u);
    EXPECT_EQ(text, csv_text(b));
    EXPECT_EQ(summary_json(sc, a).dump(), summary_json(sc, b).dump());
}

TEST(Run, AnalyticOnlyReport) {
    std::string y = kTrawl;
    y.replace(y.find("replicates: 50"), 14, "replicates: 0");
    const auto sc = parse_scenario(YAML::Load(y));
    const auto r = run_scenario(sc);
    EXPECT_TRUE(r.csv_rows.empty());
    EXPECT_EQ(csv_text(r), "replicate,t,Y\n");
    const auto j = summary_json(sc, r);
    EXPECT_TRUE(j["analytic_only"].get<bool>());
    ASSERT_FALSE(j["rows"].empty());
    for (const auto& row : j["rows"]) EXPECT_TRUE(row["empirical"].is_null());
    EXPECT_NEAR(j["rows"][1]["analytic"].get<double>(), 2.0 / 0.7, 1e-12);
}
