// ambit: simulate scenarios, run validation suites, check integrability.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ambit/report_json.hpp"
#include "ambit/validation.hpp"
#include "scenario.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int fail_json(const std::string& kind, const std::string& message, nlohmann::json extra = nlohmann::json::object()) {
    extra["error"] = kind;
    extra["message"] = message;
    std::cerr << extra.dump(2) << "\n";
    return kExitUsage;
}

int cmd_simulate(const std::string& config) {
    const ambit::cli::Scenario sc = ambit::cli::load_scenario(config);
    const auto result = ambit::cli::run_scenario(sc);
    ambit::cli::write_outputs(sc, result);
    std::cout << ambit::cli::summary_json(sc, result).dump(2) << "\n";
    return 0;
}

int cmd_validate(const std::string& name, std::uint64_t seed, double scale, const std::string& out) {
    ambit::ValidationOptions opt{seed, scale};
    nlohmann::json reports = nlohmann::json::array();
    bool pass = true;
    auto run = [&](const ambit::validation::Suite& s) {
        const auto rep = s.run(opt);
        pass = pass && rep.pass();
        reports.push_back(ambit::to_json(rep));
        for (const auto& c : rep.checks) {
            std::fprintf(stderr, "%-24s %-4s %s (measured %.6g, target %.6g, tolerance %.3g)\n", rep.suite.c_str(),
                         c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.target, c.tolerance);
        }
    };
    if (name == "all") {
        for (const auto& s : ambit::validation::suites()) run(s);
    } else {
        run(ambit::validation::find_suite(name));
    }
    const nlohmann::json doc{{"schema_version", ambit::kReportSchemaVersion}, {"pass", pass}, {"suites", reports}};
    if (out.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream(out, std::ios::binary) << doc.dump(2) << "\n";
    }
    return pass ? 0 : kExitFail;
}

int cmd_integrability(const std::string& config) {
    const ambit::cli::Scenario sc = ambit::cli::load_scenario(config);
    if (sc.kind == ambit::cli::ScenarioKind::Volatility) {
        throw ambit::cli::ConfigError("model.type", "integrability needs a trawl or ambit-field model");
    }
    bool ok = false;
    std::cout << ambit::cli::integrability_json(sc, ok).dump(2) << "\n";
    return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ambit fields, trawl processes and tempo-spatial stochastic volatility"};
    app.require_subcommand(1);

    std::string config, suite, out;
    std::uint64_t seed = ambit::ValidationOptions{}.master_seed;
    double scale = 1.0;

    auto* simulate = app.add_subcommand("simulate", "simulate a scenario and write CSV plus a summary");
    simulate->add_option("config", config, "YAML scenario file")->required()->check(CLI::ExistingFile);

    auto* validate = app.add_subcommand("validate", "run a validation suite (or 'all')");
    validate->add_option("suite", suite, "suite name")->required();
    validate->add_option("--seed", seed, "master seed");
    validate->add_option("--scale", scale, "replicate count multiplier")->check(CLI::PositiveNumber);
    validate->add_option("--output", out, "write the JSON report here instead of stdout");

    auto* integ = app.add_subcommand("check-integrability", "evaluate the integrability conditions");
    integ->add_option("config", config, "YAML scenario file")->required()->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("list-suites", "list validation suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        return fail_json("usage", e.what());
    }

    try {
        if (simulate->parsed()) return cmd_simulate(config);
        if (validate->parsed()) return cmd_validate(suite, seed, scale, out);
        if (integ->parsed()) return cmd_integrability(config);
        if (list->parsed()) {
            for (const auto& s : ambit::validation::suites()) std::cout << s.name << "\t" << s.description << "\n";
            return 0;
        }
    } catch (const ambit::cli::ConfigError& e) {
        return fail_json("config", e.what(), {{"field", e.field()}});
    } catch (const ambit::validation::UnknownSuite& e) {
        nlohmann::json known = nlohmann::json::array();
        for (const auto& s : ambit::validation::suites()) known.push_back(s.name);
        return fail_json("unknown-suite", e.what(), {{"known_suites", known}});
    } catch (const ambit::ModelError& e) {
        return fail_json("model", e.what());
    } catch (const std::exception& e) {
        fail_json("runtime", e.what());
        return kExitFail;
    }
    return kExitUsage;
}
