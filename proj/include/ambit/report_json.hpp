#pragma once

// JSON form of validation reports. Needs nlohmann_json.

#include <string>

#include <nlohmann/json.hpp>

#include "ambit/validation.hpp"

namespace ambit {

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json to_json(const SuiteReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"target", c.target},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    return {{"schema_version", kReportSchemaVersion},
            {"suite", r.suite},
            {"description", r.description},
            {"master_seed", r.master_seed},
            {"replicates", r.replicates},
            {"pass", r.pass()},
            {"checks", std::move(checks)}};
}

inline std::string serialize(const SuiteReport& r) { return to_json(r).dump(2); }

}  // namespace ambit
