#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "revend/criteria.hpp"
#include "revend/stochastic.hpp"

namespace revend {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct ReportDocument {
    int schema_version = kSchemaVersion;
    std::string tool_version = kToolVersion;
    ClassifierConfig config;
    std::vector<ConformalReport> reports;
    // Wall-clock seconds per end; absent for reproducible output.
    std::optional<std::map<std::string, double>> timings;

    bool operator==(const ReportDocument&) const = default;
};

nlohmann::json to_json(const ClassifierConfig& cfg);
ClassifierConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DivergenceVerdict& v);
DivergenceVerdict divergence_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConformalReport& r);
ConformalReport conformal_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ReportDocument& doc);
/// Throws ParseError on schema violations.
ReportDocument report_from_json(const nlohmann::json& j);

std::string serialize(const ReportDocument& doc);
ReportDocument deserialize(const std::string& text);

nlohmann::json to_json(const HitStats& stats);
nlohmann::json to_json(const EscapeProbe& probe);

/// One row per end: name, kappa, verdict, integral kinds and values, fired criteria.
std::string to_csv(const std::vector<ConformalReport>& reports);

}  // namespace revend
