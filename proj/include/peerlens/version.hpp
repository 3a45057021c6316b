#pragma once

#include <string_view>

namespace peerlens {

inline constexpr std::string_view kEngineVersion = "0.3.0";
inline constexpr std::string_view kReportSchemaVersion = "report-v1";
inline constexpr std::string_view kFeatureSchemaVersion = "features-v1";
inline constexpr int kModelFormatVersion = 1;

}  // namespace peerlens
