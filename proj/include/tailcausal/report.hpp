#pragma once

#include <string>
#include <string_view>

namespace tailcausal {

inline constexpr std::string_view kReportFormat = "tailcausal-report/1";
inline constexpr std::string_view kVersion = "0.1.0";

/// Parses a JSON report and re-emits it canonically: sorted keys, two-space
/// indent, floating values rounded to 12 significant digits, non-finite
/// values as null. Canonical text is a fixed point of this function.
std::string canonical_report(std::string_view json_text);

}  // namespace tailcausal
