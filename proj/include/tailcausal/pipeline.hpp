#pragma once

#include "tailcausal/config.hpp"

#include <string>

namespace tailcausal {

/// Runs the configured method and returns the canonical JSON report. The
/// report is also written to config.output when set, and side artifacts to
/// config.data_out / config.matrix_out. Identical config and seed give a
/// byte-identical report.
std::string run(const RunConfig& config);

}  // namespace tailcausal
