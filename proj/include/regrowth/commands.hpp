#pragma once

#include <string>

#include "regrowth/config.hpp"

namespace regrowth {

// Batch pipeline commands. Each one validates the config, takes the output
// directory lock, writes its file set and returns a process exit code.
// Stages communicate only through files in the output directory.
int cmd_ingest(const RunConfig& cfg);
int cmd_estimate(const RunConfig& cfg);
int cmd_forecast(const RunConfig& cfg, const std::string& scenario_name);
int cmd_decompose(const RunConfig& cfg, const std::string& scenario_name);
int cmd_report(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);

} // namespace regrowth
