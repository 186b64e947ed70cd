#pragma once

#include <string>
#include <vector>

#include "lbsim/compare.hpp"
#include "lbsim/simulation.hpp"

namespace lbsim {

// Stable text renderings of a run. CSV headers and JSON key order never
// change between runs with the same build, so outputs diff cleanly.

std::string responses_csv(const RunResult& result, const SimulationConfig& cfg);
std::string services_csv(const RunResult& result, const SimulationConfig& cfg);
std::string loading_csv(const RunResult& result);
std::string arrivals_csv(const RunResult& result, const SimulationConfig& cfg);
std::string assignments_csv(const RunResult& result, const SimulationConfig& cfg);

std::string summary_json(const RunResult& result, const SimulationConfig& cfg);
std::string compare_json(const ComparisonReport& report, const SimulationConfig& cfg);

// Reads a summary produced by summary_json back into tables (used to verify
// the round trip and by downstream tooling).
struct ParsedSummary {
    SummaryTable responses;
    SummaryTable processing;
    std::vector<HourlyLoading> loading;
    RunTotals totals;
};
ParsedSummary parse_summary_json(const std::string& text);

// Two-column plot data per report family; loading blocks are separated per DC.
std::string fig_response_dat(const RunResult& result);
std::string fig_service_dat(const RunResult& result);
std::string fig_loading_dat(const RunResult& result);

// Aligned human-readable tables for the console.
std::string render_summary_text(const RunResult& result);
std::string render_compare_text(const ComparisonReport& report);

// Writes the full simulate output set into `dir` (created if missing):
// responses.csv, services.csv, loading.csv, summary.json and the fig_*.dat
// files; optional extras are controlled by the flags.
void write_run_outputs(const RunResult& result, const SimulationConfig& cfg,
                       const std::string& dir, bool with_arrivals = false,
                       bool with_assignments = false);

void write_compare_outputs(const ComparisonReport& report, const SimulationConfig& cfg,
                           const std::string& dir);

}  // namespace lbsim
