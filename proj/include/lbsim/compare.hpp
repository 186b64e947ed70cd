#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbsim/topology.hpp"

namespace lbsim {

// One policy run under one seed, reduced to the row shape of the summary
// tables.
struct SeedOutcome {
    std::uint64_t seed = 0;
    double avg_response_ms = 0.0;
    double min_response_ms = 0.0;
    double max_response_ms = 0.0;
    double avg_processing_ms = 0.0;
    double min_processing_ms = 0.0;
    double max_processing_ms = 0.0;
};

struct PolicyAggregate {
    PolicyKind policy = PolicyKind::RoundRobin;
    SchedulingMode mode = SchedulingMode::TimeSharedPreemptive;
    std::vector<SeedOutcome> per_seed;
    // Seed averages of the per-run statistics.
    double mean_avg_response_ms = 0.0;
    double mean_min_response_ms = 0.0;
    double mean_max_response_ms = 0.0;
    double mean_avg_processing_ms = 0.0;
    double mean_min_processing_ms = 0.0;
    double mean_max_processing_ms = 0.0;
};

struct ComparisonVerdicts {
    std::string lowest_mean_response;    // policy name
    std::string highest_mean_response;
    std::string highest_mean_processing;
    double processing_ratio_throttled_vs_rr = 0.0;
    bool response_esce_le_rr = false;
    bool response_rr_le_throttled = false;
};

struct ComparisonReport {
    std::vector<std::uint64_t> seeds;
    std::vector<PolicyAggregate> policies;  // RoundRobin, Esce, Throttled
    ComparisonVerdicts verdicts;
};

// Runs all three policies over the same scenario and seed list. The scheduling
// mode is the pairing the reproduction uses throughout: round robin
// time-shared, ESCE and throttled space-shared. Each (policy, seed) run uses
// identical arrival streams, so differences are attributable to routing alone.
ComparisonReport compare_policies(const SimulationConfig& cfg,
                                  const std::vector<std::uint64_t>& seeds);

}  // namespace lbsim
