#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lbsim/metrics.hpp"
#include "lbsim/topology.hpp"
#include "lbsim/workload.hpp"

namespace lbsim {

// A run broke one of its own guarantees (lost request, saturation cap
// exceeded, non-minimal ESCE pick, ...). Maps to exit code 3 in the CLI.
class SimInvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Receives one line per processed event when tracing is on.
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void write(std::string_view line) = 0;
};

class StringTraceSink : public TraceSink {
public:
    void write(std::string_view line) override {
        buffer_.append(line);
        buffer_.push_back('\n');
    }
    const std::string& str() const { return buffer_; }

private:
    std::string buffer_;
};

class FileTraceSink : public TraceSink {
public:
    explicit FileTraceSink(const std::string& path);
    void write(std::string_view line) override;

private:
    std::ofstream out_;
};

struct RunOptions {
    bool keep_samples = true;      // retain raw samples for CSV export
    bool check_invariants = true;  // run the per-event self-checks
    TraceSink* trace = nullptr;
};

struct RunTotals {
    std::int64_t generated = 0;
    std::int64_t returned = 0;
    std::int64_t dropped = 0;
    std::int64_t migrations = 0;         // sum over requests
    std::int64_t migrated_requests = 0;  // requests with >= 1 migration
    std::int64_t parked_requests = 0;    // waited for a release with every DC saturated
    std::vector<std::int64_t> max_concurrent_per_dc;  // peak requests present at each DC
};

struct RunResult {
    SummaryTable responses;
    SummaryTable processing;
    std::vector<HourlyLoading> loading;
    RunTotals totals;
    std::vector<ResponseSample> response_samples;  // populated when keep_samples
    std::vector<ServiceSample> service_samples;
    std::vector<Arrival> arrivals;
};

// Runs the scenario to full drain: every generated request is served and
// returned before this function comes back. Deterministic for a fixed config.
RunResult run_simulation(const SimulationConfig& cfg, const RunOptions& options = {});

// Same engine with an injected arrival plan (ids must be 0..n-1 in plan
// order); the public entry point feeds it build_arrival_plan(cfg).
RunResult run_simulation_with_plan(const SimulationConfig& cfg, std::vector<Arrival> plan,
                                   const RunOptions& options = {});

}  // namespace lbsim
