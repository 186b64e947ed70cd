#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbsim/time.hpp"

namespace lbsim {

// End-to-end sample: creation at the user base to response receipt.
struct ResponseSample {
    std::int32_t ub = -1;
    std::int64_t request = -1;
    SimTime created;
    SimTime returned;

    double response_ms() const { return (returned - created).millis(); }
};

// Data-center-side sample. processing covers everything from first arrival at
// a data center to service completion: queueing, migration transit, and
// execution. queue_wait is the pre-execution wait at the serving DC alone.
struct ServiceSample {
    std::int32_t dc = -1;
    std::int32_t vm = -1;
    std::int64_t request = -1;
    SimTime first_dc_arrival;
    SimTime service_start;
    SimTime service_end;
    std::int32_t migrations = 0;
    double queue_wait_ms = 0.0;

    double exec_ms() const { return (service_end - service_start).millis(); }
    double processing_ms() const { return (service_end - first_dc_arrival).millis(); }
};

struct SummaryRow {
    std::string entity;
    std::int64_t count = 0;
    double avg_ms = 0.0;
    double min_ms = 0.0;
    double max_ms = 0.0;
};

// Avg/min/max per entity plus an overall row; `empty` marks a table with no
// samples at all (no NaN rows are ever emitted).
struct SummaryTable {
    std::string metric;
    std::vector<SummaryRow> rows;
    SummaryRow overall;
    bool empty = true;
};

// Requests serviced per hour bucket at one data center.
struct HourlyLoading {
    std::int32_t dc = -1;
    std::string dc_id;
    std::vector<std::int64_t> counts;

    std::int64_t total() const;
};

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-run collector: streaming avg/min/max per entity plus (optionally) the
// raw samples for CSV export. Single-owner, one store per run.
class MetricStore {
public:
    MetricStore(int ub_count, int dc_count, double duration_hours, bool keep_samples);

    // Rejects out-of-order timestamps with MetricError.
    void record_response(const ResponseSample& s);
    void record_service(const ServiceSample& s);

    SummaryTable summarize_responses(const std::vector<std::string>& ub_ids) const;
    SummaryTable summarize_processing(const std::vector<std::string>& dc_ids) const;
    std::vector<HourlyLoading> hourly_loading(const std::vector<std::string>& dc_ids) const;

    std::int64_t responses_recorded() const { return response_count_; }
    std::int64_t services_recorded() const { return service_count_; }
    const std::vector<ResponseSample>& response_samples() const { return responses_; }
    const std::vector<ServiceSample>& service_samples() const { return services_; }

private:
    struct Running {
        std::int64_t count = 0;
        double sum = 0.0;
        double min = 0.0;
        double max = 0.0;

        void add(double v);
    };

    static SummaryRow to_row(const std::string& entity, const Running& r);

    int ub_count_;
    int dc_count_;
    int hour_buckets_;
    bool keep_samples_;

    std::vector<Running> per_ub_response_;
    std::vector<Running> per_dc_processing_;
    Running all_response_;
    Running all_processing_;
    std::vector<std::int64_t> hourly_;  // dc-major [dc * hour_buckets + hour]
    std::int64_t response_count_ = 0;
    std::int64_t service_count_ = 0;

    std::vector<ResponseSample> responses_;
    std::vector<ServiceSample> services_;
};

}  // namespace lbsim
