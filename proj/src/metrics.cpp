#include "lbsim/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace lbsim {

std::int64_t HourlyLoading::total() const {
    std::int64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
}

void MetricStore::Running::add(double v) {
    if (count == 0) {
        min = max = v;
    } else {
        min = std::min(min, v);
        max = std::max(max, v);
    }
    sum += v;
    ++count;
}

MetricStore::MetricStore(int ub_count, int dc_count, double duration_hours, bool keep_samples)
    : ub_count_(ub_count),
      dc_count_(dc_count),
      hour_buckets_(std::max(1, static_cast<int>(std::ceil(duration_hours)))),
      keep_samples_(keep_samples),
      per_ub_response_(ub_count),
      per_dc_processing_(dc_count),
      hourly_(static_cast<std::size_t>(dc_count) * hour_buckets_, 0) {}

void MetricStore::record_response(const ResponseSample& s) {
    if (s.returned < s.created)
        throw MetricError("response sample out of order: returned before created");
    if (s.ub < 0 || s.ub >= ub_count_) throw MetricError("response sample: unknown user base");
    const double v = s.response_ms();
    per_ub_response_[s.ub].add(v);
    all_response_.add(v);
    ++response_count_;
    if (keep_samples_) responses_.push_back(s);
}

void MetricStore::record_service(const ServiceSample& s) {
    if (s.service_end < s.service_start || s.service_start < s.first_dc_arrival)
        throw MetricError("service sample out of order");
    if (s.dc < 0 || s.dc >= dc_count_) throw MetricError("service sample: unknown data center");
    const double v = s.processing_ms();
    per_dc_processing_[s.dc].add(v);
    all_processing_.add(v);
    ++service_count_;

    // Bucket by completion hour; completions that drain past the horizon fold
    // into the final hour so totals stay conserved.
    auto hour = s.service_end.hour_index();
    if (hour >= hour_buckets_) hour = hour_buckets_ - 1;
    ++hourly_[static_cast<std::size_t>(s.dc) * hour_buckets_ + hour];

    if (keep_samples_) services_.push_back(s);
}

SummaryRow MetricStore::to_row(const std::string& entity, const Running& r) {
    SummaryRow row;
    row.entity = entity;
    row.count = r.count;
    if (r.count > 0) {
        // The mean lies in [min, max] by definition; sum/count can drift a few
        // ulps outside when every sample is identical, so pin it back.
        row.avg_ms = std::clamp(r.sum / static_cast<double>(r.count), r.min, r.max);
        row.min_ms = r.min;
        row.max_ms = r.max;
    }
    return row;
}

SummaryTable MetricStore::summarize_responses(const std::vector<std::string>& ub_ids) const {
    SummaryTable table;
    table.metric = "response_ms";
    for (int u = 0; u < ub_count_; ++u)
        table.rows.push_back(to_row(ub_ids[u], per_ub_response_[u]));
    table.overall = to_row("overall", all_response_);
    table.empty = all_response_.count == 0;
    return table;
}

SummaryTable MetricStore::summarize_processing(const std::vector<std::string>& dc_ids) const {
    SummaryTable table;
    table.metric = "processing_ms";
    for (int d = 0; d < dc_count_; ++d)
        table.rows.push_back(to_row(dc_ids[d], per_dc_processing_[d]));
    table.overall = to_row("overall", all_processing_);
    table.empty = all_processing_.count == 0;
    return table;
}

std::vector<HourlyLoading> MetricStore::hourly_loading(
    const std::vector<std::string>& dc_ids) const {
    std::vector<HourlyLoading> out;
    for (int d = 0; d < dc_count_; ++d) {
        HourlyLoading loading;
        loading.dc = d;
        loading.dc_id = dc_ids[d];
        loading.counts.assign(hourly_.begin() + static_cast<std::ptrdiff_t>(d) * hour_buckets_,
                              hourly_.begin() + static_cast<std::ptrdiff_t>(d + 1) * hour_buckets_);
        out.push_back(std::move(loading));
    }
    return out;
}

}  // namespace lbsim
