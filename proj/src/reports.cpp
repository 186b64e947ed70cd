#include "lbsim/reports.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lbsim {

namespace {

using ordered_json = nlohmann::ordered_json;

// 6 decimals of a millisecond is exactly one nanosecond, the clock resolution.
std::string ms(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

ordered_json row_to_json(const SummaryRow& row) {
    return ordered_json{{"entity", row.entity},
                        {"count", row.count},
                        {"avg_ms", row.avg_ms},
                        {"min_ms", row.min_ms},
                        {"max_ms", row.max_ms}};
}

SummaryRow row_from_json(const ordered_json& j) {
    SummaryRow row;
    row.entity = j.at("entity").get<std::string>();
    row.count = j.at("count").get<std::int64_t>();
    row.avg_ms = j.at("avg_ms").get<double>();
    row.min_ms = j.at("min_ms").get<double>();
    row.max_ms = j.at("max_ms").get<double>();
    return row;
}

ordered_json table_to_json(const SummaryTable& table) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) rows.push_back(row_to_json(row));
    return ordered_json{{"metric", table.metric},
                        {"empty", table.empty},
                        {"rows", rows},
                        {"overall", row_to_json(table.overall)}};
}

SummaryTable table_from_json(const ordered_json& j) {
    SummaryTable table;
    table.metric = j.at("metric").get<std::string>();
    table.empty = j.at("empty").get<bool>();
    for (const auto& row : j.at("rows")) table.rows.push_back(row_from_json(row));
    table.overall = row_from_json(j.at("overall"));
    return table;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string policy_mode_line(const PolicyAggregate& p) {
    return to_string(p.policy) + " (" + to_string(p.mode) + ")";
}

}  // namespace

std::string responses_csv(const RunResult& result, const SimulationConfig& cfg) {
    std::ostringstream out;
    out << "request_id,ub,created_ms,returned_ms,response_ms\n";
    for (const auto& s : result.response_samples) {
        out << s.request << ',' << cfg.user_bases[s.ub].id << ',' << ms(s.created.millis()) << ','
            << ms(s.returned.millis()) << ',' << ms(s.response_ms()) << '\n';
    }
    return out.str();
}

std::string services_csv(const RunResult& result, const SimulationConfig& cfg) {
    std::ostringstream out;
    out << "request_id,dc,vm,first_dc_arrival_ms,service_start_ms,service_end_ms,"
           "queue_wait_ms,exec_ms,processing_ms,migrations\n";
    for (const auto& s : result.service_samples) {
        out << s.request << ',' << cfg.data_centers[s.dc].id << ',' << s.vm << ','
            << ms(s.first_dc_arrival.millis()) << ',' << ms(s.service_start.millis()) << ','
            << ms(s.service_end.millis()) << ',' << ms(s.queue_wait_ms) << ',' << ms(s.exec_ms())
            << ',' << ms(s.processing_ms()) << ',' << s.migrations << '\n';
    }
    return out.str();
}

std::string loading_csv(const RunResult& result) {
    std::ostringstream out;
    out << "dc,hour,count\n";
    for (const auto& loading : result.loading) {
        for (std::size_t h = 0; h < loading.counts.size(); ++h) {
            out << loading.dc_id << ',' << h << ',' << loading.counts[h] << '\n';
        }
    }
    return out.str();
}

std::string arrivals_csv(const RunResult& result, const SimulationConfig& cfg) {
    std::ostringstream out;
    out << "request_id,ub,created_ms\n";
    for (const auto& a : result.arrivals) {
        out << a.request_id << ',' << cfg.user_bases[a.ub].id << ',' << ms(a.time.millis())
            << '\n';
    }
    return out.str();
}

std::string assignments_csv(const RunResult& result, const SimulationConfig& cfg) {
    std::ostringstream out;
    out << "request_id,dc,vm,migrations\n";
    for (const auto& s : result.service_samples) {
        out << s.request << ',' << cfg.data_centers[s.dc].id << ',' << s.vm << ',' << s.migrations
            << '\n';
    }
    return out.str();
}

std::string summary_json(const RunResult& result, const SimulationConfig& cfg) {
    ordered_json j;
    j["run"] = ordered_json{{"policy", to_string(cfg.policy)},
                            {"mode", to_string(cfg.scheduling_mode)},
                            {"seed", cfg.seed},
                            {"duration_hours", cfg.duration_hours},
                            {"threshold", cfg.throttle_threshold}};
    j["totals"] = ordered_json{{"generated", result.totals.generated},
                               {"returned", result.totals.returned},
                               {"dropped", result.totals.dropped},
                               {"migrations", result.totals.migrations},
                               {"migrated_requests", result.totals.migrated_requests},
                               {"parked_requests", result.totals.parked_requests},
                               {"max_concurrent_per_dc", result.totals.max_concurrent_per_dc}};
    j["response_by_userbase"] = table_to_json(result.responses);
    j["processing_by_datacenter"] = table_to_json(result.processing);
    ordered_json loading = ordered_json::array();
    for (const auto& l : result.loading) {
        loading.push_back(ordered_json{{"dc", l.dc_id}, {"counts", l.counts}});
    }
    j["loading_by_datacenter"] = loading;
    return j.dump(2) + "\n";
}

ParsedSummary parse_summary_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    ParsedSummary parsed;
    parsed.responses = table_from_json(j.at("response_by_userbase"));
    parsed.processing = table_from_json(j.at("processing_by_datacenter"));
    for (const auto& l : j.at("loading_by_datacenter")) {
        HourlyLoading loading;
        loading.dc_id = l.at("dc").get<std::string>();
        loading.counts = l.at("counts").get<std::vector<std::int64_t>>();
        parsed.loading.push_back(std::move(loading));
    }
    const auto& totals = j.at("totals");
    parsed.totals.generated = totals.at("generated").get<std::int64_t>();
    parsed.totals.returned = totals.at("returned").get<std::int64_t>();
    parsed.totals.dropped = totals.at("dropped").get<std::int64_t>();
    parsed.totals.migrations = totals.at("migrations").get<std::int64_t>();
    parsed.totals.migrated_requests = totals.at("migrated_requests").get<std::int64_t>();
    parsed.totals.parked_requests = totals.at("parked_requests").get<std::int64_t>();
    parsed.totals.max_concurrent_per_dc =
        totals.at("max_concurrent_per_dc").get<std::vector<std::int64_t>>();
    return parsed;
}

std::string fig_response_dat(const RunResult& result) {
    std::ostringstream out;
    out << "# userbase_index avg_response_ms\n";
    for (std::size_t i = 0; i < result.responses.rows.size(); ++i) {
        out << i << ' ' << ms(result.responses.rows[i].avg_ms) << '\n';
    }
    return out.str();
}

std::string fig_service_dat(const RunResult& result) {
    std::ostringstream out;
    out << "# datacenter_index avg_processing_ms\n";
    for (std::size_t i = 0; i < result.processing.rows.size(); ++i) {
        out << i << ' ' << ms(result.processing.rows[i].avg_ms) << '\n';
    }
    return out.str();
}

std::string fig_loading_dat(const RunResult& result) {
    std::ostringstream out;
    out << "# hour requests_serviced, one block per data center\n";
    for (const auto& l : result.loading) {
        out << "# " << l.dc_id << '\n';
        for (std::size_t h = 0; h < l.counts.size(); ++h) {
            out << h << ' ' << l.counts[h] << '\n';
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string render_table(const SummaryTable& table, const std::string& title) {
    std::ostringstream out;
    out << title << '\n';
    if (table.empty) {
        out << "  (no samples)\n";
        return out.str();
    }
    char line[160];
    std::snprintf(line, sizeof(line), "  %-10s %10s %12s %12s %12s\n", "entity", "count",
                  "avg (ms)", "min (ms)", "max (ms)");
    out << line;
    auto emit = [&](const SummaryRow& row) {
        std::snprintf(line, sizeof(line), "  %-10s %10lld %12.3f %12.3f %12.3f\n",
                      row.entity.c_str(), static_cast<long long>(row.count), row.avg_ms,
                      row.min_ms, row.max_ms);
        out << line;
    };
    for (const auto& row : table.rows) emit(row);
    emit(table.overall);
    return out.str();
}

}  // namespace

std::string render_summary_text(const RunResult& result) {
    std::ostringstream out;
    out << render_table(result.responses, "Response time by user base") << '\n';
    out << render_table(result.processing, "Processing time by data center") << '\n';
    out << "Totals: generated " << result.totals.generated << ", returned "
        << result.totals.returned << ", migrations " << result.totals.migrations << "\n";
    return out.str();
}

std::string compare_json(const ComparisonReport& report, const SimulationConfig& cfg) {
    ordered_json j;
    j["scenario"] = ordered_json{{"duration_hours", cfg.duration_hours},
                                 {"threshold", cfg.throttle_threshold},
                                 {"user_bases", cfg.user_bases.size()},
                                 {"data_centers", cfg.data_centers.size()}};
    j["seeds"] = report.seeds;
    ordered_json policies = ordered_json::array();
    for (const auto& p : report.policies) {
        ordered_json per_seed = ordered_json::array();
        for (const auto& s : p.per_seed) {
            per_seed.push_back(ordered_json{{"seed", s.seed},
                                            {"avg_response_ms", s.avg_response_ms},
                                            {"min_response_ms", s.min_response_ms},
                                            {"max_response_ms", s.max_response_ms},
                                            {"avg_processing_ms", s.avg_processing_ms},
                                            {"min_processing_ms", s.min_processing_ms},
                                            {"max_processing_ms", s.max_processing_ms}});
        }
        policies.push_back(ordered_json{
            {"policy", to_string(p.policy)},
            {"mode", to_string(p.mode)},
            {"mean_avg_response_ms", p.mean_avg_response_ms},
            {"mean_min_response_ms", p.mean_min_response_ms},
            {"mean_max_response_ms", p.mean_max_response_ms},
            {"mean_avg_processing_ms", p.mean_avg_processing_ms},
            {"mean_min_processing_ms", p.mean_min_processing_ms},
            {"mean_max_processing_ms", p.mean_max_processing_ms},
            {"per_seed", per_seed}});
    }
    j["policies"] = policies;
    j["verdicts"] =
        ordered_json{{"lowest_mean_response", report.verdicts.lowest_mean_response},
                     {"highest_mean_response", report.verdicts.highest_mean_response},
                     {"highest_mean_processing", report.verdicts.highest_mean_processing},
                     {"processing_ratio_throttled_vs_rr",
                      report.verdicts.processing_ratio_throttled_vs_rr},
                     {"response_esce_le_rr", report.verdicts.response_esce_le_rr},
                     {"response_rr_le_throttled", report.verdicts.response_rr_le_throttled}};
    return j.dump(2) + "\n";
}

std::string render_compare_text(const ComparisonReport& report) {
    std::ostringstream out;
    out << "Policy comparison over " << report.seeds.size() << " seed(s)\n";
    char line[200];
    std::snprintf(line, sizeof(line), "  %-16s %18s %18s\n", "policy", "mean response (ms)",
                  "mean processing (ms)");
    out << line;
    for (const auto& p : report.policies) {
        std::snprintf(line, sizeof(line), "  %-16s %18.3f %18.3f\n", policy_mode_line(p).c_str(),
                      p.mean_avg_response_ms, p.mean_avg_processing_ms);
        out << line;
    }
    out << "  lowest mean response:    " << report.verdicts.lowest_mean_response << '\n';
    out << "  highest mean processing: " << report.verdicts.highest_mean_processing << '\n';
    std::snprintf(line, sizeof(line), "  throttled/rr processing ratio: %.3f\n",
                  report.verdicts.processing_ratio_throttled_vs_rr);
    out << line;
    return out.str();
}

void write_run_outputs(const RunResult& result, const SimulationConfig& cfg,
                       const std::string& dir, bool with_arrivals, bool with_assignments) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_file((base / "responses.csv").string(), responses_csv(result, cfg));
    write_file((base / "services.csv").string(), services_csv(result, cfg));
    write_file((base / "loading.csv").string(), loading_csv(result));
    write_file((base / "summary.json").string(), summary_json(result, cfg));
    write_file((base / "fig_response.dat").string(), fig_response_dat(result));
    write_file((base / "fig_service.dat").string(), fig_service_dat(result));
    write_file((base / "fig_loading.dat").string(), fig_loading_dat(result));
    if (with_arrivals) write_file((base / "arrivals.csv").string(), arrivals_csv(result, cfg));
    if (with_assignments)
        write_file((base / "assignments.csv").string(), assignments_csv(result, cfg));
}

void write_compare_outputs(const ComparisonReport& report, const SimulationConfig& cfg,
                           const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_file((base / "compare.json").string(), compare_json(report, cfg));
}

}  // namespace lbsim
