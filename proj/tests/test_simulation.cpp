#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "lbsim/compare.hpp"
#include "lbsim/config_io.hpp"
#include "lbsim/reports.hpp"
#include "lbsim/simulation.hpp"

using namespace lbsim;

namespace {

SimulationConfig small_default(double hours = 0.25) {
    SimulationConfig cfg = default_reference_config();
    cfg.duration_hours = hours;
    return cfg;
}

// Two data centers, one single-task VM each, no jitter: saturation behavior
// is fully hand-checkable.
SimulationConfig two_dc_throttled() {
    SimulationConfig cfg;
    cfg.regions = 2;
    cfg.latency = LatencyMatrix::uniform(2, 1.0, 10.0);
    cfg.policy = PolicyKind::Throttled;
    cfg.scheduling_mode = SchedulingMode::SpaceSharedNonPreemptive;
    cfg.throttle_threshold = 1;
    cfg.duration_hours = 1.0;
    cfg.jitter_ms = 0.0;

    UserBase ub;
    ub.id = "UB1";
    ub.region = 0;
    ub.users_peak = 0;  // arrivals injected by hand
    ub.users_offpeak = 0;
    ub.requests_per_user_per_hour = 0.0;
    ub.request_size_bytes = 100;
    ub.request_length_mi = 100'000;  // 100 ms at 1e6 MI/s
    cfg.user_bases.push_back(ub);

    for (int d = 0; d < 2; ++d) {
        DataCenter dc;
        dc.id = "DC" + std::to_string(d + 1);
        dc.region = d;
        dc.vms.push_back({0, 1'000'000, 1 << 20, 1000});
        cfg.data_centers.push_back(dc);
    }
    return cfg;
}

std::vector<Arrival> burst_plan(int n, double gap_ms) {
    std::vector<Arrival> plan;
    for (int i = 0; i < n; ++i)
        plan.push_back({SimTime::from_ms(1.0 + gap_ms * i), 0, i});
    return plan;
}

}  // namespace

TEST_CASE("a short default run conserves and decomposes every request") {
    const SimulationConfig cfg = small_default();
    const RunResult result = run_simulation(cfg);  // invariant checks are on
    CHECK(result.totals.generated > 0);
    CHECK(result.totals.returned == result.totals.generated);
    CHECK(result.totals.dropped == 0);
    CHECK(result.totals.migrations == 0);  // round robin never migrates

    // Hourly loading conserves the serviced count.
    std::int64_t loaded = 0;
    for (const auto& l : result.loading) loaded += l.total();
    CHECK(loaded == result.totals.generated);

    // Summary rows are well-ordered.
    for (const auto& row : result.responses.rows) {
        CHECK(row.min_ms <= row.avg_ms);
        CHECK(row.avg_ms <= row.max_ms);
    }
}

TEST_CASE("identical configs replay byte-identically") {
    const SimulationConfig cfg = small_default(0.1);

    StringTraceSink trace_a, trace_b;
    RunOptions options_a, options_b;
    options_a.trace = &trace_a;
    options_b.trace = &trace_b;
    const RunResult a = run_simulation(cfg, options_a);
    const RunResult b = run_simulation(cfg, options_b);

    CHECK(trace_a.str() == trace_b.str());
    CHECK(!trace_a.str().empty());
    CHECK(summary_json(a, cfg) == summary_json(b, cfg));
}

TEST_CASE("different seeds change the trace") {
    SimulationConfig cfg = small_default(0.1);
    StringTraceSink trace_a, trace_b;
    RunOptions options;
    options.trace = &trace_a;
    run_simulation(cfg, options);
    cfg.seed = 1;
    options.trace = &trace_b;
    run_simulation(cfg, options);
    CHECK(trace_a.str() != trace_b.str());
}

TEST_CASE("degenerate scenario: all policies produce the same trace") {
    // One VM per data center and a threshold far above any in-flight count:
    // every policy has exactly one choice.
    SimulationConfig cfg = small_default(0.1);
    for (auto& dc : cfg.data_centers) dc.vms.resize(1);
    cfg.throttle_threshold = 1'000'000;
    cfg.scheduling_mode = SchedulingMode::TimeSharedPreemptive;

    std::vector<std::string> traces;
    for (PolicyKind policy : {PolicyKind::RoundRobin, PolicyKind::Esce, PolicyKind::Throttled}) {
        cfg.policy = policy;
        StringTraceSink trace;
        RunOptions options;
        options.trace = &trace;
        run_simulation(cfg, options);
        traces.push_back(trace.str());
    }
    CHECK(traces[0] == traces[1]);
    CHECK(traces[1] == traces[2]);
}

TEST_CASE("saturated throttled fleets migrate, then park, and lose nothing") {
    const SimulationConfig cfg = two_dc_throttled();
    // Three requests an instant apart against two single-slot data centers.
    const RunResult result = run_simulation_with_plan(cfg, burst_plan(3, 0.01));

    CHECK(result.totals.generated == 3);
    CHECK(result.totals.returned == 3);
    REQUIRE(result.service_samples.size() == 3);

    // First request: served at the preferred DC1, no migration.
    CHECK(result.service_samples[0].migrations == 0);
    // Second: DC1 saturated, hops to DC2 and runs there.
    // Third: both saturated, hops to DC2, parks back at DC1 and waits.
    std::multiset<std::int32_t> serving_dcs;
    int parked_waits = 0;
    for (const auto& s : result.service_samples) {
        serving_dcs.insert(s.dc);
        if (s.queue_wait_ms > 1.0) ++parked_waits;
    }
    CHECK(serving_dcs == std::multiset<std::int32_t>{0, 0, 1});
    CHECK(parked_waits == 1);
    CHECK(result.totals.migrated_requests == 2);
    CHECK(result.totals.parked_requests == 1);

    // Loading shows up at the non-preferred data center.
    CHECK(result.loading[1].total() == 1);

    // The parked request waited for the first completion, so its response
    // includes roughly one service time of queueing.
    double max_response = 0.0;
    for (const auto& s : result.response_samples)
        max_response = std::max(max_response, s.response_ms());
    CHECK(max_response > 100.0);
}

TEST_CASE("a threshold of two queues one task per VM before migrating") {
    SimulationConfig cfg = two_dc_throttled();
    cfg.throttle_threshold = 2;
    const RunResult result = run_simulation_with_plan(cfg, burst_plan(4, 0.01));

    CHECK(result.totals.returned == 4);
    CHECK(result.totals.parked_requests == 0);
    // First two fill DC1's slot pair (one executing, one queued on the VM);
    // the next two spill to DC2 the same way.
    std::multiset<std::int32_t> serving_dcs;
    int queued_waits = 0;
    for (const auto& s : result.service_samples) {
        serving_dcs.insert(s.dc);
        if (s.queue_wait_ms > 50.0) ++queued_waits;
    }
    CHECK(serving_dcs == std::multiset<std::int32_t>{0, 0, 1, 1});
    CHECK(queued_waits == 2);
    CHECK(result.totals.migrated_requests == 2);
}

TEST_CASE("migration chains visit each data center at most once") {
    const SimulationConfig cfg = two_dc_throttled();
    const RunResult result = run_simulation_with_plan(cfg, burst_plan(6, 0.01));
    CHECK(result.totals.returned == 6);
    for (const auto& s : result.service_samples) {
        // With two data centers a chain is at most one hop.
        CHECK(s.migrations <= 1);
    }
}

TEST_CASE("a zero-traffic run yields empty-marked tables, not NaNs") {
    SimulationConfig cfg = small_default(0.1);
    for (auto& ub : cfg.user_bases) {
        ub.users_peak = 0;
        ub.users_offpeak = 0;
    }
    REQUIRE(validate_config(cfg).empty());
    const RunResult result = run_simulation(cfg);
    CHECK(result.totals.generated == 0);
    CHECK(result.responses.empty);
    CHECK(result.processing.empty);
    for (const auto& row : result.responses.rows) {
        CHECK(row.count == 0);
        CHECK(row.avg_ms == 0.0);
    }
    for (const auto& l : result.loading) CHECK(l.total() == 0);
}

TEST_CASE("esce keeps its argmin guarantee on a loaded run") {
    SimulationConfig cfg = small_default(0.1);
    cfg.policy = PolicyKind::Esce;
    cfg.scheduling_mode = SchedulingMode::SpaceSharedNonPreemptive;
    // The internal check throws SimInvariantViolation on any non-minimal pick.
    CHECK_NOTHROW(run_simulation(cfg));
}

TEST_CASE("availability screening leaves a satisfiable scenario untouched") {
    SimulationConfig cfg = small_default(0.05);
    RunResult plain = run_simulation(cfg);
    cfg.availability.enabled = true;  // default parameters rate 59/60 > 0.95
    CHECK(validate_config(cfg).empty());
    RunResult screened = run_simulation(cfg);
    CHECK(screened.totals.returned == plain.totals.returned);
}

TEST_CASE("summary json round-trips") {
    const SimulationConfig cfg = small_default(0.05);
    const RunResult result = run_simulation(cfg);
    const std::string text = summary_json(result, cfg);
    const ParsedSummary parsed = parse_summary_json(text);

    REQUIRE(parsed.responses.rows.size() == result.responses.rows.size());
    for (std::size_t i = 0; i < parsed.responses.rows.size(); ++i) {
        CHECK(parsed.responses.rows[i].entity == result.responses.rows[i].entity);
        CHECK(parsed.responses.rows[i].count == result.responses.rows[i].count);
        CHECK(parsed.responses.rows[i].avg_ms == result.responses.rows[i].avg_ms);
        CHECK(parsed.responses.rows[i].min_ms == result.responses.rows[i].min_ms);
        CHECK(parsed.responses.rows[i].max_ms == result.responses.rows[i].max_ms);
    }
    CHECK(parsed.totals.generated == result.totals.generated);
    CHECK(parsed.totals.returned == result.totals.returned);
    REQUIRE(parsed.loading.size() == result.loading.size());
    for (std::size_t i = 0; i < parsed.loading.size(); ++i)
        CHECK(parsed.loading[i].counts == result.loading[i].counts);
}

TEST_CASE("csv exports carry their documented headers") {
    const SimulationConfig cfg = small_default(0.05);
    const RunResult result = run_simulation(cfg);
    CHECK(responses_csv(result, cfg).rfind("request_id,ub,created_ms,returned_ms,response_ms\n",
                                           0) == 0);
    CHECK(services_csv(result, cfg).rfind("request_id,dc,vm,first_dc_arrival_ms,", 0) == 0);
    CHECK(loading_csv(result).rfind("dc,hour,count\n", 0) == 0);
    CHECK(arrivals_csv(result, cfg).rfind("request_id,ub,created_ms\n", 0) == 0);
    CHECK(assignments_csv(result, cfg).rfind("request_id,dc,vm,migrations\n", 0) == 0);
}

TEST_CASE("compare is deterministic and pairs modes as documented") {
    SimulationConfig cfg = small_default(0.05);
    const std::vector<std::uint64_t> seeds{0, 1};
    const ComparisonReport a = compare_policies(cfg, seeds);
    const ComparisonReport b = compare_policies(cfg, seeds);

    REQUIRE(a.policies.size() == 3);
    CHECK(a.policies[0].policy == PolicyKind::RoundRobin);
    CHECK(a.policies[0].mode == SchedulingMode::TimeSharedPreemptive);
    CHECK(a.policies[1].policy == PolicyKind::Esce);
    CHECK(a.policies[1].mode == SchedulingMode::SpaceSharedNonPreemptive);
    CHECK(a.policies[2].policy == PolicyKind::Throttled);
    CHECK(a.policies[2].mode == SchedulingMode::SpaceSharedNonPreemptive);

    for (std::size_t p = 0; p < 3; ++p) {
        REQUIRE(a.policies[p].per_seed.size() == seeds.size());
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            CHECK(a.policies[p].per_seed[s].avg_response_ms ==
                  b.policies[p].per_seed[s].avg_response_ms);
            CHECK(a.policies[p].per_seed[s].avg_processing_ms ==
                  b.policies[p].per_seed[s].avg_processing_ms);
        }
    }
    CHECK(compare_json(a, cfg) == compare_json(b, cfg));
}
