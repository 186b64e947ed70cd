#include "lbsim/compare.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <thread>

#include "lbsim/simulation.hpp"

namespace lbsim {

namespace {

constexpr PolicyKind kPolicies[] = {PolicyKind::RoundRobin, PolicyKind::Esce,
                                    PolicyKind::Throttled};

// The scheduling mode each policy is reproduced with: round robin preemptive
// time sharing, the other two non-preemptive space sharing.
SchedulingMode paired_mode(PolicyKind policy) {
    return policy == PolicyKind::RoundRobin ? SchedulingMode::TimeSharedPreemptive
                                            : SchedulingMode::SpaceSharedNonPreemptive;
}

SeedOutcome run_one(SimulationConfig cfg, PolicyKind policy, std::uint64_t seed) {
    cfg.policy = policy;
    cfg.scheduling_mode = paired_mode(policy);
    cfg.seed = seed;
    RunOptions options;
    options.keep_samples = false;
    const RunResult result = run_simulation(cfg, options);

    SeedOutcome outcome;
    outcome.seed = seed;
    outcome.avg_response_ms = result.responses.overall.avg_ms;
    outcome.min_response_ms = result.responses.overall.min_ms;
    outcome.max_response_ms = result.responses.overall.max_ms;
    outcome.avg_processing_ms = result.processing.overall.avg_ms;
    outcome.min_processing_ms = result.processing.overall.min_ms;
    outcome.max_processing_ms = result.processing.overall.max_ms;
    return outcome;
}

}  // namespace

ComparisonReport compare_policies(const SimulationConfig& cfg,
                                  const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("compare_policies: need at least one seed");

    ComparisonReport report;
    report.seeds = seeds;

    for (PolicyKind policy : kPolicies) {
        PolicyAggregate agg;
        agg.policy = policy;
        agg.mode = paired_mode(policy);

        // Runs share no mutable state; fan out a window of them at a time and
        // merge in seed order so the report is identical regardless of
        // scheduling.
        const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
        for (std::size_t base = 0; base < seeds.size(); base += width) {
            const std::size_t stop = std::min(seeds.size(), base + width);
            std::vector<std::future<SeedOutcome>> futures;
            for (std::size_t i = base; i < stop; ++i) {
                futures.push_back(std::async(std::launch::async, run_one, cfg, policy, seeds[i]));
            }
            for (auto& f : futures) agg.per_seed.push_back(f.get());
        }

        const auto n = static_cast<double>(agg.per_seed.size());
        for (const auto& s : agg.per_seed) {
            agg.mean_avg_response_ms += s.avg_response_ms / n;
            agg.mean_min_response_ms += s.min_response_ms / n;
            agg.mean_max_response_ms += s.max_response_ms / n;
            agg.mean_avg_processing_ms += s.avg_processing_ms / n;
            agg.mean_min_processing_ms += s.min_processing_ms / n;
            agg.mean_max_processing_ms += s.max_processing_ms / n;
        }
        report.policies.push_back(std::move(agg));
    }

    const PolicyAggregate& rr = report.policies[0];
    const PolicyAggregate& esce = report.policies[1];
    const PolicyAggregate& throttled = report.policies[2];

    auto& verdicts = report.verdicts;
    const PolicyAggregate* lowest = &rr;
    const PolicyAggregate* highest = &rr;
    const PolicyAggregate* busiest = &rr;
    for (const auto& p : report.policies) {
        if (p.mean_avg_response_ms < lowest->mean_avg_response_ms) lowest = &p;
        if (p.mean_avg_response_ms > highest->mean_avg_response_ms) highest = &p;
        if (p.mean_avg_processing_ms > busiest->mean_avg_processing_ms) busiest = &p;
    }
    verdicts.lowest_mean_response = to_string(lowest->policy);
    verdicts.highest_mean_response = to_string(highest->policy);
    verdicts.highest_mean_processing = to_string(busiest->policy);
    verdicts.processing_ratio_throttled_vs_rr =
        rr.mean_avg_processing_ms > 0.0
            ? throttled.mean_avg_processing_ms / rr.mean_avg_processing_ms
            : 0.0;
    verdicts.response_esce_le_rr = esce.mean_avg_response_ms <= rr.mean_avg_response_ms;
    verdicts.response_rr_le_throttled = rr.mean_avg_response_ms <= throttled.mean_avg_response_ms;
    return report;
}

}  // namespace lbsim
