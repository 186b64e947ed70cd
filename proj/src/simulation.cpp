#include "lbsim/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <string>
#include <vector>

#include "lbsim/availability.hpp"
#include "lbsim/balancer.hpp"
#include "lbsim/event_engine.hpp"
#include "lbsim/metrics.hpp"
#include "lbsim/vm_scheduler.hpp"

namespace lbsim {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Arrival: return "ARRIVAL";
        case EventKind::DispatchToDc: return "DISPATCH";
        case EventKind::AssignToVm: return "ASSIGN";
        case EventKind::TaskComplete: return "COMPLETE";
        case EventKind::ResponseReturn: return "RETURN";
        case EventKind::MigrateRequest: return "MIGRATE";
        case EventKind::HourBoundary: return "HOUR";
    }
    return "?";
}

FileTraceSink::FileTraceSink(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open trace file: " + path);
}

void FileTraceSink::write(std::string_view line) {
    out_ << line << '\n';
}

namespace {

// Mutable per-data-center state owned by one run.
struct DcRuntime {
    std::vector<VmRuntime> vms;
    RoundRobinState rr;
    EsceState esce;
    ThrottledState throttled;
    std::vector<bool> vm_available;
    std::deque<std::int64_t> parked;  // waiting with every candidate saturated
    std::int64_t present = 0;         // requests currently at this data center
    std::int64_t max_present = 0;
};

class Simulation {
public:
    Simulation(const SimulationConfig& cfg, std::vector<Arrival> plan, const RunOptions& options)
        : cfg_(cfg),
          options_(options),
          plan_(std::move(plan)),
          broker_(build_broker_table(cfg)),
          jitter_rng_(cfg.seed, kJitterStream),
          store_(static_cast<int>(cfg.user_bases.size()),
                 static_cast<int>(cfg.data_centers.size()), cfg.duration_hours,
                 options.keep_samples) {
        requests_.resize(plan_.size());
        for (const auto& a : plan_) {
            Request& req = requests_[static_cast<std::size_t>(a.request_id)];
            req.id = a.request_id;
            req.source_ub = a.ub;
            req.created = a.time;
            req.length_mi = cfg_.user_bases[a.ub].request_length_mi;
            req.size_bytes = cfg_.user_bases[a.ub].request_size_bytes;
        }

        dcs_.reserve(cfg_.data_centers.size());
        for (const auto& dc : cfg_.data_centers) {
            DcRuntime rt;
            for (const auto& vm : dc.vms) rt.vms.emplace_back(vm, cfg_.scheduling_mode);
            rt.esce.active.assign(dc.vms.size(), 0);
            rt.throttled.active.assign(dc.vms.size(), 0);
            rt.throttled.threshold = cfg_.throttle_threshold;
            rt.vm_available.assign(dc.vms.size(), true);
            dcs_.push_back(std::move(rt));
        }
        if (cfg_.availability.enabled) refresh_availability();
    }

    RunResult run() {
        for (const auto& a : plan_) {
            Event e;
            e.time = a.time;
            e.kind = EventKind::Arrival;
            e.request = a.request_id;
            e.ub = a.ub;
            engine_.schedule(e);
        }
        const auto whole_hours = static_cast<std::int64_t>(cfg_.duration_hours);
        for (std::int64_t h = 1; h <= whole_hours; ++h) {
            Event e;
            e.time = SimTime::from_hours(static_cast<double>(h));
            e.kind = EventKind::HourBoundary;
            e.hour = static_cast<std::int32_t>(h);
            engine_.schedule(e);
        }

        engine_.run([this](const Event& e) { dispatch(e); });
        return finalize();
    }

private:
    static constexpr std::uint64_t kJitterStream = 1'000'000;

    void dispatch(const Event& e) {
        if (e.kind == EventKind::TaskComplete) {
            // Completion events go stale whenever their VM's task set changed
            // after scheduling; only the current generation acts.
            DcRuntime& d = dcs_[e.dc];
            if (e.generation != d.vms[e.vm].generation()) return;
        }
        trace(e);
        switch (e.kind) {
            case EventKind::Arrival: on_arrival(e); break;
            case EventKind::DispatchToDc:
            case EventKind::MigrateRequest: on_reach_dc(e); break;
            case EventKind::AssignToVm: on_assign(e); break;
            case EventKind::TaskComplete: on_complete(e); break;
            case EventKind::ResponseReturn: on_return(e); break;
            case EventKind::HourBoundary: on_hour(); break;
        }
    }

    void trace(const Event& e) {
        if (options_.trace == nullptr) return;
        char buf[128];
        int n = std::snprintf(buf, sizeof(buf), "%lld\t%s\t", static_cast<long long>(e.time.ns()),
                              to_string(e.kind));
        auto append = [&](const char* tag, std::int64_t v) {
            if (v >= 0)
                n += std::snprintf(buf + n, sizeof(buf) - static_cast<std::size_t>(n), "%s=%lld ",
                                   tag, static_cast<long long>(v));
        };
        append("req", e.request);
        append("ub", e.ub);
        append("dc", e.dc);
        append("vm", e.vm);
        append("hour", e.hour);
        if (n > 0 && buf[n - 1] == ' ') --n;
        options_.trace->write(std::string_view(buf, static_cast<std::size_t>(n)));
    }

    SimTime sample_leg(int from_region, int to_region) {
        const double base = cfg_.latency.at(from_region, to_region);
        double ms = base;
        if (cfg_.jitter_ms > 0.0) ms += jitter_rng_.uniform(-cfg_.jitter_ms, cfg_.jitter_ms);
        if (ms < 0.0) ms = 0.0;
        return SimTime::from_ms(ms);
    }

    void on_arrival(const Event& e) {
        Request& req = requests_[e.request];
        const int dc = broker_select(req.source_ub, broker_);
        const SimTime leg =
            sample_leg(cfg_.user_bases[req.source_ub].region, cfg_.data_centers[dc].region);
        req.network_ns += leg.ns();

        Event next;
        next.time = engine_.now() + leg;
        next.kind = EventKind::DispatchToDc;
        next.request = e.request;
        next.ub = req.source_ub;
        next.dc = dc;
        engine_.schedule(next);
    }

    void on_reach_dc(const Event& e) {
        Request& req = requests_[e.request];
        DcRuntime& d = dcs_[e.dc];
        d.present++;
        d.max_present = std::max(d.max_present, d.present);
        if (!req.dispatched) {
            req.dispatched = true;
            req.first_dc_arrival = engine_.now();
        }
        req.serving_dc_arrival = engine_.now();
        req.visited_dcs |= (1ULL << e.dc);
        place(e.dc, req);
    }

    // Routes a request that is physically at data center `dc`: picks a VM per
    // the active policy, or migrates / parks when the fleet is saturated.
    void place(int dc, Request& req) {
        DcRuntime& d = dcs_[dc];
        const bool masked = cfg_.availability.enabled;
        std::optional<int> vm;
        switch (cfg_.policy) {
            case PolicyKind::RoundRobin:
                vm = masked ? rr_next_masked(d.rr, d.vm_available)
                            : std::optional<int>(rr_next(d.rr, static_cast<int>(d.vms.size())));
                break;
            case PolicyKind::Esce:
                vm = masked ? esce_next_masked(d.esce, d.vm_available)
                            : std::optional<int>(esce_next(d.esce));
                if (vm && options_.check_invariants) {
                    const int chosen = d.esce.active[*vm];
                    for (int other : d.esce.active) {
                        if (other < chosen)
                            throw SimInvariantViolation("esce picked a non-minimal VM");
                    }
                }
                break;
            case PolicyKind::Throttled:
                vm = masked ? throttled_next_masked(d.throttled, d.vm_available)
                            : throttled_next(d.throttled);
                break;
        }

        if (vm) {
            allocate_and_assign(dc, *vm, req);
            return;
        }

        if (cfg_.policy == PolicyKind::Throttled) {
            // Saturated fleet: forward to the next data center the request
            // has not tried yet, in the user base's preference order.
            for (int candidate : broker_.preference[req.source_ub]) {
                if (req.visited_dcs & (1ULL << candidate)) continue;
                d.present--;
                req.migrations++;
                const SimTime leg = sample_leg(cfg_.data_centers[dc].region,
                                               cfg_.data_centers[candidate].region);
                req.network_ns += leg.ns();
                Event next;
                next.time = engine_.now() + leg;
                next.kind = EventKind::MigrateRequest;
                next.request = req.id;
                next.ub = req.source_ub;
                next.dc = candidate;
                engine_.schedule(next);
                return;
            }
        }

        // Everything saturated (or no VM currently eligible): wait at the
        // broker-preferred data center for the next release.
        const int preferred = broker_select(req.source_ub, broker_);
        if (preferred != dc) {
            d.present--;
            dcs_[preferred].present++;
            dcs_[preferred].max_present =
                std::max(dcs_[preferred].max_present, dcs_[preferred].present);
            req.serving_dc_arrival = engine_.now();
        }
        dcs_[preferred].parked.push_back(req.id);
        ++parked_total_;
    }

    void allocate_and_assign(int dc, int vm, Request& req) {
        DcRuntime& d = dcs_[dc];
        // Counters move at decision time so same-timestamp placements see the
        // true occupancy.
        notify_allocate(d.esce, vm);
        if (cfg_.policy == PolicyKind::Throttled) notify_allocate(d.throttled, vm);

        Event e;
        e.time = engine_.now();
        e.kind = EventKind::AssignToVm;
        e.request = req.id;
        e.ub = req.source_ub;
        e.dc = dc;
        e.vm = vm;
        engine_.schedule(e);
    }

    void on_assign(const Event& e) {
        Request& req = requests_[e.request];
        req.assigned_dc = e.dc;
        req.assigned_vm = e.vm;
        DcRuntime& d = dcs_[e.dc];
        for (const auto& started : d.vms[e.vm].admit(e.request, req.length_mi, engine_.now())) {
            Request& r = requests_[started.request];
            r.started = true;
            r.service_start = started.at;
        }
        reschedule_completion(e.dc, e.vm);
    }

    void reschedule_completion(int dc, int vm) {
        const auto next = dcs_[dc].vms[vm].next_completion();
        if (!next.has) return;
        Event e;
        e.time = next.at;
        e.kind = EventKind::TaskComplete;
        e.request = next.request;
        e.ub = requests_[next.request].source_ub;
        e.dc = dc;
        e.vm = vm;
        e.generation = dcs_[dc].vms[vm].generation();
        engine_.schedule(e);
    }

    void on_complete(const Event& e) {
        Request& req = requests_[e.request];
        DcRuntime& d = dcs_[e.dc];

        for (const auto& started : d.vms[e.vm].complete(e.request, engine_.now())) {
            Request& r = requests_[started.request];
            r.started = true;
            r.service_start = started.at;
        }
        req.finished = true;
        req.service_end = engine_.now();

        notify_release(d.esce, e.vm);
        if (cfg_.policy == PolicyKind::Throttled) notify_release(d.throttled, e.vm);
        if (options_.check_invariants && cfg_.policy == PolicyKind::Throttled &&
            d.throttled.active[e.vm] >= cfg_.throttle_threshold) {
            throw SimInvariantViolation("throttled active count did not drop below threshold");
        }

        d.present--;

        ServiceSample sample;
        sample.dc = e.dc;
        sample.vm = e.vm;
        sample.request = req.id;
        sample.first_dc_arrival = req.first_dc_arrival;
        sample.service_start = req.service_start;
        sample.service_end = req.service_end;
        sample.migrations = req.migrations;
        sample.queue_wait_ms = (req.service_start - req.serving_dc_arrival).millis();
        store_.record_service(sample);

        const SimTime leg = sample_leg(cfg_.data_centers[e.dc].region,
                                       cfg_.user_bases[req.source_ub].region);
        req.network_ns += leg.ns();
        Event ret;
        ret.time = engine_.now() + leg;
        ret.kind = EventKind::ResponseReturn;
        ret.request = req.id;
        ret.ub = req.source_ub;
        ret.dc = e.dc;
        engine_.schedule(ret);

        reschedule_completion(e.dc, e.vm);
        drain_parked(e.dc);
    }

    void drain_parked(int dc) {
        DcRuntime& d = dcs_[dc];
        while (!d.parked.empty()) {
            const bool masked = cfg_.availability.enabled;
            std::optional<int> vm;
            switch (cfg_.policy) {
                case PolicyKind::RoundRobin:
                    vm = masked
                             ? rr_next_masked(d.rr, d.vm_available)
                             : std::optional<int>(rr_next(d.rr, static_cast<int>(d.vms.size())));
                    break;
                case PolicyKind::Esce:
                    vm = masked ? esce_next_masked(d.esce, d.vm_available)
                                : std::optional<int>(esce_next(d.esce));
                    break;
                case PolicyKind::Throttled:
                    vm = masked ? throttled_next_masked(d.throttled, d.vm_available)
                                : throttled_next(d.throttled);
                    break;
            }
            if (!vm) return;
            const std::int64_t id = d.parked.front();
            d.parked.pop_front();
            allocate_and_assign(dc, *vm, requests_[id]);
        }
    }

    void on_return(const Event& e) {
        Request& req = requests_[e.request];
        req.returned_set = true;
        req.returned = engine_.now();
        ++returned_count_;

        if (options_.check_invariants) {
            const std::int64_t wait_ns = (req.service_start - req.serving_dc_arrival).ns();
            const std::int64_t exec_ns = (req.service_end - req.service_start).ns();
            const std::int64_t response_ns = (req.returned - req.created).ns();
            if (response_ns != req.network_ns + wait_ns + exec_ns) {
                throw SimInvariantViolation(
                    "response decomposition mismatch for request " + std::to_string(req.id));
            }
        }

        ResponseSample sample;
        sample.ub = req.source_ub;
        sample.request = req.id;
        sample.created = req.created;
        sample.returned = req.returned;
        store_.record_response(sample);
    }

    void on_hour() {
        if (!cfg_.availability.enabled) return;
        refresh_availability();
        for (std::size_t dc = 0; dc < dcs_.size(); ++dc) drain_parked(static_cast<int>(dc));
    }

    void refresh_availability() {
        const auto& a = cfg_.availability;
        const bool usable = is_available(
            {a.mp_minutes, a.loss_events_per_period, a.downtime_minutes}, a.threshold);
        for (auto& d : dcs_) d.vm_available.assign(d.vms.size(), usable);
    }

    RunResult finalize() {
        RunResult result;
        RunTotals& totals = result.totals;
        totals.generated = static_cast<std::int64_t>(plan_.size());
        totals.returned = returned_count_;
        totals.dropped = totals.generated - totals.returned;
        totals.parked_requests = parked_total_;
        for (const auto& req : requests_) {
            totals.migrations += req.migrations;
            if (req.migrations > 0) ++totals.migrated_requests;
        }
        for (const auto& d : dcs_) totals.max_concurrent_per_dc.push_back(d.max_present);

        if (options_.check_invariants && totals.dropped != 0) {
            throw SimInvariantViolation("lost requests: generated " +
                                        std::to_string(totals.generated) + ", returned " +
                                        std::to_string(totals.returned));
        }

        std::vector<std::string> ub_ids, dc_ids;
        for (const auto& ub : cfg_.user_bases) ub_ids.push_back(ub.id);
        for (const auto& dc : cfg_.data_centers) dc_ids.push_back(dc.id);
        result.responses = store_.summarize_responses(ub_ids);
        result.processing = store_.summarize_processing(dc_ids);
        result.loading = store_.hourly_loading(dc_ids);
        if (options_.keep_samples) {
            result.response_samples = store_.response_samples();
            result.service_samples = store_.service_samples();
            result.arrivals = plan_;
        }
        return result;
    }

    const SimulationConfig& cfg_;
    RunOptions options_;
    std::vector<Arrival> plan_;
    BrokerTable broker_;
    RngStream jitter_rng_;
    MetricStore store_;
    EventEngine engine_;
    std::vector<Request> requests_;
    std::vector<DcRuntime> dcs_;
    std::int64_t returned_count_ = 0;
    std::int64_t parked_total_ = 0;
};

}  // namespace

RunResult run_simulation_with_plan(const SimulationConfig& cfg, std::vector<Arrival> plan,
                                   const RunOptions& options) {
    Simulation sim(cfg, std::move(plan), options);
    return sim.run();
}

RunResult run_simulation(const SimulationConfig& cfg, const RunOptions& options) {
    return run_simulation_with_plan(cfg, build_arrival_plan(cfg), options);
}

}  // namespace lbsim
