#include "lbsim/vm_scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace lbsim {

namespace {

constexpr std::int64_t kUmiPerMi = 1'000'000;

std::int64_t muldiv_floor(std::int64_t a, std::int64_t b, std::int64_t c) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b / c);
}

std::int64_t muldiv_ceil(std::int64_t a, std::int64_t b, std::int64_t c) {
    const __int128 num = static_cast<__int128>(a) * b;
    return static_cast<std::int64_t>((num + c - 1) / c);
}

// Nanoseconds to execute `umi` micro-instructions at mips/n (rounded up so
// the work is certainly done by the returned instant).
std::int64_t exec_ns_ceil(std::int64_t umi, std::int64_t share_count, std::int64_t mips) {
    // umi / 1e6 MI / (mips / n) s = umi * n * 1000 / mips ns
    return muldiv_ceil(umi, share_count * 1000, mips);
}

}  // namespace

VmRuntime::VmRuntime(VmSpec spec, SchedulingMode mode) : spec_(spec), mode_(mode) {
    if (spec_.mips <= 0) throw std::logic_error("VmRuntime: mips must be positive");
}

void VmRuntime::advance_shares(SimTime now) {
    const std::int64_t elapsed = (now - ts_last_update_).ns();
    if (elapsed < 0) throw std::logic_error("VmRuntime: clock moved backwards");
    if (!ts_active_.empty() && elapsed > 0) {
        const auto n = static_cast<std::int64_t>(ts_active_.size());
        // Equal share per task; flooring costs each task at most 1 uMI per
        // epoch, refunded when its own completion epoch rounds up.
        const std::int64_t delivered = muldiv_floor(spec_.mips, elapsed, 1000 * n);
        for (auto& task : ts_active_) {
            task.remaining_umi -= std::min(task.remaining_umi, delivered);
        }
    }
    ts_last_update_ = now;
}

void VmRuntime::ss_start(std::int64_t request, std::int64_t length_mi, SimTime now) {
    ss_busy_ = true;
    ss_running_.request = request;
    ss_running_.completion_at =
        now + SimTime::from_ns(exec_ns_ceil(length_mi * kUmiPerMi, 1, spec_.mips));
}

std::vector<VmRuntime::Started> VmRuntime::admit(std::int64_t request, std::int64_t length_mi,
                                                 SimTime now) {
    if (length_mi <= 0) throw std::logic_error("VmRuntime: task length must be positive");
    ++generation_;
    std::vector<Started> started;

    if (mode_ == SchedulingMode::TimeSharedPreemptive) {
        for (const auto& t : ts_active_) {
            if (t.request == request)
                throw std::logic_error("VmRuntime: request admitted twice");
        }
        advance_shares(now);
        ts_active_.push_back({request, length_mi * kUmiPerMi, admit_seq_++});
        started.push_back({request, now});
        return started;
    }

    if (ss_busy_ && ss_running_.request == request)
        throw std::logic_error("VmRuntime: request admitted twice");
    for (const auto& q : ss_queue_) {
        if (q.request == request) throw std::logic_error("VmRuntime: request admitted twice");
    }
    if (!ss_busy_) {
        ss_start(request, length_mi, now);
        started.push_back({request, now});
    } else {
        ss_queue_.push_back({request, length_mi});
    }
    return started;
}

std::vector<VmRuntime::Started> VmRuntime::complete(std::int64_t request, SimTime now) {
    ++generation_;
    std::vector<Started> started;

    if (mode_ == SchedulingMode::TimeSharedPreemptive) {
        advance_shares(now);
        const auto it = std::find_if(ts_active_.begin(), ts_active_.end(),
                                     [&](const TsTask& t) { return t.request == request; });
        if (it == ts_active_.end())
            throw std::logic_error("VmRuntime: completing a task that is not active");
        if (it->remaining_umi != 0)
            throw std::logic_error("VmRuntime: completing a task before it is due");
        ts_active_.erase(it);
        return started;
    }

    if (!ss_busy_ || ss_running_.request != request)
        throw std::logic_error("VmRuntime: completing a task that is not running");
    if (ss_running_.completion_at != now)
        throw std::logic_error("VmRuntime: completing a task before it is due");
    ss_busy_ = false;
    if (!ss_queue_.empty()) {
        const SsQueued next = ss_queue_.front();
        ss_queue_.pop_front();
        ss_start(next.request, next.length_mi, now);
        started.push_back({next.request, now});
    }
    return started;
}

VmRuntime::NextCompletion VmRuntime::next_completion() const {
    NextCompletion next;
    if (mode_ == SchedulingMode::TimeSharedPreemptive) {
        if (ts_active_.empty()) return next;
        const TsTask* due = &ts_active_.front();
        for (const auto& t : ts_active_) {
            if (t.remaining_umi < due->remaining_umi ||
                (t.remaining_umi == due->remaining_umi && t.admit_seq < due->admit_seq)) {
                due = &t;
            }
        }
        next.has = true;
        next.request = due->request;
        next.at = ts_last_update_ +
                  SimTime::from_ns(exec_ns_ceil(
                      due->remaining_umi, static_cast<std::int64_t>(ts_active_.size()),
                      spec_.mips));
        return next;
    }
    if (!ss_busy_) return next;
    next.has = true;
    next.request = ss_running_.request;
    next.at = ss_running_.completion_at;
    return next;
}

int VmRuntime::active_count() const {
    if (mode_ == SchedulingMode::TimeSharedPreemptive)
        return static_cast<int>(ts_active_.size());
    return ss_busy_ ? 1 : 0;
}

std::size_t VmRuntime::queue_length() const { return ss_queue_.size(); }

bool VmRuntime::idle() const { return active_count() == 0 && ss_queue_.empty(); }

double service_time_ms(const Request& req) {
    if (!req.started || !req.finished)
        throw std::logic_error("service_time: request has no service interval yet");
    return (req.service_end - req.service_start).millis();
}

double queue_wait_ms(const Request& req) {
    if (!req.started || !req.dispatched)
        throw std::logic_error("queue_wait: request has not started service yet");
    return (req.service_start - req.serving_dc_arrival).millis();
}

}  // namespace lbsim
