#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "lbsim/balancer.hpp"
#include "lbsim/rng.hpp"
#include "lbsim/topology.hpp"

using namespace lbsim;

namespace {

// Brute-force references the implementations are checked against.
int argmin_oracle(const std::vector<int>& counts) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(counts.size()); ++i) {
        if (counts[i] < counts[best]) best = i;
    }
    return best;
}

std::optional<int> first_fit_oracle(const std::vector<int>& counts, int threshold) {
    for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
        if (counts[i] < threshold) return i;
    }
    return std::nullopt;
}

// Every count vector of the given length with entries in [0, max_count].
void for_each_vector(int length, int max_count, const std::function<void(std::vector<int>&)>& fn) {
    std::vector<int> v(length, 0);
    while (true) {
        fn(v);
        int pos = 0;
        while (pos < length) {
            if (++v[pos] <= max_count) break;
            v[pos++] = 0;
        }
        if (pos == length) return;
    }
}

}  // namespace

TEST_CASE("round robin cycles through the fleet") {
    RoundRobinState state;
    std::vector<int> seen;
    for (int i = 0; i < 5; ++i) seen.push_back(rr_next(state, 3));
    CHECK(seen == std::vector<int>{0, 1, 2, 0, 1});

    RoundRobinState single;
    for (int i = 0; i < 4; ++i) CHECK(rr_next(single, 1) == 0);
}

TEST_CASE("round robin hands out exactly k picks per VM over 3k calls") {
    RngStream rng(3, 0);
    for (int round = 0; round < 20; ++round) {
        const int k = 1 + static_cast<int>(rng.next_below(40));
        RoundRobinState state;
        std::map<int, int> picks;
        for (int i = 0; i < 3 * k; ++i) ++picks[rr_next(state, 3)];
        for (int vm = 0; vm < 3; ++vm) CHECK(picks[vm] == k);
    }
}

TEST_CASE("round robin counts never diverge by more than one in any window") {
    RngStream rng(29, 0);
    for (int vms = 1; vms <= 6; ++vms) {
        RoundRobinState state;
        std::vector<int> picks(static_cast<std::size_t>(vms), 0);
        const int calls = 50 + static_cast<int>(rng.next_below(200));
        for (int i = 0; i < calls; ++i) {
            ++picks[static_cast<std::size_t>(rr_next(state, vms))];
            const auto [lo, hi] = std::minmax_element(picks.begin(), picks.end());
            CHECK(*hi - *lo <= 1);
        }
    }
}

TEST_CASE("masked round robin skips ineligible VMs and stays fair") {
    RoundRobinState state;
    const std::vector<bool> eligible{true, false, true, true};
    std::vector<int> seen;
    for (int i = 0; i < 6; ++i) seen.push_back(*rr_next_masked(state, eligible));
    CHECK(seen == std::vector<int>{0, 2, 3, 0, 2, 3});
    CHECK_FALSE(rr_next_masked(state, {false, false}).has_value());
}

TEST_CASE("esce picks the least loaded VM, lowest id on ties") {
    CHECK(esce_next({{2, 0, 1}}) == 1);
    CHECK(esce_next({{3, 3, 3}}) == 0);
}

TEST_CASE("esce equals the exhaustive argmin oracle") {
    for (int length = 1; length <= 6; ++length) {
        for_each_vector(length, 4, [&](std::vector<int>& counts) {
            EsceState state{counts};
            CHECK(esce_next(state) == argmin_oracle(counts));
        });
    }
}

TEST_CASE("throttled returns the first VM under threshold or nothing") {
    CHECK(*throttled_next({{1, 0, 1}, 1}) == 1);
    CHECK_FALSE(throttled_next({{1, 1, 1}, 1}).has_value());
}

TEST_CASE("throttled equals the exhaustive first-fit oracle") {
    for (int threshold = 1; threshold <= 4; ++threshold) {
        for (int length = 1; length <= 6; ++length) {
            for_each_vector(length, 4, [&](std::vector<int>& counts) {
                ThrottledState state{counts, threshold};
                const auto got = throttled_next(state);
                const auto expected = first_fit_oracle(counts, threshold);
                CHECK(got == expected);
            });
        }
    }
}

TEST_CASE("allocate and release are inverse") {
    EsceState state{{0, 0, 0}};
    notify_allocate(state, 1);
    notify_release(state, 1);
    CHECK(state.active == std::vector<int>{0, 0, 0});

    for (int i = 0; i < 7; ++i) notify_allocate(state, 2);
    CHECK(state.active[2] == 7);
}

TEST_CASE("releasing a zero counter fails loudly") {
    EsceState esce{{0}};
    CHECK_THROWS_AS(notify_release(esce, 0), std::logic_error);
    ThrottledState throttled{{0}, 1};
    CHECK_THROWS_AS(notify_release(throttled, 0), std::logic_error);
    notify_allocate(throttled, 0);
    CHECK_THROWS_AS(notify_allocate(throttled, 0), std::logic_error);  // past the cap
}

TEST_CASE("random interleavings track reference counters") {
    RngStream rng(17, 0);
    EsceState state{std::vector<int>(4, 0)};
    std::vector<int> reference(4, 0);
    for (int step = 0; step < 20'000; ++step) {
        const int vm = static_cast<int>(rng.next_below(4));
        const bool can_release = reference[vm] > 0;
        if (can_release && rng.next_u01() < 0.5) {
            notify_release(state, vm);
            --reference[vm];
        } else {
            notify_allocate(state, vm);
            ++reference[vm];
        }
        CHECK(state.active == reference);
    }
}

TEST_CASE("the broker prefers the closest data center") {
    const SimulationConfig cfg = default_reference_config();
    const BrokerTable table = build_broker_table(cfg);
    for (int u = 0; u < 6; ++u) {
        // Symmetric default: each user base maps to the data center in its
        // own region.
        CHECK(broker_select(u, table) == u);
        // Preference lists are permutations of every data center.
        std::vector<int> sorted = table.preference[u];
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});
    }
}

TEST_CASE("a single data center serves every user base") {
    SimulationConfig cfg = default_reference_config();
    cfg.data_centers.resize(1);
    const BrokerTable table = build_broker_table(cfg);
    for (int u = 0; u < 6; ++u) CHECK(broker_select(u, table) == 0);
}

TEST_CASE("equidistant data centers tie-break to the lower id") {
    SimulationConfig cfg = default_reference_config();
    // Two data centers in the same region as UB1: identical one-way delay.
    cfg.data_centers[1].region = 0;
    const BrokerTable table = build_broker_table(cfg);
    CHECK(broker_select(0, table) == 0);
}
