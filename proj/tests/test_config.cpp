#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "lbsim/config_io.hpp"
#include "lbsim/rng.hpp"
#include "lbsim/topology.hpp"

using namespace lbsim;

namespace {

const char* kMinimalDoc = R"([simulation]
regions = 1

[userbase UB1]
region = 0

[datacenter DC1]
region = 0
vm_count = 1
)";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("minimal document fills in defaults and validates") {
    const SimulationConfig cfg = parse_config(kMinimalDoc);
    CHECK(cfg.regions == 1);
    REQUIRE(cfg.user_bases.size() == 1);
    CHECK(cfg.user_bases[0].users_peak == 1000);
    CHECK(cfg.user_bases[0].users_offpeak == 100);
    CHECK(cfg.user_bases[0].requests_per_user_per_hour == 12.0);
    CHECK(cfg.user_bases[0].request_length_mi == 100);
    REQUIRE(cfg.data_centers.size() == 1);
    REQUIRE(cfg.data_centers[0].vms.size() == 1);
    CHECK(cfg.data_centers[0].vms[0].mips == 200'000);
    CHECK(cfg.latency.at(0, 0) == 25.0);
    CHECK(cfg.seed == 0);  // documented default when omitted
    CHECK(cfg.policy == PolicyKind::RoundRobin);
    CHECK(validate_config(cfg).empty());
}

TEST_CASE("duplicate data center id is rejected by name") {
    const std::string doc = std::string(kMinimalDoc) + "\n[datacenter DC1]\nregion = 0\n";
    try {
        parse_config(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("DC1") != std::string::npos);
        CHECK(e.line() > 0);
    }
}

TEST_CASE("syntax errors report their line") {
    try {
        parse_config("[simulation]\nregions 6\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_config("[simulation\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("key = 1\n"), ConfigError);           // outside any section
    CHECK_THROWS_AS(parse_config("[simulation]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[simulation]\nregions = owl\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[orbit]\nx = 1\n"), ConfigError);
}

TEST_CASE("latency rows must match the region count") {
    const std::string doc = R"([simulation]
regions = 2

[latency]
row0 = 10 20

[userbase UB1]
region = 0

[datacenter DC1]
region = 1
)";
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("validate flags broken invariants with entity names") {
    SimulationConfig cfg = default_reference_config();
    CHECK(validate_config(cfg).empty());

    SUBCASE("zero mips names the VM") {
        cfg.data_centers[2].vms[1].mips = 0;
        const auto violations = validate_config(cfg);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].entity == "DC3/vm1");
    }
    SUBCASE("dangling user base region") {
        cfg.user_bases[4].region = 7;
        const auto violations = validate_config(cfg);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].entity == "UB5");
    }
    SUBCASE("dangling data center region") {
        cfg.data_centers[0].region = -1;
        CHECK(validate_config(cfg).size() == 1);
    }
    SUBCASE("peak below off-peak") {
        cfg.user_bases[0].users_peak = 10;
        cfg.user_bases[0].users_offpeak = 20;
        CHECK(validate_config(cfg).size() == 1);
    }
    SUBCASE("asymmetric latency") {
        cfg.latency.set(0, 1, 55.0);
        CHECK(!validate_config(cfg).empty());
    }
    SUBCASE("zero duration") {
        cfg.duration_hours = 0.0;
        CHECK(validate_config(cfg).size() == 1);
    }
    SUBCASE("unsatisfiable availability screening") {
        cfg.availability.enabled = true;
        cfg.availability.loss_events_per_period = 30.0;
        cfg.availability.downtime_minutes = 10.0;  // rating clamps to 0
        cfg.availability.threshold = 0.9;
        CHECK(validate_config(cfg).size() == 1);
    }
}

TEST_CASE("the shipped default scenario matches the reported experiment frame") {
    const SimulationConfig cfg = default_reference_config();
    REQUIRE(cfg.user_bases.size() == 6);
    REQUIRE(cfg.data_centers.size() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(cfg.user_bases[i].id == "UB" + std::to_string(i + 1));
        CHECK(cfg.data_centers[i].id == "DC" + std::to_string(i + 1));
        CHECK(cfg.data_centers[i].vms.size() == 5);
    }
    CHECK(validate_config(cfg).empty());
    CHECK(default_reference_config() == cfg);  // structurally deterministic

    // Unloaded numbers behind the calibration: 0.5 ms execution, ~50 ms round
    // trip to the local data center.
    CHECK(cfg.data_centers[0].vms[0].mips == 200'000);
    CHECK(cfg.user_bases[0].request_length_mi == 100);
    CHECK(cfg.latency.at(0, 0) == 25.0);
}

TEST_CASE("serialize/parse round-trips configs exactly") {
    CHECK(parse_config(serialize_config(default_reference_config())) == default_reference_config());
    CHECK(parse_config(serialize_config(overload_compare_config())) == overload_compare_config());

    SimulationConfig custom = default_reference_config();
    custom.policy = PolicyKind::Throttled;
    custom.scheduling_mode = SchedulingMode::SpaceSharedNonPreemptive;
    custom.throttle_threshold = 3;
    custom.duration_hours = 0.25;
    custom.seed = 987654321;
    custom.jitter_ms = 2.5;
    custom.latency.set(0, 1, 87.5);
    custom.latency.set(1, 0, 87.5);
    custom.availability.enabled = true;
    custom.availability.threshold = 0.5;
    custom.data_centers[1].vms = {{0, 1000, 1 << 20, 500}, {1, 2000, 1 << 21, 750}};
    custom.user_bases[3].requests_per_user_per_hour = 0.125;
    CHECK(parse_config(serialize_config(custom)) == custom);
}

TEST_CASE("random configs survive the round trip") {
    RngStream rng(99, 0);
    for (int i = 0; i < 50; ++i) {
        SimulationConfig cfg;
        cfg.regions = 1 + static_cast<int>(rng.next_below(4));
        cfg.latency = LatencyMatrix::uniform(cfg.regions, rng.uniform(1.0, 30.0),
                                             rng.uniform(30.0, 200.0));
        const int ubs = 1 + static_cast<int>(rng.next_below(3));
        for (int u = 0; u < ubs; ++u) {
            UserBase ub;
            ub.id = "UB" + std::to_string(u + 1);
            ub.region = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.regions)));
            ub.users_peak = 50 + static_cast<std::int64_t>(rng.next_below(1000));
            ub.users_offpeak = rng.next_below(50);
            ub.peak_start_hour = static_cast<int>(rng.next_below(12));
            ub.peak_end_hour = ub.peak_start_hour + static_cast<int>(rng.next_below(12));
            ub.requests_per_user_per_hour = rng.uniform(0.5, 30.0);
            ub.request_size_bytes = 100;
            ub.request_length_mi = 1 + static_cast<std::int64_t>(rng.next_below(500));
            cfg.user_bases.push_back(ub);
        }
        const int dcs = 1 + static_cast<int>(rng.next_below(3));
        for (int d = 0; d < dcs; ++d) {
            DataCenter dc;
            dc.id = "DC" + std::to_string(d + 1);
            dc.region = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.regions)));
            const int vms = 1 + static_cast<int>(rng.next_below(4));
            for (int v = 0; v < vms; ++v)
                dc.vms.push_back({v, 1000 + static_cast<std::int64_t>(rng.next_below(100000)),
                                  1 << 20, 1000});
            cfg.data_centers.push_back(dc);
        }
        cfg.duration_hours = rng.uniform(0.05, 2.0);
        cfg.seed = rng.next_u64() >> 1;
        cfg.jitter_ms = 0.5;
        CHECK(parse_config(serialize_config(cfg)) == cfg);
    }
}

TEST_CASE("the example file reproduces the default scenario byte for byte") {
    const std::string path = std::string(LBSIM_SOURCE_DIR) + "/configs/default.conf";
    CHECK(read_file(path) == serialize_config(default_reference_config()));

    const std::string overload_path = std::string(LBSIM_SOURCE_DIR) + "/configs/overload.conf";
    CHECK(read_file(overload_path) == serialize_config(overload_compare_config()));
}
