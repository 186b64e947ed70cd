#include "lbsim/config_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace lbsim {

std::string ConfigError::render(int line, const std::string& field, const std::string& message) {
    std::string out = "config error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " (" + field + ")";
    out += ": " + message;
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const std::string& value, int line, const std::string& field) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        throw ConfigError(line, field, "expected an integer, got '" + value + "'");
    return v;
}

double parse_double(const std::string& value, int line, const std::string& field) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        throw ConfigError(line, field, "expected a number, got '" + value + "'");
    return v;
}

bool parse_bool(const std::string& value, int line, const std::string& field) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(line, field, "expected true or false, got '" + value + "'");
}

std::vector<double> parse_number_list(const std::string& value, int line,
                                      const std::string& field) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string token;
    while (in >> token) out.push_back(parse_double(token, line, field));
    return out;
}

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v) {
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

struct PendingVmFleet {
    bool uses_shorthand = false;
    bool uses_vm_lines = false;
    std::int64_t count = 5;
    std::int64_t mips = 200'000;
    std::int64_t memory = 1'073'741'824LL;
    std::int64_t bandwidth = 1'000'000;
    std::vector<VmSpec> explicit_vms;
    int line = 0;
};

struct ParserState {
    SimulationConfig cfg;
    bool regions_given = false;
    std::map<std::string, std::size_t> ub_index;
    std::map<std::string, std::size_t> dc_index;
    std::vector<PendingVmFleet> fleets;      // parallel to cfg.data_centers
    std::vector<std::pair<int, std::vector<double>>> latency_rows;  // (line, values)
    int latency_line = 0;
    bool latency_given = false;
};

enum class Section { None, Simulation, Availability, Latency, UserBase, DataCenter };

void apply_simulation_key(ParserState& st, const std::string& key, const std::string& value,
                          int line) {
    auto& cfg = st.cfg;
    if (key == "regions") {
        cfg.regions = static_cast<int>(parse_int(value, line, key));
        st.regions_given = true;
    } else if (key == "policy") {
        if (!policy_from_string(value, cfg.policy))
            throw ConfigError(line, key, "unknown policy '" + value + "' (rr|esce|throttled)");
    } else if (key == "mode") {
        if (!mode_from_string(value, cfg.scheduling_mode))
            throw ConfigError(line, key, "unknown scheduling mode '" + value + "' (ts|ss)");
    } else if (key == "threshold") {
        cfg.throttle_threshold = static_cast<int>(parse_int(value, line, key));
    } else if (key == "duration_hours") {
        cfg.duration_hours = parse_double(value, line, key);
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(value, line, key));
    } else if (key == "jitter_ms") {
        cfg.jitter_ms = parse_double(value, line, key);
    } else {
        throw ConfigError(line, key, "unknown key in [simulation]");
    }
}

void apply_availability_key(ParserState& st, const std::string& key, const std::string& value,
                            int line) {
    auto& a = st.cfg.availability;
    if (key == "enabled") a.enabled = parse_bool(value, line, key);
    else if (key == "mp_minutes") a.mp_minutes = parse_double(value, line, key);
    else if (key == "loss_events_per_period") a.loss_events_per_period = parse_double(value, line, key);
    else if (key == "downtime_minutes") a.downtime_minutes = parse_double(value, line, key);
    else if (key == "threshold") a.threshold = parse_double(value, line, key);
    else throw ConfigError(line, key, "unknown key in [availability]");
}

void apply_userbase_key(UserBase& ub, const std::string& key, const std::string& value,
                        int line) {
    if (key == "region") ub.region = static_cast<int>(parse_int(value, line, key));
    else if (key == "users_peak") ub.users_peak = parse_int(value, line, key);
    else if (key == "users_offpeak") ub.users_offpeak = parse_int(value, line, key);
    else if (key == "peak_start") ub.peak_start_hour = static_cast<int>(parse_int(value, line, key));
    else if (key == "peak_end") ub.peak_end_hour = static_cast<int>(parse_int(value, line, key));
    else if (key == "requests_per_user_per_hour")
        ub.requests_per_user_per_hour = parse_double(value, line, key);
    else if (key == "request_size_bytes") ub.request_size_bytes = parse_int(value, line, key);
    else if (key == "request_length_mi") ub.request_length_mi = parse_int(value, line, key);
    else throw ConfigError(line, key, "unknown key in [userbase]");
}

void apply_datacenter_key(DataCenter& dc, PendingVmFleet& fleet, const std::string& key,
                          const std::string& value, int line) {
    if (key == "region") {
        dc.region = static_cast<int>(parse_int(value, line, key));
    } else if (key == "vm_count") {
        fleet.count = parse_int(value, line, key);
        fleet.uses_shorthand = true;
    } else if (key == "vm_mips") {
        fleet.mips = parse_int(value, line, key);
        fleet.uses_shorthand = true;
    } else if (key == "vm_memory_bytes") {
        fleet.memory = parse_int(value, line, key);
        fleet.uses_shorthand = true;
    } else if (key == "vm_bandwidth_bytes") {
        fleet.bandwidth = parse_int(value, line, key);
        fleet.uses_shorthand = true;
    } else if (key == "vm") {
        const auto nums = parse_number_list(value, line, key);
        if (nums.size() != 3)
            throw ConfigError(line, key, "expected 'vm = <mips> <memory> <bandwidth>'");
        VmSpec vm;
        vm.id = static_cast<int>(fleet.explicit_vms.size());
        vm.mips = static_cast<std::int64_t>(nums[0]);
        vm.memory_bytes = static_cast<std::int64_t>(nums[1]);
        vm.bandwidth_bytes = static_cast<std::int64_t>(nums[2]);
        fleet.explicit_vms.push_back(vm);
        fleet.uses_vm_lines = true;
    } else {
        throw ConfigError(line, key, "unknown key in [datacenter]");
    }
    fleet.line = line;
}

void finalize(ParserState& st) {
    auto& cfg = st.cfg;

    if (!st.regions_given) {
        int max_region = 0;
        for (const auto& ub : cfg.user_bases) max_region = std::max(max_region, ub.region);
        for (const auto& dc : cfg.data_centers) max_region = std::max(max_region, dc.region);
        cfg.regions = max_region + 1;
    }

    for (std::size_t i = 0; i < cfg.data_centers.size(); ++i) {
        auto& dc = cfg.data_centers[i];
        auto& fleet = st.fleets[i];
        if (fleet.uses_shorthand && fleet.uses_vm_lines)
            throw ConfigError(fleet.line, dc.id,
                              "mixing vm_count shorthand with explicit vm lines");
        if (fleet.uses_vm_lines) {
            dc.vms = fleet.explicit_vms;
        } else {
            if (fleet.count < 1)
                throw ConfigError(fleet.line, dc.id, "vm_count must be at least 1");
            dc.vms.clear();
            for (std::int64_t v = 0; v < fleet.count; ++v)
                dc.vms.push_back({static_cast<int>(v), fleet.mips, fleet.memory, fleet.bandwidth});
        }
    }

    if (st.latency_given) {
        if (st.latency_rows.size() != static_cast<std::size_t>(cfg.regions))
            throw ConfigError(st.latency_line, "latency",
                              "expected " + std::to_string(cfg.regions) + " rows, got " +
                                  std::to_string(st.latency_rows.size()));
        LatencyMatrix m;
        m.regions = cfg.regions;
        for (const auto& [line, values] : st.latency_rows) {
            if (values.size() != static_cast<std::size_t>(cfg.regions))
                throw ConfigError(line, "latency",
                                  "row needs " + std::to_string(cfg.regions) + " entries");
            m.one_way_ms.insert(m.one_way_ms.end(), values.begin(), values.end());
        }
        cfg.latency = m;
    } else {
        cfg.latency = LatencyMatrix::uniform(cfg.regions, 25.0, 100.0);
    }
}

}  // namespace

SimulationConfig parse_config(const std::string& text) {
    ParserState st;
    Section section = Section::None;
    std::size_t entity = 0;  // index into user_bases / data_centers
    int expected_latency_row = 0;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(line_no, "", "unterminated section header");
            const std::string inside = trim(line.substr(1, line.size() - 2));
            std::string kind = inside, name;
            if (const auto space = inside.find(' '); space != std::string::npos) {
                kind = inside.substr(0, space);
                name = trim(inside.substr(space + 1));
            }
            if (kind == "simulation") {
                section = Section::Simulation;
            } else if (kind == "availability") {
                section = Section::Availability;
            } else if (kind == "latency") {
                section = Section::Latency;
                st.latency_given = true;
                st.latency_line = line_no;
            } else if (kind == "userbase") {
                if (name.empty()) throw ConfigError(line_no, "userbase", "missing user base id");
                if (st.ub_index.count(name))
                    throw ConfigError(line_no, "userbase", "duplicate user base id '" + name + "'");
                UserBase ub;
                ub.id = name;
                ub.users_peak = 1000;
                ub.users_offpeak = 100;
                ub.peak_start_hour = 3;
                ub.peak_end_hour = 9;
                ub.requests_per_user_per_hour = 12.0;
                ub.request_size_bytes = 100;
                ub.request_length_mi = 100;
                st.ub_index[name] = st.cfg.user_bases.size();
                entity = st.cfg.user_bases.size();
                st.cfg.user_bases.push_back(ub);
                section = Section::UserBase;
            } else if (kind == "datacenter") {
                if (name.empty()) throw ConfigError(line_no, "datacenter", "missing data center id");
                if (st.dc_index.count(name))
                    throw ConfigError(line_no, "datacenter",
                                      "duplicate data center id '" + name + "'");
                DataCenter dc;
                dc.id = name;
                st.dc_index[name] = st.cfg.data_centers.size();
                entity = st.cfg.data_centers.size();
                st.cfg.data_centers.push_back(dc);
                st.fleets.emplace_back();
                st.fleets.back().line = line_no;
                section = Section::DataCenter;
            } else {
                throw ConfigError(line_no, kind, "unknown section");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "", "expected 'key = value' or a [section] header");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "", "empty key");

        switch (section) {
            case Section::None:
                throw ConfigError(line_no, key, "key outside any [section]");
            case Section::Simulation:
                apply_simulation_key(st, key, value, line_no);
                break;
            case Section::Availability:
                apply_availability_key(st, key, value, line_no);
                break;
            case Section::Latency: {
                const std::string expected = "row" + std::to_string(expected_latency_row);
                if (key != expected)
                    throw ConfigError(line_no, key, "expected latency key '" + expected + "'");
                st.latency_rows.emplace_back(line_no, parse_number_list(value, line_no, key));
                ++expected_latency_row;
                break;
            }
            case Section::UserBase:
                apply_userbase_key(st.cfg.user_bases[entity], key, value, line_no);
                break;
            case Section::DataCenter:
                apply_datacenter_key(st.cfg.data_centers[entity], st.fleets[entity], key, value,
                                     line_no);
                break;
        }
    }

    finalize(st);
    return st.cfg;
}

std::string serialize_config(const SimulationConfig& cfg) {
    std::ostringstream out;
    out << "[simulation]\n";
    out << "regions = " << cfg.regions << "\n";
    out << "policy = " << to_string(cfg.policy) << "\n";
    out << "mode = " << to_string(cfg.scheduling_mode) << "\n";
    out << "threshold = " << cfg.throttle_threshold << "\n";
    out << "duration_hours = " << format_double(cfg.duration_hours) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "jitter_ms = " << format_double(cfg.jitter_ms) << "\n";

    out << "\n[availability]\n";
    const auto& a = cfg.availability;
    out << "enabled = " << (a.enabled ? "true" : "false") << "\n";
    out << "mp_minutes = " << format_double(a.mp_minutes) << "\n";
    out << "loss_events_per_period = " << format_double(a.loss_events_per_period) << "\n";
    out << "downtime_minutes = " << format_double(a.downtime_minutes) << "\n";
    out << "threshold = " << format_double(a.threshold) << "\n";

    out << "\n[latency]\n";
    for (int i = 0; i < cfg.latency.regions; ++i) {
        out << "row" << i << " =";
        for (int j = 0; j < cfg.latency.regions; ++j)
            out << " " << format_double(cfg.latency.at(i, j));
        out << "\n";
    }

    for (const auto& ub : cfg.user_bases) {
        out << "\n[userbase " << ub.id << "]\n";
        out << "region = " << ub.region << "\n";
        out << "users_peak = " << ub.users_peak << "\n";
        out << "users_offpeak = " << ub.users_offpeak << "\n";
        out << "peak_start = " << ub.peak_start_hour << "\n";
        out << "peak_end = " << ub.peak_end_hour << "\n";
        out << "requests_per_user_per_hour = " << format_double(ub.requests_per_user_per_hour)
            << "\n";
        out << "request_size_bytes = " << ub.request_size_bytes << "\n";
        out << "request_length_mi = " << ub.request_length_mi << "\n";
    }

    for (const auto& dc : cfg.data_centers) {
        out << "\n[datacenter " << dc.id << "]\n";
        out << "region = " << dc.region << "\n";
        bool uniform = !dc.vms.empty();
        for (std::size_t v = 0; v < dc.vms.size() && uniform; ++v) {
            uniform = dc.vms[v].id == static_cast<int>(v) &&
                      dc.vms[v].mips == dc.vms[0].mips &&
                      dc.vms[v].memory_bytes == dc.vms[0].memory_bytes &&
                      dc.vms[v].bandwidth_bytes == dc.vms[0].bandwidth_bytes;
        }
        if (uniform) {
            out << "vm_count = " << dc.vms.size() << "\n";
            out << "vm_mips = " << dc.vms[0].mips << "\n";
            out << "vm_memory_bytes = " << dc.vms[0].memory_bytes << "\n";
            out << "vm_bandwidth_bytes = " << dc.vms[0].bandwidth_bytes << "\n";
        } else {
            for (const auto& vm : dc.vms)
                out << "vm = " << vm.mips << " " << vm.memory_bytes << " " << vm.bandwidth_bytes
                    << "\n";
        }
    }
    return out.str();
}

SimulationConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, path, "cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace lbsim
