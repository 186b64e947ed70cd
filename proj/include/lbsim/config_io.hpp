#pragma once

#include <stdexcept>
#include <string>

#include "lbsim/topology.hpp"

namespace lbsim {

// Raised on malformed scenario text: carries the 1-based line and, for schema
// problems, the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string field, const std::string& message)
        : std::runtime_error(render(line, field, message)),
          line_(line),
          field_(std::move(field)) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    static std::string render(int line, const std::string& field, const std::string& message);

    int line_;
    std::string field_;
};

// Parses the line-oriented `[section]` / `key = value` scenario format.
// Defaults are applied for every omitted optional key; see docs/config-format.md.
SimulationConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize_config(cfg)) == cfg.
std::string serialize_config(const SimulationConfig& cfg);

SimulationConfig load_config_file(const std::string& path);

}  // namespace lbsim
