// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uavrelay/montecarlo.hpp"
#include "uavrelay/opt3d.hpp"
#include "uavrelay/relay.hpp"

namespace uavrelay {

inline constexpr const char* library_version = "0.1.0";

struct Scenario {
    System system;
    OptimizerSettings optimizer;
    McSettings mc;

    void validate() const;
};

// Reference configuration: ten sensors between (700, 800) and (2000, 2000) with powers
// 0.5 to 5 W, a 500 m cloud layer on a 500 m dirt layer, 100 W hover power.
Scenario default_scenario();

Scenario parse_scenario(std::string_view text, std::string_view source = "<string>");
Scenario load_scenario(const std::string& path);
// Canonical text form: fixed key order, shortest round-trip numbers.
std::string serialize_scenario(const Scenario& s);
// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string scenario_digest(const Scenario& s);
// Applies one "section.key" = value override and revalidates.
void set_scenario_value(Scenario& s, std::string_view dotted_key, std::string_view value);

std::string format_double(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<bool> is_capacity;  // converted when writing in bits
    std::vector<std::vector<double>> rows;

    void add_column(std::string name, bool capacity = false);
};

std::string to_csv(const Table& t, CapacityUnit unit);

struct ResultRecord {
    std::string command;
    std::string digest;
    std::string started_at;
    std::string finished_at;
    CapacityUnit unit = CapacityUnit::nats;
    Table outputs;
};

std::string to_json(const ResultRecord& r);
std::string utc_timestamp();

}  // namespace uavrelay
