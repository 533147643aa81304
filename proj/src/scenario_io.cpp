// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/scenario.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "uavrelay/error.hpp"

namespace uavrelay {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::parse: return "parse";
        case ErrorCode::validation: return "validation";
        case ErrorCode::infeasible: return "infeasible";
        case ErrorCode::quadrature: return "quadrature";
        case ErrorCode::budget: return "budget";
        case ErrorCode::io: return "io";
        case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

void Scenario::validate() const {
    system.validate();
    optimizer.validate();
    mc.validate();
    for (const Sensor& s : system.sensors.sensors)
        require(s.x >= 0.0 && s.x <= optimizer.box_size && s.y >= 0.0 && s.y <= optimizer.box_size,
                "optimizer.box_size", "the search box [0, D]^2 must contain every sensor");
}

Scenario default_scenario() {
    Scenario s;
    const double xs[] = {700, 800, 900, 1000, 1200, 1400, 1500, 1600, 1800, 2000};
    const double ys[] = {800, 900, 1000, 1200, 1300, 1500, 1600, 1700, 1900, 2000};
    for (int m = 0; m < 10; ++m) s.system.sensors.sensors.push_back({xs[m], ys[m], 0.5 * (m + 1)});
    return s;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Thrown by value parsers; the caller adds line and field.
struct BadValue {
    std::string why;
};

double to_double(std::string_view v) {
    v = trim(v);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw BadValue{"expected a number, got '" + std::string(v) + "'"};
    return out;
}

template <class Int>
Int to_integer(std::string_view v) {
    v = trim(v);
    Int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw BadValue{"expected an integer, got '" + std::string(v) + "'"};
    return out;
}

bool to_bool(std::string_view v) {
    v = trim(v);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw BadValue{"expected true or false, got '" + std::string(v) + "'"};
}

std::vector<double> to_list(std::string_view v) {
    std::vector<double> out;
    while (true) {
        const auto comma = v.find(',');
        out.push_back(to_double(v.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

std::string join(const std::vector<double>& vals) {
    std::string out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ", ";
        out += format_double(vals[i]);
    }
    return out;
}

struct Field {
    const char* section;
    const char* key;
    std::function<void(Scenario&, std::string_view)> set;
    std::function<std::optional<std::string>(const Scenario&)> get;
};

template <class Getter>
Field number(const char* section, const char* key, Getter ref) {
    return {section, key, [ref](Scenario& s, std::string_view v) { ref(s) = to_double(v); },
            [ref](const Scenario& s) -> std::optional<std::string> {
                return format_double(ref(s));
            }};
}

template <class Int, class Getter>
Field integer(const char* section, const char* key, Getter ref) {
    return {section, key, [ref](Scenario& s, std::string_view v) { ref(s) = to_integer<Int>(v); },
            [ref](const Scenario& s) -> std::optional<std::string> {
                return std::to_string(ref(s));
            }};
}

enum class Coord { x, y, power };

Field sensor_array(const char* key, Coord c) {
    auto member = [c](Sensor& s) -> double& { return c == Coord::x ? s.x : c == Coord::y ? s.y : s.power; };
    return {"sensors", key,
            [member](Scenario& s, std::string_view v) {
                const std::vector<double> vals = to_list(v);
                auto& sensors = s.system.sensors.sensors;
                if (vals.size() != sensors.size())
                    throw BadValue{"has " + std::to_string(vals.size()) + " entries but the field has " +
                                   std::to_string(sensors.size()) + " sensors"};
                for (std::size_t m = 0; m < vals.size(); ++m) member(sensors[m]) = vals[m];
            },
            [member](const Scenario& s) -> std::optional<std::string> {
                std::vector<double> vals;
                for (Sensor sensor : s.system.sensors.sensors) vals.push_back(member(sensor));
                return join(vals);
            }};
}

ScintillationModel& scint(Scenario& s) {
    auto& sc = s.system.link.scintillation;
    if (!sc) sc = ScintillationModel::moderate();
    return *sc;
}

template <class Getter>
Field scint_number(const char* key, Getter ref) {
    return {"optical_link", key, [ref](Scenario& s, std::string_view v) { ref(scint(s)) = to_double(v); },
            [ref](const Scenario& s) -> std::optional<std::string> {
                if (!s.system.link.scintillation) return std::nullopt;
                return format_double(ref(*s.system.link.scintillation));
            }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(sensor_array("x", Coord::x));
        f.push_back(sensor_array("y", Coord::y));
        f.push_back(sensor_array("power", Coord::power));
        f.push_back(number("sensors", "reference_gain", [](auto& s) -> auto& { return s.system.sensors.reference_gain; }));
        f.push_back(number("sensors", "noise_power", [](auto& s) -> auto& { return s.system.sensors.noise_power; }));

        f.push_back(number("atmosphere", "cloud_thickness", [](auto& s) -> auto& { return s.system.atmosphere.cloud_thickness; }));
        f.push_back(number("atmosphere", "cloud_base", [](auto& s) -> auto& { return s.system.atmosphere.cloud_base; }));
        f.push_back(number("atmosphere", "laser_ext_air", [](auto& s) -> auto& { return s.system.atmosphere.laser_ext_air; }));
        f.push_back(number("atmosphere", "laser_ext_cloud", [](auto& s) -> auto& { return s.system.atmosphere.laser_ext_cloud; }));
        f.push_back(number("atmosphere", "solar_ext_cloud", [](auto& s) -> auto& { return s.system.atmosphere.solar_ext_cloud; }));
        f.push_back(number("atmosphere", "solar_ext_air", [](auto& s) -> auto& { return s.system.atmosphere.solar_ext_air; }));

        f.push_back(number("optical_link", "photo_eff", [](auto& s) -> auto& { return s.system.link.photo_eff; }));
        f.push_back(number("optical_link", "noise_power", [](auto& s) -> auto& { return s.system.link.noise_power; }));
        f.push_back(number("optical_link", "aperture_radius", [](auto& s) -> auto& { return s.system.link.pointing.aperture_radius; }));
        f.push_back(number("optical_link", "beamwidth", [](auto& s) -> auto& { return s.system.link.pointing.beamwidth; }));
        f.push_back(number("optical_link", "jitter", [](auto& s) -> auto& { return s.system.link.pointing.jitter; }));
        f.push_back({"optical_link", "fading",
                     [](Scenario& s, std::string_view v) {
                         const auto m = parse_fading(trim(v));
                         if (!m) throw BadValue{"expected pointing or composite"};
                         s.system.link.fading = *m;
                     },
                     [](const Scenario& s) -> std::optional<std::string> { return to_string(s.system.link.fading); }});
        f.push_back({"optical_link", "scintillation",
                     [](Scenario& s, std::string_view v) {
                         v = trim(v);
                         if (v == "none") {
                             s.system.link.scintillation.reset();
                         } else if (v == "custom") {
                             scint(s);
                         } else if (auto p = ScintillationModel::preset(v)) {
                             s.system.link.scintillation = *p;
                         } else {
                             throw BadValue{"expected weak, moderate, strong, custom or none"};
                         }
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         return std::string(s.system.link.scintillation ? "custom" : "none");
                     }});
        f.push_back(scint_number("scint_a", [](auto& m) -> auto& { return m.shape_a; }));
        f.push_back(scint_number("scint_b", [](auto& m) -> auto& { return m.shape_b; }));
        f.push_back(scint_number("scint_scale", [](auto& m) -> auto& { return m.scale; }));

        f.push_back(number("solar_platform", "photo_eff", [](auto& s) -> auto& { return s.system.platform.photo_eff; }));
        f.push_back(number("solar_platform", "panel_area", [](auto& s) -> auto& { return s.system.platform.panel_area; }));
        f.push_back(number("solar_platform", "solar_const", [](auto& s) -> auto& { return s.system.platform.solar_const; }));
        f.push_back(number("solar_platform", "transmittance_max", [](auto& s) -> auto& { return s.system.platform.transmittance_max; }));
        f.push_back(number("solar_platform", "transmittance_ext", [](auto& s) -> auto& { return s.system.platform.transmittance_ext; }));
        f.push_back(number("solar_platform", "scale_height", [](auto& s) -> auto& { return s.system.platform.scale_height; }));
        f.push_back(number("solar_platform", "uav_mass", [](auto& s) -> auto& { return s.system.platform.uav_mass; }));
        f.push_back(number("solar_platform", "gravity", [](auto& s) -> auto& { return s.system.platform.gravity; }));
        f.push_back(number("solar_platform", "rotor_radius", [](auto& s) -> auto& { return s.system.platform.rotor_radius; }));
        f.push_back(number("solar_platform", "air_density", [](auto& s) -> auto& { return s.system.platform.air_density; }));
        f.push_back({"solar_platform", "hover_power",
                     [](Scenario& s, std::string_view v) {
                         if (trim(v) == "auto")
                             s.system.platform.hover_power_override.reset();
                         else
                             s.system.platform.hover_power_override = to_double(v);
                     },
                     [](const Scenario& s) -> std::optional<std::string> {
                         const auto& o = s.system.platform.hover_power_override;
                         return o ? format_double(*o) : std::string("auto");
                     }});

        f.push_back({"relay", "scheme",
                     [](Scenario& s, std::string_view v) {
                         const auto m = parse_scheme(trim(v));
                         if (!m) throw BadValue{"expected af or df"};
                         s.system.relay.scheme = *m;
                     },
                     [](const Scenario& s) -> std::optional<std::string> { return to_string(s.system.relay.scheme); }});
        f.push_back(number("relay", "df_alpha", [](auto& s) -> auto& { return s.system.relay.df_alpha; }));
        f.push_back({"relay", "unit",
                     [](Scenario& s, std::string_view v) {
                         const auto m = parse_unit(trim(v));
                         if (!m) throw BadValue{"expected nats or bits"};
                         s.system.relay.unit = *m;
                     },
                     [](const Scenario& s) -> std::optional<std::string> { return to_string(s.system.relay.unit); }});

        f.push_back(number("optimizer", "box_size", [](auto& s) -> auto& { return s.optimizer.box_size; }));
        f.push_back(number("optimizer", "z_max", [](auto& s) -> auto& { return s.optimizer.z_max; }));
        f.push_back(integer<int>("optimizer", "grid_x", [](auto& s) -> auto& { return s.optimizer.grid_x; }));
        f.push_back(integer<int>("optimizer", "grid_y", [](auto& s) -> auto& { return s.optimizer.grid_y; }));
        f.push_back(integer<int>("optimizer", "grid_z", [](auto& s) -> auto& { return s.optimizer.grid_z; }));
        f.push_back(integer<int>("optimizer", "starts", [](auto& s) -> auto& { return s.optimizer.starts; }));
        f.push_back(number("optimizer", "local_tol", [](auto& s) -> auto& { return s.optimizer.local_tol; }));
        f.push_back(integer<std::size_t>("optimizer", "max_evals", [](auto& s) -> auto& { return s.optimizer.max_evals; }));
        f.push_back(integer<std::uint64_t>("optimizer", "seed", [](auto& s) -> auto& { return s.optimizer.seed; }));
        f.push_back(integer<int>("optimizer", "random_starts", [](auto& s) -> auto& { return s.optimizer.random_starts; }));

        f.push_back(integer<std::uint64_t>("monte_carlo", "samples", [](auto& s) -> auto& { return s.mc.samples; }));
        f.push_back(integer<std::uint64_t>("monte_carlo", "seed", [](auto& s) -> auto& { return s.mc.seed; }));
        f.push_back({"monte_carlo", "antithetic",
                     [](Scenario& s, std::string_view v) { s.mc.antithetic = to_bool(v); },
                     [](const Scenario& s) -> std::optional<std::string> {
                         return std::string(s.mc.antithetic ? "true" : "false");
                     }});
        return f;
    }();
    return table;
}

const Field* find_field(std::string_view section, std::string_view key) {
    for (const Field& f : fields())
        if (section == f.section && key == f.key) return &f;
    return nullptr;
}

bool known_section(std::string_view section) {
    for (const Field& f : fields())
        if (section == f.section) return true;
    return false;
}

std::string dotted(std::string_view section, std::string_view key) {
    return std::string(section) + "." + std::string(key);
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source) {
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry> entries;
    std::string section;
    int line_no = 0;
    std::string_view rest = text;
    auto where = [&](int line) { return std::string(source) + ":" + std::to_string(line) + ": "; };
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(where(line_no) + "unterminated section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section))
                throw ParseError(where(line_no) + "unknown section [" + section + "]", line_no, section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(where(line_no) + "expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        if (section.empty())
            throw ParseError(where(line_no) + "key '" + key + "' appears before any section", line_no, key);
        const std::string name = dotted(section, key);
        if (!find_field(section, key)) throw ParseError(where(line_no) + "unknown key " + name, line_no, name);
        if (entries.count(name))
            throw ParseError(where(line_no) + "duplicate key " + name + " (first on line " +
                                 std::to_string(entries[name].line) + ")",
                             line_no, name);
        entries[name] = {std::string(trim(line.substr(eq + 1))), line_no};
    }

    Scenario s = default_scenario();
    // Sensor arrays may change the sensor count, so they are resized together first.
    std::size_t count = 0;
    for (const char* k : {"sensors.x", "sensors.y", "sensors.power"}) {
        const auto it = entries.find(k);
        if (it == entries.end()) continue;
        std::size_t n = 0;
        try {
            n = to_list(it->second.value).size();
        } catch (const BadValue& e) {
            throw ParseError(where(it->second.line) + k + ": " + e.why, it->second.line, k);
        }
        if (count != 0 && n != count)
            throw ParseError(where(it->second.line) + k + ": has " + std::to_string(n) + " entries, expected " +
                                 std::to_string(count),
                             it->second.line, k);
        count = n;
    }
    if (count != 0 && count != s.system.sensors.size()) {
        for (const char* k : {"sensors.x", "sensors.y", "sensors.power"})
            if (!entries.count(k))
                throw Error(ErrorCode::validation,
                            where(0) + k + " must be given when the sensor count differs from the default", k);
        s.system.sensors.sensors.assign(count, Sensor{});
    }

    // Apply in canonical order so the result never depends on line order.
    for (const Field& f : fields()) {
        const auto it = entries.find(dotted(f.section, f.key));
        if (it == entries.end()) continue;
        try {
            f.set(s, it->second.value);
        } catch (const BadValue& e) {
            throw ParseError(where(it->second.line) + it->first + ": " + e.why, it->second.line, it->first);
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open scenario file '" + path + "'", "path");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
    std::string out;
    std::string section;
    for (const Field& f : fields()) {
        const auto value = f.get(s);
        if (!value) continue;
        if (section != f.section) {
            if (!section.empty()) out += "\n";
            section = f.section;
            out += "[" + section + "]\n";
        }
        out += std::string(f.key) + " = " + *value + "\n";
    }
    return out;
}

std::string scenario_digest(const Scenario& s) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : serialize_scenario(s)) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void set_scenario_value(Scenario& s, std::string_view dotted_key, std::string_view value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string_view::npos)
        throw Error(ErrorCode::invalid_argument, "expected section.key, got '" + std::string(dotted_key) + "'",
                    std::string(dotted_key));
    const Field* f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    if (!f) throw Error(ErrorCode::invalid_argument, "unknown key " + std::string(dotted_key), std::string(dotted_key));
    Scenario updated = s;
    try {
        f->set(updated, value);
    } catch (const BadValue& e) {
        throw Error(ErrorCode::invalid_argument, std::string(dotted_key) + ": " + e.why, std::string(dotted_key));
    }
    updated.validate();
    s = std::move(updated);
}

void Table::add_column(std::string name, bool capacity) {
    columns.push_back(std::move(name));
    is_capacity.push_back(capacity);
}

std::string to_csv(const Table& t, CapacityUnit unit) {
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out += ",";
        out += t.columns[j];
    }
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ",";
            const bool convert = j < t.is_capacity.size() && t.is_capacity[j];
            out += format_double(convert ? convert_capacity(row[j], unit) : row[j]);
        }
        out += "\n";
    }
    return out;
}

std::string to_json(const ResultRecord& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["scenario_digest"] = r.digest;
    j["library_version"] = library_version;
    j["started_at"] = r.started_at;
    j["finished_at"] = r.finished_at;
    j["unit"] = to_string(r.unit);
    j["columns"] = r.outputs.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.outputs.rows) {
        nlohmann::ordered_json jr = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < row.size(); ++c) {
            const bool convert = c < r.outputs.is_capacity.size() && r.outputs.is_capacity[c];
            const double v = convert ? convert_capacity(row[c], r.unit) : row[c];
            if (std::isfinite(v))
                jr.push_back(v);
            else
                jr.push_back(nullptr);
        }
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace uavrelay
