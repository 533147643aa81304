// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library only through the C API.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavrelay/uavrelay.h"

namespace {

struct Failure {
    uavr_status status;
    std::string message;
    std::string field;
    int line = 0;
};

void check(uavr_status st) {
    if (st != UAVR_OK) throw Failure{st, uavr_last_error(), uavr_last_error_field(), uavr_last_error_line()};
}

struct ScenarioDeleter {
    void operator()(uavr_scenario* s) const { uavr_scenario_free(s); }
};
struct TableDeleter {
    void operator()(uavr_table* t) const { uavr_table_free(t); }
};
struct StringDeleter {
    void operator()(char* s) const { uavr_string_free(s); }
};
using ScenarioPtr = std::unique_ptr<uavr_scenario, ScenarioDeleter>;
using TablePtr = std::unique_ptr<uavr_table, TableDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct GlobalOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::string scheme;
    std::string fading;
    std::string unit = "nats";
    std::vector<std::string> overrides;
};

ScenarioPtr load(const GlobalOptions& g) {
    uavr_scenario* raw = nullptr;
    check(g.scenario_path.empty() ? uavr_scenario_default(&raw) : uavr_scenario_load(g.scenario_path.c_str(), &raw));
    ScenarioPtr s(raw);
    auto set = [&](const std::string& key, const std::string& value) {
        check(uavr_scenario_set(s.get(), key.c_str(), value.c_str()));
    };
    for (const std::string& o : g.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos)
            throw Failure{UAVR_INVALID_ARGUMENT, "--set expects section.key=value, got '" + o + "'", "set"};
        set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (!g.scheme.empty()) set("relay.scheme", g.scheme);
    if (!g.fading.empty()) set("optical_link.fading", g.fading);
    set("relay.unit", g.unit);
    if (g.seed) {
        set("monte_carlo.seed", std::to_string(*g.seed));
        set("optimizer.seed", std::to_string(*g.seed));
    }
    return s;
}

bool bits(const GlobalOptions& g) { return g.unit == "bits"; }

double in_unit(double nats, const GlobalOptions& g) { return bits(g) ? nats / std::log(2.0) : nats; }

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{UAVR_IO, "cannot write '" + path + "'", "out"};
    out << text;
    if (!out) throw Failure{UAVR_IO, "write to '" + path + "' failed", "out"};
}

std::string csv(const uavr_table* t, const GlobalOptions& g) {
    char* raw = nullptr;
    check(uavr_table_csv(t, bits(g) ? 1 : 0, &raw));
    return StringPtr(raw).get();
}

std::string record(const uavr_table* t, const uavr_scenario* s, const std::string& command,
                   const std::string& started, const GlobalOptions& g) {
    char* raw = nullptr;
    check(uavr_table_record(t, s, command.c_str(), started.c_str(), bits(g) ? 1 : 0, &raw));
    return StringPtr(raw).get();
}

std::string now() {
    StringPtr t(uavr_timestamp());
    return t ? t.get() : "";
}

std::vector<double> spaced(double from, double to, int steps, bool log_spacing) {
    if (steps < 1) throw Failure{UAVR_INVALID_ARGUMENT, "--steps must be >= 1", "steps"};
    if (log_spacing && !(from > 0.0 && to > 0.0))
        throw Failure{UAVR_INVALID_ARGUMENT, "--log needs positive --from and --to", "from"};
    std::vector<double> v;
    for (int i = 0; i < steps; ++i) {
        const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
        v.push_back(log_spacing ? std::pow(10.0, std::log10(from) + f * (std::log10(to) - std::log10(from)))
                                : from + f * (to - from));
    }
    return v;
}

uavr_position parse_position(const std::vector<double>& v) {
    if (v.size() != 3) throw Failure{UAVR_INVALID_ARGUMENT, "--at expects x,y,z", "at"};
    return {v[0], v[1], v[2]};
}

std::string command_line(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

int report(const Failure& f) {
    nlohmann::ordered_json j;
    j["error"]["code"] = uavr_status_name(f.status);
    j["error"]["message"] = f.message;
    if (!f.field.empty()) j["error"]["field"] = f.field;
    if (f.line > 0) j["error"]["line"] = f.line;
    std::cerr << j.dump() << "\n";
    return static_cast<int>(f.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Placement and capacity of a solar-powered UAV relay between an RF sensor field and an optical "
                 "ground station"};
    app.set_version_flag("--version", uavr_version());
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--scenario", g.scenario_path, "Scenario file (defaults when omitted)");
    app.add_option("--seed", g.seed, "Seed for Monte Carlo streams and random optimizer starts");
    app.add_option("--scheme", g.scheme, "Relay scheme")->check(CLI::IsMember({"af", "df"}));
    app.add_option("--fading", g.fading, "Fading model")->check(CLI::IsMember({"pointing", "composite"}));
    app.add_option("--unit", g.unit, "Capacity unit for output")->check(CLI::IsMember({"nats", "bits"}));
    app.add_option("--set", g.overrides, "Override a scenario value, section.key=value (repeatable)");

    std::string out_path;

    auto* defaults = app.add_subcommand("defaults", "Print the default scenario");
    defaults->add_option("--out", out_path, "Output file (stdout when omitted)");

    std::string result_path = "result.json";
    auto* solve = app.add_subcommand("solve", "Optimise the UAV position in 3-D");
    solve->add_option("--out", result_path, "Result record file")->capture_default_str();
    std::string starts_path;
    solve->add_option("--starts", starts_path, "Write every local search as CSV");

    std::string axis = "z";
    std::vector<double> at;
    double from = 0.0, to = 0.0;
    int steps = 0;
    bool log_spacing = false;
    auto* slice = app.add_subcommand("slice", "Capacity along one axis");
    slice->add_option("--axis", axis, "x, y or z")->check(CLI::IsMember({"x", "y", "z"}))->capture_default_str();
    slice->add_option("--at", at, "Fixed position x,y,z")->delimiter(',')->required();
    slice->add_option("--from", from)->required();
    slice->add_option("--to", to)->required();
    slice->add_option("--steps", steps)->required();
    slice->add_option("--out", out_path, "CSV file (stdout when omitted)");

    std::string param;
    double coupling = 1.0;
    auto* sweep = app.add_subcommand("sweep", "Optimal position against a swept parameter");
    sweep->add_option("--param", param, "psi_c or sigma_n2")->check(CLI::IsMember({"psi_c", "sigma_n2"}))->required();
    sweep->add_option("--from", from)->required();
    sweep->add_option("--to", to)->required();
    sweep->add_option("--steps", steps)->required();
    sweep->add_flag("--log", log_spacing, "Logarithmic spacing");
    sweep->add_option("--coupling", coupling, "Slope k in beta_c = k psi_c")->capture_default_str();
    sweep->add_option("--out", out_path, "CSV file (stdout when omitted)");

    double height = 300.0;
    int dims = 1;
    auto* maxmin = app.add_subcommand("maxmin", "Max-min fair placement at a fixed height");
    maxmin->add_option("--z", height, "UAV height")->capture_default_str();
    maxmin->add_option("--dims", dims, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
    maxmin->add_option("--out", out_path, "Candidate CSV file (stdout when omitted)");

    std::uint64_t samples = 1000000;
    unsigned extra = 5;
    auto* validate = app.add_subcommand("validate", "Quadrature against Monte Carlo");
    validate->add_option("--samples", samples)->capture_default_str();
    validate->add_option("--random", extra, "Randomised scenarios besides the configured one")->capture_default_str();
    validate->add_option("--out", out_path, "CSV report (stdout when omitted)");

    std::string method = "quadrature";
    auto* evaluate = app.add_subcommand("evaluate", "Average capacity at one position");
    evaluate->add_option("--at", at, "Position x,y,z")->delimiter(',')->required();
    evaluate->add_option("--method", method)
        ->check(CLI::IsMember({"quadrature", "closed-form", "monte-carlo", "asymptotic-1"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report({UAVR_INVALID_ARGUMENT, e.what(), "argv"});
    }

    const std::string command = command_line(argc, argv);
    const std::string started = now();
    try {
        ScenarioPtr s = load(g);

        if (*defaults) {
            char* raw = nullptr;
            check(uavr_scenario_serialize(s.get(), &raw));
            write_text(out_path, StringPtr(raw).get());
            return 0;
        }

        if (*solve) {
            uavr_solution sol{};
            uavr_table* starts_raw = nullptr;
            check(uavr_solve(s.get(), &sol, &starts_raw));
            TablePtr starts(starts_raw);
            std::printf("optimum  x = %.3f m  y = %.3f m  z = %.3f m\n", sol.position.x, sol.position.y,
                        sol.position.z);
            std::printf("capacity %.9g %s/s/Hz\n", in_unit(sol.capacity, g), g.unit.c_str());
            std::printf("min sustainable altitude %.3f m, %llu evaluations%s\n", sol.min_altitude,
                        static_cast<unsigned long long>(sol.evaluations),
                        sol.budget_exhausted ? ", evaluation budget exhausted" : "");
            if (sol.active) std::printf("active box faces mask %u\n", sol.active);

            // The record carries the solution; per-start details go to --starts.
            nlohmann::ordered_json j = nlohmann::ordered_json::parse(record(starts.get(), s.get(), command, started, g));
            j["columns"] = {"x", "y", "z", "capacity", "min_altitude", "evaluations", "active", "budget_exhausted"};
            j["rows"] = {{sol.position.x, sol.position.y, sol.position.z, in_unit(sol.capacity, g), sol.min_altitude,
                          sol.evaluations, sol.active, sol.budget_exhausted}};
            write_text(result_path, j.dump(2) + "\n");
            if (!starts_path.empty()) write_text(starts_path, csv(starts.get(), g));
            return sol.budget_exhausted ? static_cast<int>(UAVR_BUDGET) : 0;
        }

        if (*slice) {
            const uavr_position p = parse_position(at);
            const std::vector<double> grid = spaced(from, to, steps, false);
            const uavr_axis a = axis == "x" ? UAVR_AXIS_X : axis == "y" ? UAVR_AXIS_Y : UAVR_AXIS_Z;
            uavr_table* raw = nullptr;
            check(uavr_slice(s.get(), a, p, grid.data(), grid.size(), &raw));
            write_text(out_path, csv(TablePtr(raw).get(), g));
            return 0;
        }

        if (*sweep) {
            const std::vector<double> values = spaced(from, to, steps, log_spacing);
            uavr_table* raw = nullptr;
            check(uavr_sweep(s.get(), param == "psi_c" ? UAVR_SWEEP_CLOUD_EXTINCTION : UAVR_SWEEP_OGS_NOISE,
                             values.data(), values.size(), coupling, &raw));
            write_text(out_path, csv(TablePtr(raw).get(), g));
            return 0;
        }

        if (*maxmin) {
            uavr_maxmin_solution sol{};
            uavr_table* raw = nullptr;
            check(uavr_maxmin(s.get(), height, dims, &sol, &raw));
            TablePtr cands(raw);
            std::fprintf(stderr, "max-min position x = %.6f m  y = %.6f m  min rate %.9g %s/s/Hz  binding sensor %zu%s\n",
                         sol.x, sol.y, in_unit(sol.value, g), g.unit.c_str(), sol.binding_sensor,
                         sol.special_case ? "  (weakest sensor binds everywhere)" : "");
            write_text(out_path, csv(cands.get(), g));
            return 0;
        }

        if (*validate) {
            uavr_table* raw = nullptr;
            int ok = 0;
            const std::uint64_t seed = g.seed.value_or(7);
            check(uavr_validate(s.get(), samples, seed, extra, &raw, &ok));
            TablePtr t(raw);
            write_text(out_path, csv(t.get(), g));
            double worst = 0.0;
            for (std::size_t r = 0; r < uavr_table_rows(t.get()); ++r)
                worst = std::max(worst, uavr_table_value(t.get(), r, uavr_table_cols(t.get()) - 1));
            std::fprintf(stderr, "%zu comparisons, worst |quadrature - MC| / std_error = %.3f: %s\n",
                         uavr_table_rows(t.get()), worst, ok ? "all within 3" : "FAILED");
            return ok ? 0 : 1;
        }

        if (*evaluate) {
            const uavr_method m = method == "quadrature"    ? UAVR_METHOD_QUADRATURE
                                  : method == "closed-form" ? UAVR_METHOD_CLOSED_FORM
                                  : method == "monte-carlo" ? UAVR_METHOD_MONTE_CARLO
                                                            : UAVR_METHOD_ASYMPTOTIC_1;
            uavr_capacity c{};
            check(uavr_evaluate(s.get(), parse_position(at), m, &c));
            std::printf("%.12g %s/s/Hz  (%s, error %.3g, %llu evaluations)\n", in_unit(c.value, g), g.unit.c_str(),
                        method.c_str(), in_unit(c.error_estimate, g), static_cast<unsigned long long>(c.evaluations));
            return 0;
        }
    } catch (const Failure& f) {
        return report(f);
    }
    return 0;
}
