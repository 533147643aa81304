// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <exception>
#include <new>
#include <string>

#include "uavrelay/error.hpp"
#include "uavrelay/opt2d.hpp"
#include "uavrelay/scenario.hpp"
#include "uavrelay/uavrelay.h"
#include "uavrelay/validation.hpp"

struct uavr_scenario {
    uavrelay::Scenario value;
};

struct uavr_table {
    uavrelay::Table value;
};

namespace {

using namespace uavrelay;

struct LastError {
    std::string message;
    std::string field;
    int line = 0;
};

thread_local LastError last_error;

uavr_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return UAVR_INVALID_ARGUMENT;
        case ErrorCode::parse: return UAVR_PARSE;
        case ErrorCode::validation: return UAVR_VALIDATION;
        case ErrorCode::infeasible: return UAVR_INFEASIBLE;
        case ErrorCode::quadrature: return UAVR_QUADRATURE;
        case ErrorCode::budget: return UAVR_BUDGET;
        case ErrorCode::io: return UAVR_IO;
        case ErrorCode::internal: return UAVR_INTERNAL;
    }
    return UAVR_INTERNAL;
}

uavr_status fail(uavr_status status, std::string message, std::string field = {}, int line = 0) {
    last_error = {std::move(message), std::move(field), line};
    return status;
}

// Runs body and converts any exception into a status code plus thread-local message.
template <class Body>
uavr_status guarded(Body body) {
    try {
        last_error = {};
        body();
        return UAVR_OK;
    } catch (const ParseError& e) {
        return fail(UAVR_PARSE, e.what(), e.field(), e.line());
    } catch (const Error& e) {
        return fail(to_status(e.code()), e.what(), e.field());
    } catch (const std::bad_alloc&) {
        return fail(UAVR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(UAVR_INTERNAL, e.what());
    } catch (...) {
        return fail(UAVR_INTERNAL, "unknown failure");
    }
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void need(const void* p, const char* name) {
    if (!p) throw Error(ErrorCode::invalid_argument, std::string(name) + " must not be NULL", name);
}

UavPosition position(uavr_position p) { return {p.x, p.y, p.z}; }

uavr_table* make_table(Table t) { return new uavr_table{std::move(t)}; }

}  // namespace

extern "C" {

const char* uavr_version(void) { return library_version; }

const char* uavr_status_name(uavr_status status) {
    switch (status) {
        case UAVR_OK: return "ok";
        case UAVR_INVALID_ARGUMENT: return "invalid_argument";
        case UAVR_PARSE: return "parse";
        case UAVR_VALIDATION: return "validation";
        case UAVR_INFEASIBLE: return "infeasible";
        case UAVR_QUADRATURE: return "quadrature";
        case UAVR_BUDGET: return "budget";
        case UAVR_IO: return "io";
        case UAVR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* uavr_last_error(void) { return last_error.message.c_str(); }
const char* uavr_last_error_field(void) { return last_error.field.c_str(); }
int uavr_last_error_line(void) { return last_error.line; }

uavr_status uavr_scenario_default(uavr_scenario** out) {
    return guarded([&] {
        need(out, "out");
        *out = new uavr_scenario{default_scenario()};
    });
}

uavr_status uavr_scenario_load(const char* path, uavr_scenario** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new uavr_scenario{load_scenario(path)};
    });
}

uavr_status uavr_scenario_parse(const char* text, uavr_scenario** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new uavr_scenario{parse_scenario(text)};
    });
}

uavr_status uavr_scenario_clone(const uavr_scenario* s, uavr_scenario** out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        *out = new uavr_scenario{s->value};
    });
}

uavr_status uavr_scenario_set(uavr_scenario* s, const char* key, const char* value) {
    return guarded([&] {
        need(s, "scenario");
        need(key, "key");
        need(value, "value");
        set_scenario_value(s->value, key, value);
    });
}

uavr_status uavr_scenario_serialize(const uavr_scenario* s, char** text) {
    return guarded([&] {
        need(s, "scenario");
        need(text, "text");
        *text = duplicate(serialize_scenario(s->value));
    });
}

uavr_status uavr_scenario_digest(const uavr_scenario* s, char* out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        const std::string d = scenario_digest(s->value);
        std::memcpy(out, d.c_str(), d.size() + 1);
    });
}

void uavr_scenario_free(uavr_scenario* s) { delete s; }

uavr_status uavr_min_altitude(const uavr_scenario* s, double* out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        *out = min_altitude(s->value.system.platform, s->value.system.atmosphere);
    });
}

uavr_status uavr_evaluate(const uavr_scenario* s, uavr_position pos, uavr_method method, uavr_capacity* out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        const System& sys = s->value.system;
        const UavPosition p = position(pos);
        uavr_capacity r{};
        r.method = method;
        switch (method) {
            case UAVR_METHOD_QUADRATURE: {
                const CapacityResult c = average_capacity(p, sys);
                r.value = c.value;
                r.error_estimate = c.error_estimate;
                r.evaluations = c.evaluations;
                break;
            }
            case UAVR_METHOD_CLOSED_FORM:
                if (sys.relay.scheme != RelayScheme::decode_forward || sys.link.fading != FadingMode::pointing_only)
                    throw Error(ErrorCode::invalid_argument,
                                "the closed form is available for DF with pointing-only fading", "method");
                r.value = df_closed_form(p, sys, sys.relay.df_alpha);
                r.evaluations = 1;
                break;
            case UAVR_METHOD_MONTE_CARLO: {
                const McEstimate e = mc_capacity(sys, p, sys.relay.scheme, s->value.mc);
                r.value = e.mean;
                r.error_estimate = e.std_error;
                r.evaluations = e.samples;
                break;
            }
            case UAVR_METHOD_ASYMPTOTIC_1:
                if (sys.relay.scheme != RelayScheme::amplify_forward)
                    throw Error(ErrorCode::invalid_argument, "asymptotic case 1 closed form is an AF result", "method");
                r.value = af_asymptotic1_closed_form(p, sys);
                r.evaluations = 1;
                break;
            default:
                throw Error(ErrorCode::invalid_argument, "unknown capacity method", "method");
        }
        *out = r;
    });
}

uavr_status uavr_solve(const uavr_scenario* s, uavr_solution* out, uavr_table** starts) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        s->value.validate();
        const OptimizationResult r = optimize_position(s->value.system, s->value.optimizer);
        uavr_solution sol{};
        sol.position = {r.position.x, r.position.y, r.position.z};
        sol.capacity = r.capacity;
        sol.min_altitude = r.min_altitude;
        sol.evaluations = r.evals;
        sol.active = r.active.bits();
        sol.budget_exhausted = r.budget_exhausted ? 1 : 0;
        if (starts) {
            Table t;
            for (const char* c : {"start_x", "start_y", "start_z", "x", "y", "z"}) t.add_column(c);
            t.add_column("capacity", true);
            t.add_column("evals");
            for (const LocalRun& run : r.all_starts)
                t.rows.push_back({run.start.x, run.start.y, run.start.z, run.optimum.x, run.optimum.y, run.optimum.z,
                                  run.value, static_cast<double>(run.evals)});
            *starts = make_table(std::move(t));
        }
        *out = sol;
    });
}

uavr_status uavr_slice(const uavr_scenario* s, uavr_axis axis, uavr_position at, const double* grid, size_t n,
                       uavr_table** out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        if (n > 0) need(grid, "grid");
        if (axis != UAVR_AXIS_X && axis != UAVR_AXIS_Y && axis != UAVR_AXIS_Z)
            throw Error(ErrorCode::invalid_argument, "axis must be x, y or z", "axis");
        const SliceAxis a = axis == UAVR_AXIS_X ? SliceAxis::x : axis == UAVR_AXIS_Y ? SliceAxis::y : SliceAxis::z;
        const auto rows = capacity_slice(s->value.system, a, position(at), {grid, n});
        Table t;
        t.add_column(axis == UAVR_AXIS_X ? "x" : axis == UAVR_AXIS_Y ? "y" : "z");
        t.add_column("capacity", true);
        t.add_column("feasible");
        for (const SliceRow& r : rows) t.rows.push_back({r.coordinate, r.capacity, r.feasible ? 1.0 : 0.0});
        *out = make_table(std::move(t));
    });
}

uavr_status uavr_sweep(const uavr_scenario* s, uavr_sweep_param param, const double* values, size_t n,
                       double coupling_slope, uavr_table** out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        if (n > 0) need(values, "values");
        if (param != UAVR_SWEEP_OGS_NOISE && param != UAVR_SWEEP_CLOUD_EXTINCTION)
            throw Error(ErrorCode::invalid_argument, "unknown sweep parameter", "param");
        const SweepParameter p =
            param == UAVR_SWEEP_OGS_NOISE ? SweepParameter::ogs_noise : SweepParameter::cloud_extinction;
        const auto rows = sweep_optimal_position(s->value.system, s->value.optimizer, p, {values, n},
                                                 CouplingModel{coupling_slope});
        Table t;
        t.add_column(p == SweepParameter::ogs_noise ? "sigma_n2" : "psi_c");
        for (const char* c : {"x", "y", "z"}) t.add_column(c);
        t.add_column("capacity", true);
        for (const SweepRow& r : rows)
            t.rows.push_back({r.parameter, r.position.x, r.position.y, r.position.z, r.capacity});
        *out = make_table(std::move(t));
    });
}

uavr_status uavr_maxmin(const uavr_scenario* s, double z, int dims, uavr_maxmin_solution* out,
                        uavr_table** candidates) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        if (dims != 1 && dims != 2) throw Error(ErrorCode::invalid_argument, "dims must be 1 or 2", "dims");
        const SensorField& field = s->value.system.sensors;
        const MaxMinSolution r = dims == 1 ? maxmin_1d(field, z) : maxmin_2d(field, z);
        *out = {r.position.x, r.position.y, r.value, r.binding_sensor, r.special_case ? 1 : 0};
        if (candidates) {
            Table t;
            for (const char* c : {"sensor", "x", "y", "valid"}) t.add_column(c);
            t.add_column("min_capacity", true);
            SensorField line = field;
            if (dims == 1)
                for (Sensor& sensor : line.sensors) sensor.y = 0.0;
            for (std::size_t m = 0; m < r.candidates.size(); ++m) {
                const Point2& c = r.candidates[m];
                const UavPosition at{c.x, dims == 1 ? 0.0 : c.y, z};
                double lowest = std::numeric_limits<double>::quiet_NaN();
                if (r.candidate_valid[m]) {
                    lowest = std::numeric_limits<double>::infinity();
                    for (std::size_t k = 0; k < line.size(); ++k) lowest = std::min(lowest, sensor_capacity(at, line, k));
                }
                const double nan = std::numeric_limits<double>::quiet_NaN();
                t.rows.push_back({static_cast<double>(m), r.candidate_valid[m] ? c.x : nan,
                                  r.candidate_valid[m] ? c.y : nan, r.candidate_valid[m] ? 1.0 : 0.0, lowest});
            }
            *candidates = make_table(std::move(t));
        }
    });
}

uavr_status uavr_validate(const uavr_scenario* s, uint64_t samples, uint64_t seed, unsigned extra, uavr_table** out,
                          int* all_within_3se) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        const UavPosition probe{1000.0, 1000.0, 1200.0};
        const auto rows = cross_validate(s->value, probe, samples, seed, extra);
        Table t;
        for (const char* c : {"scenario", "scheme", "composite", "x", "y", "z"}) t.add_column(c);
        t.add_column("quadrature", true);
        t.add_column("monte_carlo", true);
        t.add_column("std_error", true);
        t.add_column("z_score");
        bool ok = true;
        for (const ValidationRow& r : rows) {
            ok &= r.z_score < 3.0;
            t.rows.push_back({static_cast<double>(r.scenario), r.scheme == RelayScheme::decode_forward ? 1.0 : 0.0,
                              r.fading == FadingMode::composite ? 1.0 : 0.0, r.position.x, r.position.y,
                              r.position.z, r.quadrature, r.mc_mean, r.std_error, r.z_score});
        }
        if (all_within_3se) *all_within_3se = ok ? 1 : 0;
        *out = make_table(std::move(t));
    });
}

size_t uavr_table_rows(const uavr_table* t) { return t ? t->value.rows.size() : 0; }
size_t uavr_table_cols(const uavr_table* t) { return t ? t->value.columns.size() : 0; }

const char* uavr_table_column(const uavr_table* t, size_t col) {
    if (!t || col >= t->value.columns.size()) return nullptr;
    return t->value.columns[col].c_str();
}

double uavr_table_value(const uavr_table* t, size_t row, size_t col) {
    if (!t || row >= t->value.rows.size() || col >= t->value.rows[row].size()) return std::nan("");
    return t->value.rows[row][col];
}

uavr_status uavr_table_csv(const uavr_table* t, int bits, char** out) {
    return guarded([&] {
        need(t, "table");
        need(out, "out");
        *out = duplicate(to_csv(t->value, bits ? CapacityUnit::bits : CapacityUnit::nats));
    });
}

uavr_status uavr_table_record(const uavr_table* t, const uavr_scenario* s, const char* command,
                              const char* started_at, int bits, char** out) {
    return guarded([&] {
        need(t, "table");
        need(s, "scenario");
        need(out, "out");
        ResultRecord r;
        r.command = command ? command : "";
        r.digest = scenario_digest(s->value);
        r.started_at = started_at ? started_at : utc_timestamp();
        r.finished_at = utc_timestamp();
        r.unit = bits ? CapacityUnit::bits : CapacityUnit::nats;
        r.outputs = t->value;
        *out = duplicate(to_json(r));
    });
}

void uavr_table_free(uavr_table* t) { delete t; }

char* uavr_timestamp(void) {
    try {
        return duplicate(utc_timestamp());
    } catch (...) {
        return nullptr;
    }
}

void uavr_string_free(char* s) { std::free(s); }

}  // extern "C"
