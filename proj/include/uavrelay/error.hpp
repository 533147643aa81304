// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace uavrelay {

enum class ErrorCode {
    invalid_argument = 1,
    parse,
    validation,
    infeasible,
    quadrature,
    budget,
    io,
    internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string field = {})
        : std::runtime_error(message), code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    // Configuration field or argument the error refers to, empty if none.
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, std::string field = {})
        : Error(ErrorCode::parse, message, std::move(field)), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Raised when an adaptive integration runs out of its node budget.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& message, double partial, double error_estimate)
        : Error(ErrorCode::quadrature, message), partial_(partial), error_estimate_(error_estimate) {}
    double partial_estimate() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

inline void require(bool condition, const char* field, const std::string& message) {
    if (!condition) throw Error(ErrorCode::validation, std::string(field) + ": " + message, field);
}

}  // namespace uavrelay
