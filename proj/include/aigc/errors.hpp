#pragma once

#include <stdexcept>
#include <string>

namespace aigc {

// Error taxonomy shared across modules. The CLI maps ConfigError and
// ValidationError to exit code 1, everything else to 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), line_number(0) {}
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UndefinedMetricError : std::runtime_error {
    explicit UndefinedMetricError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aigc
