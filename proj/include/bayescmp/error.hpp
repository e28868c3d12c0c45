#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bayescmp {

/// Base class for every error raised by the library. The message is prefixed
/// with the name of the module that raised it, e.g. "data-model: ...".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Malformed input text. `line()` is 1-based; 0 means "whole input".
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("data-model", line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& message) : Error("data-model", message) {}
};

class CoverageError : public Error {
public:
    explicit CoverageError(const std::string& message) : Error("data-model", message) {}
};

class DomainError : public Error {
public:
    DomainError(std::string module, const std::string& message) : Error(std::move(module), message) {}
};

/// The data do not determine the requested statistic (e.g. zero variance).
class DegenerateDataError : public Error {
public:
    DegenerateDataError(std::string module, const std::string& message)
        : Error(std::move(module), message) {}
};

class InitializationError : public Error {
public:
    explicit InitializationError(const std::string& message) : Error("hier-model", message) {}
};

} // namespace bayescmp
