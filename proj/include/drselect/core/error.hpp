#pragma once

#include <stdexcept>
#include <string>

namespace drselect {

// Input problems the caller can fix (bad schema, config, CSV content). The CLI
// maps these to exit status 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what, std::string kind = "validation")
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class SchemaError : public ValidationError {
public:
    explicit SchemaError(const std::string& what) : ValidationError(what, "schema") {}
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : ValidationError(what, "parse"), row_(row), column_(column) {}
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class ConfigError : public ValidationError {
public:
    explicit ConfigError(const std::string& what) : ValidationError(what, "config") {}
};

// Violated preconditions of a library call.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Failures while estimating (fits, root finding, bootstrap). CLI exit status 2.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what, std::string kind = "estimation")
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class FitError : public EstimationError {
public:
    explicit FitError(const std::string& what) : EstimationError(what, "fit") {}
};

}  // namespace drselect
