#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace strangle {

// Argument outside the mathematical domain of an operation (delta >= 0.5,
// negative strike, ...). The CLI maps these to exit code 2.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// nu below the smallest value at which the closed-form relative value is
// numerically meaningful. Callers may fall back to the nu -> 0 bound.
class DegenerateNuError : public DomainError {
public:
    DegenerateNuError(double nu, double nu_min)
        : DomainError("degenerate nu=" + std::to_string(nu) + " (minimum " + std::to_string(nu_min) +
                      "); use the bound for the nu -> 0 limit"),
          nu_(nu) {}

    double nu() const noexcept { return nu_; }

private:
    double nu_;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed option-chain input. line and column are 1-based; column 0 means
// the whole line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::string reason)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                             reason),
          line_(line),
          column_(column),
          reason_(std::move(reason)) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string reason_;
};

// A chain does not contain what a strangle selection needs.
class SelectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace strangle
