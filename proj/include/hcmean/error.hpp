#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcmean {

// Argument outside the support or admissible range of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Mismatched lengths or too few observations.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Tail index >= 1, so the mean does not exist.
class InfiniteMeanError : public DomainError {
public:
    using DomainError::DomainError;
};

// p in {0,1}: one of the two samples has no tail.
class DegenerateDesignError : public DomainError {
public:
    using DomainError::DomainError;
};

// Estimator undefined on this sample (p_hat = 0 or gamma1_hat >= 1).
class EstimatorUndefined : public std::runtime_error {
public:
    enum class Reason { AllCensoredTail, InfiniteMeanEstimate };

    EstimatorUndefined(Reason reason, const std::string& what)
        : std::runtime_error(what), reason_(reason) {}

    [[nodiscard]] Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

// No admissible k in the requested range for threshold selection.
class SelectionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnreliableBootstrap : public std::runtime_error {
public:
    UnreliableBootstrap(std::size_t failures, std::size_t replicates)
        : std::runtime_error("bootstrap unreliable: " + std::to_string(failures) + " of " +
                             std::to_string(replicates) + " replicates failed"),
          failures_(failures), replicates_(replicates) {}

    [[nodiscard]] std::size_t failures() const noexcept { return failures_; }
    [[nodiscard]] std::size_t replicates() const noexcept { return replicates_; }

private:
    std::size_t failures_;
    std::size_t replicates_;
};

// Malformed input row; row is 1-based and counts data rows after the header.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t row, const std::string& message)
        : std::runtime_error("row " + std::to_string(row) + ": " + message), row_(row) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hcmean
