#pragma once

#include <stdexcept>
#include <string>

namespace bsnet {

/// A precondition of a library call was not met (bad sizes, bad enum, bad count).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested quantity does not exist for this input (e.g. no exact solution).
class NotApplicable : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised when an optimizer run produced a non-finite or exploding cost.
class TrainingDiverged : public std::runtime_error {
public:
    TrainingDiverged(std::size_t epoch, double cost)
        : std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                             " (cost " + std::to_string(cost) + ")"),
          epoch_(epoch), cost_(cost) {}

    std::size_t epoch() const noexcept { return epoch_; }
    double cost() const noexcept { return cost_; }

private:
    std::size_t epoch_;
    double cost_;
};

} // namespace bsnet
