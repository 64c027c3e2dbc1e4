#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snake/types.hpp"

namespace snake {

/// Base class for runtime failures raised by the engine and its IO layers.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An API precondition was violated. This is a caller bug, not bad input data.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// A config file was rejected; carries the offending line number and key.
class ConfigError : public Error {
public:
    ConfigError(int line, std::string key, const std::string& what)
        : Error(what), line_(line), key_(std::move(key)) {}

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_ = 0;
    std::string key_;
};

/// A local optimization step has an empty feasible set under the hard
/// detuning bounds. Carries the offending element and the elements whose
/// assignments (or co-membership in the step) block it.
class InfeasibleStepError : public Error {
public:
    InfeasibleStepError(ElementId element, std::vector<ElementId> blocking,
                        const std::string& what)
        : Error(what), element_(element), blocking_(std::move(blocking)) {}

    ElementId element() const noexcept { return element_; }
    const std::vector<ElementId>& blocking() const noexcept { return blocking_; }

private:
    ElementId element_ = kInvalidElement;
    std::vector<ElementId> blocking_;
};

/// One or more subgoals aborted on an infeasible step. Subgoals that did not
/// fail ran to completion and their results are kept in the state.
class CalibrationAborted : public Error {
public:
    CalibrationAborted(std::vector<int> failed_subgoals, const std::string& what)
        : Error(what), failed_subgoals_(std::move(failed_subgoals)) {}

    const std::vector<int>& failed_subgoals() const noexcept { return failed_subgoals_; }

private:
    std::vector<int> failed_subgoals_;
};

/// Brute-force search refused to run: the search space exceeds the budget.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(long double required, std::uint64_t budget, const std::string& what)
        : Error(what), required_(required), budget_(budget) {}

    long double required() const noexcept { return required_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    long double required_ = 0;
    std::uint64_t budget_ = 0;
};

/// Database or report file problem (truncation, version or digest mismatch).
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace snake
