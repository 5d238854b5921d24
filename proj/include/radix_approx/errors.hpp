#pragma once

#include <stdexcept>
#include <string>

namespace radix_approx {

// Argument outside the operation's domain (n <= 0, duplicate residues, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Enumeration cap, node budget or term cap exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An interval-valued comparison could not be decided at the working precision.
class IndeterminateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A checked mathematical statement failed. `witness` carries the offending data.
class InvariantViolation : public std::logic_error {
public:
    InvariantViolation(const std::string& what, std::string witness)
        : std::logic_error(what), witness_(std::move(witness)) {}
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}

    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

// A bound's hypothesis does not hold for the given input; a precondition
// failure, not a counterexample to the bound.
class HypothesisViolation : public DomainError {
public:
    HypothesisViolation(const std::string& what, std::string witness)
        : DomainError(what), witness_(std::move(witness)) {}

    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

}  // namespace radix_approx
