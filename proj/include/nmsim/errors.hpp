#pragma once

#include <stdexcept>
#include <string>

namespace nmsim {

// Caller broke a precondition (bad dims, unknown subsystem, out-of-range knob).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

// A produced value failed one of its type invariants.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

// The Ising compiler has no real coupling for the requested rotation.
class NoSolution : public std::domain_error {
 public:
  explicit NoSolution(const std::string& what) : std::domain_error(what) {}
};

}  // namespace nmsim
