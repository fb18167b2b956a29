#pragma once

#include <stdexcept>
#include <string>

#include "cpdk/verdict.hpp"

namespace cpdk {

/// Malformed or mismatched input: wrong shapes, unknown labels, bad tolerances.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition of an operation does not hold for the given
/// input (e.g. decomposing a kernel that is not conditionally positive).
/// Carries the failing verdict so callers can report its witness.
class PreconditionError : public std::runtime_error {
  public:
    PreconditionError(const std::string &what, Verdict verdict)
        : std::runtime_error(what), verdict_(std::move(verdict)) {}

    const Verdict &verdict() const noexcept { return verdict_; }

  private:
    Verdict verdict_;
};

} // namespace cpdk
