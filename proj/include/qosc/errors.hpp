#pragma once

#include <stdexcept>
#include <string>

namespace qosc {

// Input outside the mathematical domain of an operation (bad base, bad index).
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A series or product failed to meet its tail bound within the term budget,
// or is divergent at the requested point.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A closed form was requested for parameters outside its validity restriction.
struct RestrictionError : std::invalid_argument {
  explicit RestrictionError(const std::string& what) : std::invalid_argument(what) {}
};

// A truncation level too small to certify the requested quantity.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownPreset : std::invalid_argument {
  explicit UnknownPreset(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace qosc
