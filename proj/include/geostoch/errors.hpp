#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geostoch {

// Caller supplied something malformed: wrong shape, bad config, off-manifold point.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but outside the domain of the map (cut locus, non-SPD, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Rank-deficient or otherwise degenerate data (e.g. a sample mean that cannot be decomposed).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation exists but not for this manifold / structure.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DivergedError : public std::runtime_error {
 public:
  DivergedError(std::size_t step, const std::string& what)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace geostoch
