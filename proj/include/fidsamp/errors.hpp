#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy used across the library.  Argument validation raises
// std::invalid_argument / std::domain_error directly; the types below mark
// numeric failures a caller may want to distinguish and recover from.

namespace fidsamp {

// A matrix factorization hit a non-positive (or below-tolerance) pivot.
class DecompositionError : public std::runtime_error {
 public:
  explicit DecompositionError(const std::string& what) : std::runtime_error(what) {}
};

// Bracket expansion or iteration failed to locate a root.
class NoRootError : public std::runtime_error {
 public:
  explicit NoRootError(const std::string& what) : std::runtime_error(what) {}
};

// Every importance weight vanished: the requested conditional does not exist
// on the sampled support.
class DegeneratePosteriorError : public std::runtime_error {
 public:
  explicit DegeneratePosteriorError(const std::string& what) : std::runtime_error(what) {}
};

// A model lacks the structure (solver, flag) an operation requires.
class UnsupportedModelError : public std::runtime_error {
 public:
  explicit UnsupportedModelError(const std::string& what) : std::runtime_error(what) {}
};

// Too many per-draw solver failures while generating a sample cloud.
class SolverBudgetError : public std::runtime_error {
 public:
  explicit SolverBudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A CDF handed to a separability / inversion routine is not monotone in the
// required argument on the evaluation grid.
class NonMonotoneError : public std::runtime_error {
 public:
  explicit NonMonotoneError(const std::string& what) : std::runtime_error(what) {}
};

// A normalizer diverged: the requested distribution is not sigma-finite /
// not normalizable on the given support.
class SigmaFinitenessError : public std::runtime_error {
 public:
  explicit SigmaFinitenessError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fidsamp
