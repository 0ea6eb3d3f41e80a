#pragma once

#include <stdexcept>
#include <string>

namespace spreadcol {

/// Base of every domain error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked hypothesis of a construction does not hold for this input.
/// Recoverable: callers may fall back to a construction without guarantees.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// The cluster is wider than the palette (R < 0 in the matching step).
class NegativeR : public HypothesisViolated {
 public:
  using HypothesisViolated::HypothesisViolated;
};

/// A uniform choice was requested from an empty set.
class EmptyChoiceSet : public HypothesisViolated {
 public:
  using HypothesisViolated::HypothesisViolated;
};

/// Rejection sampling ran out of attempts.
class MaxTriesExceeded : public Error {
 public:
  using Error::Error;
};

/// A sequential list colorer found a vertex with no available color.
class StuckVertex : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search exceeded its node budget.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A decomposition could not be repaired into one satisfying its invariants.
class VerificationFailed : public Error {
 public:
  using Error::Error;
};

/// An in-flight inequality that must follow from checked hypotheses failed.
/// This indicates a bug, never a property of the input.
class InvariantViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace spreadcol
