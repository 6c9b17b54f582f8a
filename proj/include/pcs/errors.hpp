#pragma once

#include <stdexcept>
#include <string>

namespace pcs {

/// A cut was empty or covered the whole ground set.
class InvalidCut : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Conductance or balance requested for a cut whose smaller side has zero volume.
class DegenerateCut : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exponential-time routine invoked on an input above its vertex limit.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NotAPartition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The power iteration did not stagnate within its iteration budget.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every stream-recovery retry for a sparsifier slot reported FAIL.
class SketchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a decomposition needs more sparsifiers than were provisioned.
class PoolExhausted : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pcs
