#pragma once

#include <stdexcept>
#include <string>

namespace ensteer {

/// A necessary or sufficient condition failed on the sampled family.
struct ConditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An eigenvalue/image arc is neither a real interval nor a unit-circle arc.
struct ArcClassificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A degree, pole-count, or iteration cap was exceeded (certified-mode failure).
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed file or value during parsing/serialization.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ensteer
