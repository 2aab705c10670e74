#pragma once

#include <string>
#include <vector>

#include "ensteer/types.hpp"

namespace ensteer {

/// One accounted approximation stage: the share of the tolerance it was
/// allotted and the sup error actually measured on the validation grid.
struct BudgetEntry {
  std::string name;
  double allotted = 0.0;
  double measured = 0.0;
};

/// Everything a synthesis run commits to: how the tolerance was split, what
/// each stage achieved, and the end-to-end steering error obtained by
/// re-simulating the synthesized input on the validation ensemble.
struct SynthesisReport {
  std::string method;  // "s1", "s2", or "s2ct"
  Mode mode = Mode::Adaptive;
  double eps = 0.0;
  std::vector<BudgetEntry> budget;
  std::vector<int> degrees;      // per-component / per-arc polynomial degrees
  int horizon = 0;               // discrete: T; continuous: number of pieces N
  double tau = 0.0;              // continuous only: piece duration
  double achieved_sup_error = 0.0;
  bool within_tolerance = false;
};

}  // namespace ensteer
