#pragma once

#include <cstddef>
#include <vector>

#include "pmsep/axioms.hpp"
#include "pmsep/piecewise.hpp"

namespace pmsep {

enum class ConcavityStatus { certified, undetermined, budget_exceeded };

const char* to_string(ConcavityStatus status);

struct ConcavityVerdict {
  ConcavityStatus status = ConcavityStatus::undetermined;
  /// Observation index per state of the dataset's state space when certified.
  std::vector<std::size_t> assignment;
  std::vector<LambdaEntry> lambda;
  PiecewiseFunction cost;
  std::vector<PiecewiseFunction> prices;
  std::size_t programs_solved = 0;
  /// n^|Z|, saturated at SIZE_MAX.
  std::size_t total_assignments = 0;
  /// Feasible programs whose recovered cost failed the concavity test or the
  /// audit. Expected to stay zero.
  std::size_t rejected_candidates = 0;
};

struct ConcavityOptions {
  std::size_t budget = 10'000;
  SolveOptions lp;
};

/// n^|Z| for the dataset, saturated.
std::size_t assignment_count(const Dataset& dataset);

/// Searches assignments of a generating observation to every state, in
/// lexicographic order with the first state most significant, for a
/// rationalizing lambda whose cost is concave. A certificate is only issued
/// after the cost passes is_concave and verify_rationalization.
ConcavityVerdict certify_concave(const Dataset& dataset, const ConcavityOptions& options = {});

/// The program for one assignment, exposed for inspection and LP dumps.
LinearProgram assignment_program(const Dataset& dataset, const FarkasSystem& system,
                                 const std::vector<std::size_t>& assignment);

}  // namespace pmsep
