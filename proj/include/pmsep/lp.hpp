#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pmsep/scalar.hpp"

namespace pmsep {

enum class VarSign { free, nonnegative };
enum class Relation { less_equal, equal, greater_equal };
enum class Sense { feasibility, maximize, minimize };

struct LpTerm {
  std::size_t var;
  Scalar coef;
};

struct LpRow {
  std::vector<LpTerm> terms;
  Relation relation = Relation::less_equal;
  Scalar rhs;
  std::string name;
};

/// A linear program over sign-constrained variables with sparse rows.
class LinearProgram {
 public:
  std::size_t add_variable(VarSign sign, std::string name = {});

  /// Zero coefficients are dropped and repeated indices summed. Throws
  /// StructuralError for an index past the current variable count.
  std::size_t add_row(std::vector<LpTerm> terms, Relation relation, Scalar rhs, std::string name = {});

  void set_objective(Sense sense, std::vector<LpTerm> terms);

  [[nodiscard]] std::size_t num_variables() const { return signs_.size(); }
  [[nodiscard]] std::size_t num_rows() const { return rows_.size(); }
  [[nodiscard]] VarSign sign(std::size_t var) const { return signs_[var]; }
  [[nodiscard]] const std::string& variable_name(std::size_t var) const { return names_[var]; }
  [[nodiscard]] const std::vector<LpRow>& rows() const { return rows_; }
  [[nodiscard]] Sense sense() const { return sense_; }
  [[nodiscard]] const std::vector<LpTerm>& objective() const { return objective_; }

 private:
  std::vector<VarSign> signs_;
  std::vector<std::string> names_;
  std::vector<LpRow> rows_;
  Sense sense_ = Sense::feasibility;
  std::vector<LpTerm> objective_;
};

enum class LpStatus { optimal, feasible, infeasible, unbounded, error };

const char* to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::error;
  /// Values per variable when optimal or feasible.
  std::vector<Scalar> primal;
  /// Row duals when optimal: objective == sum_i rhs_i * dual_i.
  std::vector<Scalar> dual;
  /// Farkas ray when infeasible, scaled so that rhs . y == -1. Signs: y_i >= 0
  /// on <= rows, y_i <= 0 on >= rows, free on = rows; (A^T y)_j == 0 on free
  /// variables and >= 0 on nonnegative ones.
  std::vector<Scalar> certificate;
  Scalar objective;
  std::size_t pivots = 0;
  std::string error;
};

struct SolveOptions {
  std::size_t pivot_cap = 10'000'000;
};

/// Two-phase tableau simplex. Exact in rational mode. Throws ResourceError when
/// the pivot cap is hit and StructuralError for malformed programs.
LpOutcome solve(const LinearProgram& lp, const SolveOptions& options = {});

/// Outcomes in input order; failures are reported with LpStatus::error.
std::vector<LpOutcome> solve_batch(std::span<const LinearProgram> lps, const SolveOptions& options = {});

/// x satisfies every row and sign constraint.
bool is_feasible_point(const LinearProgram& lp, std::span<const Scalar> x);

/// y is a valid infeasibility ray for lp in the sense documented on LpOutcome
/// (with rhs . y < 0, any scale).
bool is_infeasibility_certificate(const LinearProgram& lp, std::span<const Scalar> y);

/// A^T y, one entry per variable.
std::vector<Scalar> transpose_times(const LinearProgram& lp, std::span<const Scalar> y);

/// CPLEX LP text rendering, for cross-checking with external solvers.
void write_lp_format(const LinearProgram& lp, std::ostream& os);

}  // namespace pmsep
