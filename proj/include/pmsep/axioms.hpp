#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmsep/lp.hpp"
#include "pmsep/model.hpp"
#include "pmsep/revealed.hpp"

namespace pmsep {

struct NiasViolation {
  std::size_t obs;
  std::size_t chosen;     ///< act with positive probability
  std::size_t deviation;  ///< act doing strictly better at the chosen act's revealed mean
  Scalar revealed_mean;
  Scalar deficit;         ///< u(deviation) - u(chosen) > 0
};

struct NiasReport {
  std::vector<NiasViolation> violations;
  [[nodiscard]] bool pass() const { return violations.empty(); }
};

NiasReport check_nias(const Dataset& dataset);

/// Row (A, B, a, b): observation A's chosen act a compared against act b of
/// observation B, A != B.
struct FarkasRow {
  std::size_t obs_a;
  std::size_t obs_b;
  std::size_t act_a;
  std::size_t act_b;
};

/// Column (z*, A). Columns at z* = 0 and z* = 1 carry free variables.
struct FarkasColumn {
  std::size_t obs;
  Scalar z_star;
  [[nodiscard]] bool is_free() const { return z_star.is_zero() || z_star == Scalar(1); }
};

/// A lambda <= b with the sign pattern implied by the columns.
struct FarkasSystem {
  std::vector<FarkasRow> rows;
  std::vector<FarkasColumn> columns;
  std::vector<std::vector<Scalar>> matrix;  ///< rows x columns, dense
  std::vector<Scalar> rhs;
  std::vector<RevealedSummary> summaries;   ///< per observation
  std::vector<std::vector<Scalar>> binding;  ///< Z* per observation, increasing
  std::vector<std::size_t> first_column;     ///< per observation

  [[nodiscard]] std::optional<std::size_t> column_index(std::size_t obs, const Scalar& z_star) const;

  /// Feasibility program with one variable per column and one <= row per row.
  [[nodiscard]] LinearProgram to_lp() const;
};

FarkasSystem build_farkas_system(const Dataset& dataset);

struct LambdaEntry {
  std::size_t obs;
  Scalar z_star;
  Scalar value;
};

struct NipmcOptions {
  /// Re-solve minimizing the sum of interior lambdas.
  bool flattest = false;
  SolveOptions lp;
};

struct NipmcVerdict {
  bool pass = false;
  std::vector<LambdaEntry> lambda;  ///< one entry per column when passing
  std::vector<Scalar> beta;         ///< one weight per row when failing
  FarkasSystem system;
  std::size_t pivots = 0;
};

/// Throws ResourceError when the LP pivot cap is hit.
NipmcVerdict check_nipmc(const Dataset& dataset, const NipmcOptions& options = {});

/// Checks beta against the system by direct multiplication: beta >= 0, zero
/// net weight on free columns, nonnegative on interior columns, b . beta < 0.
bool is_valid_certificate(const FarkasSystem& system, std::span<const Scalar> beta);

/// Aggregates of a certificate after normalizing it to total weight one.
struct ViolationSummary {
  std::vector<Scalar> weights;  ///< normalized beta
  Scalar payoff_change;         ///< sum of weight * [u(a) - u(b)] * sigma(a); negative
  std::vector<Scalar> column_totals;  ///< (A^T beta) per column
};

/// Throws DomainError for a passing verdict or an invalid certificate.
ViolationSummary summarize_violation(const NipmcVerdict& verdict);

/// Human-readable rendering of summarize_violation.
std::string explain_violation(const NipmcVerdict& verdict, const Dataset& dataset);

}  // namespace pmsep
