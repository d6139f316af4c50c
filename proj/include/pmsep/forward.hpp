#pragma once

#include <cstddef>
#include <vector>

#include "pmsep/lp.hpp"
#include "pmsep/model.hpp"
#include "pmsep/piecewise.hpp"
#include "pmsep/revealed.hpp"

namespace pmsep {

/// Choose a posterior-mean distribution over `grid` for one menu, a prior and
/// a cost derivative.
struct ForwardProblem {
  Prior prior;
  Menu menu;
  PiecewiseFunction cost;
  std::vector<Scalar> grid;  ///< increasing, contains 0, 1, every state and the prior mean

  /// Grid = states, kinks of the indirect utility, breakpoints of the cost,
  /// the prior mean, plus `resolution` evenly spaced points i/(resolution-1)
  /// when resolution >= 2.
  static ForwardProblem make(Prior prior, Menu menu, PiecewiseFunction cost, std::size_t resolution = 0);

  /// phi(z) + c(z).
  [[nodiscard]] Scalar gross(const Scalar& z) const;
};

struct ForwardSolution {
  DiscreteCdf f_star;
  Scalar value;                ///< integral of phi + c against f_star
  std::vector<Scalar> grid;
  /// Price coefficients: [0] the mass row, [1] the mean row, then one per
  /// interior grid point. Chosen among the optimal duals to minimize the
  /// total kink weight.
  std::vector<Scalar> duals;
  PiecewiseFunction price;     ///< y0 + y1 z + sum_k y_k (g_k - z)^+
  std::vector<std::size_t> act;  ///< chosen act per atom of f_star (lowest index on ties)
  std::size_t pivots = 0;
};

/// Maximize the integral of phi + c over grid masses subject to total mass
/// one, the prior mean, and the MPC gap being nonnegative at every interior
/// grid point.
LinearProgram forward_program(const ForwardProblem& problem);

/// Exact LP over the problem grid. Throws std::logic_error if the grid
/// program is infeasible (not possible for a well-formed problem).
ForwardSolution solve_forward(const ForwardProblem& problem, const SolveOptions& options = {});

/// Optimal value on the grid merged with `resolution` evenly spaced points.
/// Throws DomainError when resolution is smaller than the problem grid.
Scalar oracle_value(const ForwardProblem& problem, std::size_t resolution, const SolveOptions& options = {});

/// Integral of phi + c against f.
Scalar objective_value(const ForwardProblem& problem, const DiscreteCdf& f);

enum class TieBreak { lowest_index, highest_index };

/// Optimal behaviour for every menu under one prior and cost, rendered as a
/// dataset: each optimal posterior mean is mapped to its best act and the
/// posterior distribution is realised by a Bayes-consistent signal.
Dataset generate_dataset(const Prior& prior, const std::vector<Menu>& menus, const PiecewiseFunction& cost,
                         TieBreak tie_break = TieBreak::lowest_index);

/// A joint distribution m[z][g] with row sums f0, column sums f*(g) and
/// barycentres g. Throws DomainError when f is not an MPC of the prior.
std::vector<std::vector<Scalar>> garbling_witness(const Prior& prior, const DiscreteCdf& f);

}  // namespace pmsep
