#include "pmsep/concavity.hpp"

#include <algorithm>
#include <limits>

#include "pmsep/errors.hpp"
#include "pmsep/recovery.hpp"

namespace pmsep {

const char* to_string(ConcavityStatus status) {
  switch (status) {
    case ConcavityStatus::certified: return "certified";
    case ConcavityStatus::undetermined: return "undetermined";
    case ConcavityStatus::budget_exceeded: return "budget_exceeded";
  }
  return "undetermined";
}

std::size_t assignment_count(const Dataset& dataset) {
  const std::size_t n = dataset.observations.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < dataset.space.size(); ++i) {
    if (n != 0 && total > std::numeric_limits<std::size_t>::max() / n) return std::numeric_limits<std::size_t>::max();
    total *= n;
  }
  return total;
}

namespace {

/// Lambda_A(z) as terms over the system's columns.
std::vector<LpTerm> envelope_terms(const FarkasSystem& system, std::size_t obs, const Scalar& z, const Scalar& sign) {
  std::vector<LpTerm> terms;
  for (std::size_t k = 0; k < system.binding[obs].size(); ++k) {
    const Scalar& zs = system.binding[obs][k];
    const std::size_t col = system.first_column[obs] + k;
    if (zs.is_zero())
      terms.push_back({col, sign});
    else if (z < zs)
      terms.push_back({col, sign * (zs - z)});
  }
  return terms;
}

std::vector<std::size_t> decode(std::size_t index, std::size_t n, std::size_t states) {
  std::vector<std::size_t> a(states, 0);
  for (std::size_t i = states; i-- > 0;) {
    a[i] = index % n;
    index /= n;
  }
  return a;
}

}  // namespace

LinearProgram assignment_program(const Dataset& dataset, const FarkasSystem& system,
                                 const std::vector<std::size_t>& assignment) {
  LinearProgram lp = system.to_lp();
  const auto& states = dataset.space.states;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const Scalar& z = states[s];
    const std::size_t gen = assignment[s];
    if (auto col = system.column_index(gen, z))
      lp.add_row({{*col, Scalar(1)}}, Relation::equal, Scalar(0), "flat_" + std::to_string(s));
    const Scalar phi_gen = indirect_utility(*dataset.observations[gen].menu, z);
    for (std::size_t b = 0; b < dataset.observations.size(); ++b) {
      if (b == gen) continue;
      auto terms = envelope_terms(system, gen, z, Scalar(1));
      auto neg = envelope_terms(system, b, z, Scalar(-1));
      terms.insert(terms.end(), neg.begin(), neg.end());
      lp.add_row(std::move(terms), Relation::less_equal,
                 phi_gen - indirect_utility(*dataset.observations[b].menu, z),
                 "gen_" + std::to_string(s) + "_" + std::to_string(b));
    }
  }
  return lp;
}

ConcavityVerdict certify_concave(const Dataset& dataset, const ConcavityOptions& options) {
  constexpr std::size_t kChunk = 8;
  ConcavityVerdict verdict;
  verdict.total_assignments = assignment_count(dataset);
  const std::size_t n = dataset.observations.size();
  const std::size_t nz = dataset.space.size();
  if (n == 0) return verdict;
  const FarkasSystem system = build_farkas_system(dataset);

  std::size_t next = 0;
  while (next < verdict.total_assignments) {
    if (verdict.programs_solved >= options.budget) {
      verdict.status = ConcavityStatus::budget_exceeded;
      return verdict;
    }
    const std::size_t count = std::min({kChunk, options.budget - verdict.programs_solved,
                                        verdict.total_assignments - next});
    std::vector<std::vector<std::size_t>> assignments;
    std::vector<LinearProgram> programs;
    for (std::size_t k = 0; k < count; ++k) {
      assignments.push_back(decode(next + k, n, nz));
      programs.push_back(assignment_program(dataset, system, assignments.back()));
    }
    const auto outcomes = solve_batch(programs, options.lp);
    verdict.programs_solved += count;
    next += count;
    for (std::size_t k = 0; k < count; ++k) {
      if (outcomes[k].status == LpStatus::error) throw ResourceError(outcomes[k].error);
      if (outcomes[k].status != LpStatus::feasible) continue;
      std::vector<LambdaEntry> lambda;
      for (std::size_t j = 0; j < system.columns.size(); ++j)
        lambda.push_back({system.columns[j].obs, system.columns[j].z_star, outcomes[k].primal[j]});
      PiecewiseFunction cost = recover_cost(dataset, lambda);
      std::vector<PiecewiseFunction> prices;
      for (std::size_t o = 0; o < n; ++o) prices.push_back(price_function(lambda, o));
      if (!is_concave(cost) || !verify_rationalization(dataset, cost, prices).ok()) {
        ++verdict.rejected_candidates;
        continue;
      }
      verdict.status = ConcavityStatus::certified;
      verdict.assignment = assignments[k];
      verdict.lambda = std::move(lambda);
      verdict.cost = std::move(cost);
      verdict.prices = std::move(prices);
      return verdict;
    }
  }
  verdict.status = ConcavityStatus::undetermined;
  return verdict;
}

}  // namespace pmsep
