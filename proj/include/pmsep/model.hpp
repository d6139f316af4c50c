#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pmsep/scalar.hpp"

namespace pmsep {

/// Finite state grid in [0,1]; must start at 0, end at 1 and be strictly
/// increasing. Construction does not validate; see validate_dataset.
struct StateSpace {
  std::vector<Scalar> states;

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] const Scalar& operator[](std::size_t i) const { return states[i]; }
  [[nodiscard]] std::optional<std::size_t> index_of(const Scalar& z) const;
};

/// Prior weights over a state space, with its mean cached.
struct Prior {
  std::string id;
  StateSpace space;
  std::vector<Scalar> weights;
  Scalar mean;

  static Prior make(std::string id, StateSpace space, std::vector<Scalar> weights);
};

/// An act, stored through its payoffs at the extreme posterior means.
struct Act {
  std::string id;
  Scalar u0;
  Scalar u1;
};

struct Menu {
  std::string id;
  std::vector<Act> acts;

  [[nodiscard]] std::optional<std::size_t> index_of(const std::string& act_id) const;
};

/// Conditional choice probabilities, sigma[act][state].
struct Sdsc {
  std::vector<std::vector<Scalar>> sigma;
};

struct Observation {
  std::string id;
  std::shared_ptr<const Prior> prior;
  std::shared_ptr<const Menu> menu;
  Sdsc sdsc;
};

struct Dataset {
  StateSpace space;
  std::vector<Observation> observations;

  /// True when every observation points at the same Prior object.
  [[nodiscard]] bool single_prior() const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// u(a, z) = z u1 + (1 - z) u0. Throws DomainError for z outside [0,1].
Scalar utility(const Act& act, const Scalar& z);

/// max over the menu of utility(a, z).
Scalar indirect_utility(const Menu& menu, const Scalar& z);

/// Index of the first act attaining indirect_utility at z.
std::size_t best_act(const Menu& menu, const Scalar& z);

/// Points in (0,1) where two acts of the menu have equal utility. A superset
/// of the kinks of the indirect utility, sorted and deduplicated.
std::vector<Scalar> indirect_utility_breakpoints(const Menu& menu);

/// Checks a state space on its own.
void validate_state_space(const StateSpace& space, ValidationReport& report);

/// Checks a prior against the model requirements (mass at 0 and 1, sums
/// to one, interior mean).
void validate_prior(const Prior& prior, ValidationReport& report);

ValidationReport validate_dataset(const Dataset& dataset);

/// Rejects payoff tables that are not affine in the state; returns the
/// (u0, u1) endpoints otherwise.
Act act_from_payoff_table(std::string id, const StateSpace& space, const std::vector<Scalar>& payoffs);

}  // namespace pmsep
