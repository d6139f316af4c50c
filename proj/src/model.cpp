#include "pmsep/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "pmsep/errors.hpp"

namespace pmsep {

std::optional<std::size_t> StateSpace::index_of(const Scalar& z) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == z) return i;
  return std::nullopt;
}

Prior Prior::make(std::string id, StateSpace space, std::vector<Scalar> weights) {
  if (weights.size() != space.size())
    throw StructuralError("prior '" + id + "' has " + std::to_string(weights.size()) +
                          " weights for " + std::to_string(space.size()) + " states");
  Scalar mean(0);
  for (std::size_t i = 0; i < weights.size(); ++i) mean += weights[i] * space[i];
  return Prior{std::move(id), std::move(space), std::move(weights), std::move(mean)};
}

std::optional<std::size_t> Menu::index_of(const std::string& act_id) const {
  for (std::size_t i = 0; i < acts.size(); ++i)
    if (acts[i].id == act_id) return i;
  return std::nullopt;
}

bool Dataset::single_prior() const {
  if (observations.empty()) return true;
  const auto* first = observations.front().prior.get();
  return std::all_of(observations.begin(), observations.end(),
                     [first](const Observation& o) { return o.prior.get() == first; });
}

Scalar utility(const Act& act, const Scalar& z) {
  if (z.sign() < 0 || Scalar(1) < z)
    throw DomainError("posterior mean " + z.str() + " outside [0,1]");
  return z * act.u1 + (Scalar(1) - z) * act.u0;
}

Scalar indirect_utility(const Menu& menu, const Scalar& z) {
  return utility(menu.acts.at(best_act(menu, z)), z);
}

std::size_t best_act(const Menu& menu, const Scalar& z) {
  if (menu.acts.empty()) throw StructuralError("menu '" + menu.id + "' is empty");
  std::size_t best = 0;
  Scalar best_value = utility(menu.acts[0], z);
  for (std::size_t i = 1; i < menu.acts.size(); ++i) {
    Scalar v = utility(menu.acts[i], z);
    if (best_value < v) {
      best_value = std::move(v);
      best = i;
    }
  }
  return best;
}

std::vector<Scalar> indirect_utility_breakpoints(const Menu& menu) {
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < menu.acts.size(); ++i) {
    for (std::size_t j = i + 1; j < menu.acts.size(); ++j) {
      const Act& a = menu.acts[i];
      const Act& b = menu.acts[j];
      // (u1a - u0a) z + u0a = (u1b - u0b) z + u0b
      Scalar slope_gap = (a.u1 - a.u0) - (b.u1 - b.u0);
      if (slope_gap.is_zero()) continue;
      Scalar z = (b.u0 - a.u0) / slope_gap;
      if (z.sign() > 0 && z < Scalar(1)) out.push_back(std::move(z));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_state_space(const StateSpace& space, ValidationReport& report) {
  if (space.size() < 2) {
    report.violations.push_back("state space must contain at least the states 0 and 1");
    return;
  }
  if (!space.states.front().is_zero()) report.violations.push_back("lowest state must be 0");
  if (space.states.back() != Scalar(1)) report.violations.push_back("highest state must be 1");
  for (std::size_t i = 1; i < space.size(); ++i) {
    if (!(space[i - 1] < space[i])) {
      report.violations.push_back("states must be strictly increasing (position " + std::to_string(i) + ")");
      break;
    }
  }
}

void validate_prior(const Prior& prior, ValidationReport& report) {
  const std::string tag = "prior '" + prior.id + "': ";
  if (prior.weights.size() != prior.space.size()) {
    report.violations.push_back(tag + "weight count does not match state count");
    return;
  }
  Scalar total(0);
  bool negative = false;
  for (const auto& w : prior.weights) {
    if (w.sign() < 0) negative = true;
    total += w;
  }
  if (negative) report.violations.push_back(tag + "weights must be nonnegative");
  if (total != Scalar(1)) report.violations.push_back(tag + "weights must sum to 1 (sum is " + total.str() + ")");
  if (prior.weights.empty()) return;
  if (prior.space.states.front().is_zero() && prior.weights.front().sign() <= 0)
    report.violations.push_back("prior must put mass on state 0");
  if (prior.space.states.back() == Scalar(1) && prior.weights.back().sign() <= 0)
    report.violations.push_back("prior must put mass on state 1");
  if (prior.mean.sign() <= 0 || !(prior.mean < Scalar(1)))
    report.violations.push_back(tag + "prior mean must lie strictly inside (0,1)");
}

ValidationReport validate_dataset(const Dataset& dataset) {
  ValidationReport report;
  validate_state_space(dataset.space, report);
  if (dataset.observations.empty()) report.violations.push_back("dataset has no observations");

  std::set<const Prior*> checked;
  for (const auto& obs : dataset.observations) {
    const std::string tag = "observation '" + obs.id + "': ";
    if (!obs.prior || !obs.menu) {
      report.violations.push_back(tag + "missing prior or menu");
      continue;
    }
    const Prior& prior = *obs.prior;
    const Menu& menu = *obs.menu;
    if (checked.insert(&prior).second) validate_prior(prior, report);
    for (const auto& z : prior.space.states)
      if (!dataset.space.index_of(z)) report.violations.push_back(tag + "prior state " + z.str() + " is not in the state space");

    if (menu.acts.empty()) report.violations.push_back(tag + "menu '" + menu.id + "' is empty");
    std::set<std::string> ids;
    for (const auto& a : menu.acts)
      if (!ids.insert(a.id).second) report.violations.push_back(tag + "duplicate act id '" + a.id + "' in menu '" + menu.id + "'");

    const auto& sigma = obs.sdsc.sigma;
    if (sigma.size() != menu.acts.size()) {
      report.violations.push_back(tag + "sigma has " + std::to_string(sigma.size()) + " rows for " +
                                  std::to_string(menu.acts.size()) + " acts");
      continue;
    }
    bool shape_ok = true;
    for (std::size_t a = 0; a < sigma.size(); ++a) {
      if (sigma[a].size() != prior.space.size()) {
        report.violations.push_back(tag + "sigma row for act '" + menu.acts[a].id + "' has wrong length");
        shape_ok = false;
      }
    }
    if (!shape_ok) continue;
    for (std::size_t a = 0; a < sigma.size(); ++a)
      for (std::size_t z = 0; z < prior.space.size(); ++z)
        if (sigma[a][z].sign() < 0)
          report.violations.push_back(tag + "negative probability for act '" + menu.acts[a].id + "' at state " +
                                      prior.space[z].str());
    for (std::size_t z = 0; z < prior.space.size(); ++z) {
      if (prior.weights.size() != prior.space.size() || prior.weights[z].sign() <= 0) continue;
      Scalar col(0);
      for (const auto& row : sigma) col += row[z];
      if (col != Scalar(1))
        report.violations.push_back(tag + "choice probabilities in menu '" + menu.id + "' at state " +
                                    prior.space[z].str() + " sum to " + col.str() + ", not 1");
    }
  }
  return report;
}

Act act_from_payoff_table(std::string id, const StateSpace& space, const std::vector<Scalar>& payoffs) {
  if (payoffs.size() != space.size() || space.size() < 2)
    throw InputError("act '" + id + "': payoff table length does not match the state space");
  Act act{std::move(id), payoffs.front(), payoffs.back()};
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (utility(act, space[i]) != payoffs[i])
      throw InputError("act '" + act.id + "': payoff table is not affine in the state (state " + space[i].str() + ")");
  }
  return act;
}

}  // namespace pmsep
