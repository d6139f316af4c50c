#pragma once

#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "pmsep/forward.hpp"
#include "pmsep/model.hpp"
#include "pmsep/piecewise.hpp"

namespace pmsep {

inline void PrintTo(const DiscreteCdf& f, std::ostream* os) {
  *os << "{";
  for (const auto& a : f.atoms()) *os << " (" << a.z << ", " << a.mass << ")";
  *os << " }";
}

}  // namespace pmsep

namespace pmsep::testing {

inline Scalar q(long n, long d = 1) { return Scalar(n, d); }

inline StateSpace thirds() { return StateSpace{{q(0), q(1, 3), q(2, 3), q(1)}}; }

inline Prior uniform_thirds() { return Prior::make("uniform", thirds(), std::vector<Scalar>(4, q(1, 4))); }

inline Menu example3_menu() {
  return Menu{"A", {{"a1", q(1, 4), q(-1, 4)}, {"a2", q(1, 8), q(1, 8)}, {"a3", q(-1, 4), q(1, 4)}}};
}

inline PiecewiseFunction example3_cost() {
  return PiecewiseFunction::from_points({{q(0), q(-1, 36)}, {q(1, 6), q(0)}, {q(1, 2), q(-10)}, {q(5, 6), q(0)}, {q(1), q(-1, 36)}});
}

inline PiecewiseFunction example3_concavified() {
  return PiecewiseFunction::from_points({{q(0), q(-1, 36)}, {q(1, 6), q(0)}, {q(5, 6), q(0)}, {q(1), q(-1, 36)}});
}

/// Price certificate for the two-atom optimum under the original cost.
inline PiecewiseFunction example3_price() {
  return PiecewiseFunction::from_points({{q(0), q(2, 9)}, {q(1, 3), q(1, 9)}, {q(2, 3), q(1, 9)}, {q(1), q(2, 9)}});
}

inline PiecewiseFunction example3_concavified_price() {
  return PiecewiseFunction::from_points({{q(0), q(2, 9)}, {q(1, 3), q(1, 8)}, {q(2, 3), q(1, 8)}, {q(1), q(2, 9)}});
}

inline StateSpace example2_states() { return StateSpace{{q(0), q(2, 5), q(3, 5), q(1)}}; }

inline Prior example2_prior() {
  return Prior::make("f0", example2_states(), {q(49, 100), q(1, 100), q(1, 100), q(49, 100)});
}

inline Prior example2_counterfactual_prior() {
  return Prior::make("f0_hat", example2_states(), {q(1, 2), q(0), q(0), q(1, 2)});
}

/// phi + c for the first menu; encoded as a zero-payoff singleton menu with
/// the whole objective carried by the cost.
inline PiecewiseFunction example2_gross() {
  return PiecewiseFunction::from_points({{q(0), q(2)}, {q(3, 10), q(1)}, {q(1, 2), q(102, 100)}, {q(7, 10), q(1)}, {q(1), q(2)}});
}

inline Menu zero_menu() { return Menu{"A1", {{"a", q(0), q(0)}}}; }

inline PiecewiseFunction example2_price() {
  return PiecewiseFunction::from_points({{q(0), q(2)}, {q(2, 5), q(102, 100)}, {q(3, 5), q(102, 100)}, {q(1), q(2)}});
}

/// Dataset of optimal behaviour in the three-act example: a1 at states 0 and
/// 1/3, a3 at 2/3 and 1.
inline Dataset example3_dataset() {
  auto prior = std::make_shared<const Prior>(uniform_thirds());
  auto menu = std::make_shared<const Menu>(example3_menu());
  Sdsc s{{{q(1), q(1), q(0), q(0)}, {q(0), q(0), q(0), q(0)}, {q(0), q(0), q(1), q(1)}}};
  return Dataset{thirds(), {Observation{"example3", prior, menu, s}}};
}

/// Builds an observation on a shared prior from act payoffs and a sigma matrix.
inline Observation observation(const std::string& id, std::shared_ptr<const Prior> prior,
                               std::vector<std::pair<Scalar, Scalar>> payoffs, std::vector<std::vector<Scalar>> sigma) {
  Menu m{id + "_menu", {}};
  for (std::size_t k = 0; k < payoffs.size(); ++k)
    m.acts.push_back({id + "_a" + std::to_string(k), payoffs[k].first, payoffs[k].second});
  return Observation{id, std::move(prior), std::make_shared<const Menu>(std::move(m)), Sdsc{std::move(sigma)}};
}

/// Datasets that satisfy NIAS but violate NIPMC. In each, information is
/// acquired where it is worth less and forgone where it is worth more.
inline std::vector<std::pair<std::string, Dataset>> nipmc_violations() {
  std::vector<std::pair<std::string, Dataset>> out;
  const StateSpace bin{{q(0), q(1)}};
  {
    auto p = std::make_shared<const Prior>(Prior::make("p", bin, {q(3, 5), q(2, 5)}));
    Dataset d{bin, {observation("A", p, {{q(0), q(0)}, {q(0), q(0)}}, {{q(1), q(0)}, {q(0), q(1)}}),
                    observation("B", p, {{q(1), q(0)}, {q(0), q(1)}}, {{q(1), q(1)}, {q(0), q(0)}})}};
    out.emplace_back("indifferent_informed_binary", std::move(d));
  }
  {
    const StateSpace tri{{q(0), q(1, 2), q(1)}};
    auto p = std::make_shared<const Prior>(Prior::make("p", tri, {q(1, 3), q(1, 3), q(1, 3)}));
    Dataset d{tri,
              {observation("A", p, {{q(0), q(0)}, {q(0), q(0)}, {q(0), q(0)}},
                           {{q(1), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(1)}}),
               observation("B", p, {{q(1), q(0)}, {q(0), q(1)}}, {{q(1), q(1), q(1)}, {q(0), q(0), q(0)}})}};
    out.emplace_back("indifferent_informed_three_states", std::move(d));
  }
  {
    auto p = std::make_shared<const Prior>(Prior::make("p", bin, {q(1, 2), q(1, 2)}));
    Dataset d{bin, {observation("A", p, {{q(0), q(0)}, {q(0), q(0)}}, {{q(1), q(0)}, {q(0), q(1)}}),
                    observation("B", p, {{q(1), q(0)}, {q(0), q(1)}}, {{q(1), q(1)}, {q(0), q(0)}}),
                    observation("C", p, {{q(3), q(0)}, {q(0), q(3)}}, {{q(0), q(0)}, {q(1), q(1)}})}};
    out.emplace_back("three_observations", std::move(d));
  }
  {
    // First fixture with payoffs scaled by 7 and menu B shifted by 5.
    auto p = std::make_shared<const Prior>(Prior::make("p", bin, {q(3, 5), q(2, 5)}));
    Dataset d{bin, {observation("A", p, {{q(0), q(0)}, {q(0), q(0)}}, {{q(1), q(0)}, {q(0), q(1)}}),
                    observation("B", p, {{q(12), q(5)}, {q(5), q(12)}}, {{q(1), q(1)}, {q(0), q(0)}})}};
    out.emplace_back("scaled_and_shifted", std::move(d));
  }
  {
    auto p = std::make_shared<const Prior>(uniform_thirds());
    Dataset d{thirds(), {observation("A", p, {{q(0), q(0)}, {q(0), q(0)}}, {{q(1), q(1), q(0), q(0)}, {q(0), q(0), q(1), q(1)}}),
                         observation("B", p, {{q(1), q(0)}, {q(0), q(1)}}, {{q(1), q(1), q(1), q(1)}, {q(0), q(0), q(0), q(0)}})}};
    out.emplace_back("partial_information_swap", std::move(d));
  }
  {
    auto p = std::make_shared<const Prior>(Prior::make("p", bin, {q(3, 5), q(2, 5)}));
    Dataset d{bin, {observation("A", p, {{q(2), q(0)}, {q(0), q(2)}}, {{q(1), q(1)}, {q(0), q(0)}}),
                    observation("B", p, {{q(1), q(0)}, {q(0), q(1)}}, {{q(1), q(0)}, {q(0), q(1)}})}};
    out.emplace_back("high_stakes_uninformed", std::move(d));
  }
  return out;
}

/// Concave piecewise-linear cost derivative with up to `max_kinks` interior
/// kinks and small rational data.
inline PiecewiseFunction random_concave_cost(std::mt19937& rng, int max_kinks) {
  std::uniform_int_distribution<int> nk(0, max_kinks);
  std::uniform_int_distribution<int> pos(1, 11);
  std::vector<Scalar> xs{q(0), q(1)};
  const int k = nk(rng);
  for (int i = 0; i < k; ++i) xs.push_back(q(pos(rng), 12));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::uniform_int_distribution<int> slope_step(0, 6);
  std::uniform_int_distribution<int> start(-3, 6);
  Scalar slope = q(start(rng), 2);
  Scalar value = q(static_cast<long>(rng() % 5) - 2, 4);
  std::vector<std::pair<Scalar, Scalar>> pts{{xs[0], value}};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    value += slope * (xs[i] - xs[i - 1]);
    pts.emplace_back(xs[i], value);
    slope -= q(slope_step(rng), 2);
  }
  return PiecewiseFunction::from_points(pts);
}

struct RandomInstance {
  Prior prior;
  std::vector<Menu> menus;
  PiecewiseFunction cost;
};

/// |Z| in [2, max_states], up to max_menus menus of up to max_acts acts.
inline RandomInstance random_instance(std::mt19937& rng, int max_states = 5, int max_menus = 3, int max_acts = 4) {
  std::uniform_int_distribution<int> ns(2, max_states);
  std::uniform_int_distribution<int> nm(1, max_menus);
  std::uniform_int_distribution<int> na(1, max_acts);
  std::uniform_int_distribution<int> pay(-8, 8);
  std::uniform_int_distribution<int> w(1, 5);
  std::uniform_int_distribution<int> pos(1, 9);

  StateSpace space{{q(0), q(1)}};
  const int nstates = ns(rng);
  while (static_cast<int>(space.states.size()) < nstates) {
    Scalar z = q(pos(rng), 10);
    if (!space.index_of(z)) space.states.push_back(z);
  }
  std::sort(space.states.begin(), space.states.end());
  std::vector<Scalar> weights;
  Scalar total(0);
  for (int i = 0; i < nstates; ++i) {
    weights.push_back(q(w(rng)));
    total += weights.back();
  }
  for (auto& x : weights) x /= total;

  RandomInstance inst{Prior::make("f0", space, weights), {}, random_concave_cost(rng, 4)};
  const int menus = nm(rng);
  for (int m = 0; m < menus; ++m) {
    Menu menu{"M" + std::to_string(m), {}};
    const int acts = na(rng);
    for (int a = 0; a < acts; ++a)
      menu.acts.push_back({"m" + std::to_string(m) + "a" + std::to_string(a), q(pay(rng), 4), q(pay(rng), 4)});
    inst.menus.push_back(std::move(menu));
  }
  return inst;
}

}  // namespace pmsep::testing
