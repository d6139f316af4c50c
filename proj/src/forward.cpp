#include "pmsep/forward.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

#include "pmsep/errors.hpp"

namespace pmsep {

namespace {

void sort_unique(std::vector<Scalar>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void add_uniform(std::vector<Scalar>& grid, std::size_t resolution) {
  if (resolution < 2) return;
  const long n = static_cast<long>(resolution) - 1;
  for (long i = 0; i <= n; ++i) grid.push_back(Scalar(i, n));
}

}  // namespace

namespace {

/// Among all optimal duals, the one with the least total kink weight. The
/// program encodes dual feasibility, complementary slackness against f and
/// zero weight wherever the MPC gap of f is positive.
std::vector<Scalar> flattest_price_duals(const ForwardProblem& problem, const DiscreteCdf& f, const DiscreteCdf& prior,
                                         const SolveOptions& options) {
  const auto& g = problem.grid;
  const std::size_t n = g.size();
  LinearProgram lp;
  lp.add_variable(VarSign::free, "y_mass");
  lp.add_variable(VarSign::free, "y_mean");
  std::vector<LpTerm> obj;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const std::size_t v = lp.add_variable(VarSign::nonnegative, "y" + std::to_string(k));
    obj.push_back({v, Scalar(1)});
    if (mpc_gap(prior, f, g[k]).sign() > 0) lp.add_row({{v, Scalar(1)}}, Relation::equal, Scalar(0));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<LpTerm> terms{{0, Scalar(1)}, {1, g[i]}};
    for (std::size_t k = 1; k + 1 < n; ++k)
      if (g[i] < g[k]) terms.push_back({k + 1, g[k] - g[i]});
    const Relation rel = f.mass_at(g[i]).sign() > 0 ? Relation::equal : Relation::greater_equal;
    lp.add_row(std::move(terms), rel, problem.gross(g[i]));
  }
  lp.set_objective(Sense::minimize, std::move(obj));
  LpOutcome out = solve(lp, options);
  if (out.status != LpStatus::optimal)
    throw std::logic_error(std::string("price program not optimal: ") + to_string(out.status));
  return out.primal;
}

}  // namespace

ForwardProblem ForwardProblem::make(Prior prior, Menu menu, PiecewiseFunction cost, std::size_t resolution) {
  if (menu.acts.empty()) throw StructuralError("menu '" + menu.id + "' is empty");
  std::vector<Scalar> grid{Scalar(0), Scalar(1), prior.mean};
  for (const auto& z : prior.space.states) grid.push_back(z);
  for (const auto& z : indirect_utility_breakpoints(menu)) grid.push_back(z);
  for (const auto& z : cost.breakpoints()) grid.push_back(z);
  add_uniform(grid, resolution);
  sort_unique(grid);
  return ForwardProblem{std::move(prior), std::move(menu), std::move(cost), std::move(grid)};
}

Scalar ForwardProblem::gross(const Scalar& z) const { return indirect_utility(menu, z) + cost(z); }

LinearProgram forward_program(const ForwardProblem& problem) {
  const auto& g = problem.grid;
  const std::size_t n = g.size();
  const auto prior = DiscreteCdf::from_prior(problem.prior);

  LinearProgram lp;
  for (std::size_t i = 0; i < n; ++i) lp.add_variable(VarSign::nonnegative, "f" + std::to_string(i));
  std::vector<LpTerm> mass;
  std::vector<LpTerm> mean;
  for (std::size_t i = 0; i < n; ++i) {
    mass.push_back({i, Scalar(1)});
    mean.push_back({i, g[i]});
  }
  lp.add_row(std::move(mass), Relation::equal, Scalar(1), "mass");
  lp.add_row(std::move(mean), Relation::equal, prior.mean(), "mean");
  for (std::size_t k = 1; k + 1 < n; ++k) {
    std::vector<LpTerm> terms;
    for (std::size_t i = 0; i < k; ++i) terms.push_back({i, g[k] - g[i]});
    lp.add_row(std::move(terms), Relation::less_equal, prior.integrated(g[k]), "mpc" + std::to_string(k));
  }
  std::vector<LpTerm> obj;
  for (std::size_t i = 0; i < n; ++i) obj.push_back({i, problem.gross(g[i])});
  lp.set_objective(Sense::maximize, std::move(obj));

  return lp;
}

ForwardSolution solve_forward(const ForwardProblem& problem, const SolveOptions& options) {
  const auto& g = problem.grid;
  const std::size_t n = g.size();
  const auto prior = DiscreteCdf::from_prior(problem.prior);

  LpOutcome out = solve(forward_program(problem), options);
  if (out.status != LpStatus::optimal)
    throw std::logic_error(std::string("forward program not optimal: ") + to_string(out.status));

  ForwardSolution sol;
  sol.grid = g;
  sol.pivots = out.pivots;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < n; ++i)
    if (out.primal[i].sign() > 0) atoms.push_back({g[i], out.primal[i]});
  if (!atoms.empty() && atoms.front().mass.is_float()) {
    // Float mode: renormalize away rounding so the masses sum to one exactly.
    Scalar total(0);
    for (const auto& a : atoms) total += a.mass;
    for (auto& a : atoms) a.mass /= total;
  }
  sol.f_star = DiscreteCdf::from_atoms(std::move(atoms));
  sol.value = out.objective;

  sol.duals = flattest_price_duals(problem, sol.f_star, prior, options);
  std::vector<std::pair<Scalar, Scalar>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Scalar v = sol.duals[0] + sol.duals[1] * g[i];
    for (std::size_t k = 1; k + 1 < n; ++k)
      if (g[i] < g[k]) v += sol.duals[k + 1] * (g[k] - g[i]);
    pts.emplace_back(g[i], std::move(v));
  }
  sol.price = PiecewiseFunction::from_points(pts).simplified();
  for (const auto& a : sol.f_star.atoms()) sol.act.push_back(best_act(problem.menu, a.z));
  return sol;
}

Scalar oracle_value(const ForwardProblem& problem, std::size_t resolution, const SolveOptions& options) {
  if (resolution < problem.grid.size())
    throw DomainError("oracle resolution " + std::to_string(resolution) + " is below the grid size " +
                      std::to_string(problem.grid.size()));
  ForwardProblem refined = problem;
  add_uniform(refined.grid, resolution);
  sort_unique(refined.grid);
  return solve_forward(refined, options).value;
}

Scalar objective_value(const ForwardProblem& problem, const DiscreteCdf& f) {
  Scalar s(0);
  for (const auto& a : f.atoms()) s += problem.gross(a.z) * a.mass;
  return s;
}

std::vector<std::vector<Scalar>> garbling_witness(const Prior& prior, const DiscreteCdf& f) {
  const auto& states = prior.space.states;
  const auto& atoms = f.atoms();
  const std::size_t nz = states.size();
  const std::size_t ng = atoms.size();
  LinearProgram lp;
  // Variable index z * ng + k.
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t k = 0; k < ng; ++k) lp.add_variable(VarSign::nonnegative);
  for (std::size_t z = 0; z < nz; ++z) {
    std::vector<LpTerm> row;
    for (std::size_t k = 0; k < ng; ++k) row.push_back({z * ng + k, Scalar(1)});
    lp.add_row(std::move(row), Relation::equal, prior.weights[z]);
  }
  for (std::size_t k = 0; k < ng; ++k) {
    std::vector<LpTerm> col;
    std::vector<LpTerm> bary;
    for (std::size_t z = 0; z < nz; ++z) {
      col.push_back({z * ng + k, Scalar(1)});
      bary.push_back({z * ng + k, states[z]});
    }
    lp.add_row(std::move(col), Relation::equal, atoms[k].mass);
    lp.add_row(std::move(bary), Relation::equal, atoms[k].z * atoms[k].mass);
  }
  LpOutcome out = solve(lp);
  if (out.status != LpStatus::feasible) throw DomainError("distribution is not a mean-preserving contraction of the prior");
  std::vector<std::vector<Scalar>> m(nz, std::vector<Scalar>(ng));
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t k = 0; k < ng; ++k) m[z][k] = out.primal[z * ng + k];
  return m;
}

namespace {

std::size_t pick_act(const Menu& menu, const Scalar& z, TieBreak tie_break) {
  if (tie_break == TieBreak::lowest_index) return best_act(menu, z);
  std::size_t best = menu.acts.size() - 1;
  Scalar best_value = utility(menu.acts[best], z);
  for (std::size_t i = best; i-- > 0;) {
    Scalar v = utility(menu.acts[i], z);
    if (best_value < v) {
      best_value = std::move(v);
      best = i;
    }
  }
  return best;
}

}  // namespace

Dataset generate_dataset(const Prior& prior, const std::vector<Menu>& menus, const PiecewiseFunction& cost,
                         TieBreak tie_break) {
  auto shared_prior = std::make_shared<const Prior>(prior);
  std::vector<std::future<Observation>> jobs;
  for (std::size_t k = 0; k < menus.size(); ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k]() {
      const Menu& menu = menus[k];
      const auto problem = ForwardProblem::make(prior, menu, cost);
      const auto sol = solve_forward(problem);
      const auto m = garbling_witness(prior, sol.f_star);
      const std::size_t nz = prior.space.size();
      std::vector<std::vector<Scalar>> sigma(menu.acts.size(), std::vector<Scalar>(nz, Scalar(0)));
      for (std::size_t z = 0; z < nz; ++z) {
        if (prior.weights[z].sign() <= 0) {
          sigma[0][z] = Scalar(1);
          continue;
        }
        for (std::size_t g = 0; g < sol.f_star.size(); ++g) {
          const std::size_t a = pick_act(menu, sol.f_star.atoms()[g].z, tie_break);
          sigma[a][z] += m[z][g] / prior.weights[z];
        }
      }
      return Observation{menu.id.empty() ? "obs" + std::to_string(k) : menu.id, shared_prior,
                         std::make_shared<const Menu>(menu), Sdsc{std::move(sigma)}};
    }));
  }
  Dataset d{prior.space, {}};
  for (auto& j : jobs) d.observations.push_back(j.get());
  return d;
}

}  // namespace pmsep
