#include "pmsep/axioms.hpp"

#include <sstream>

#include "pmsep/errors.hpp"

namespace pmsep {

NiasReport check_nias(const Dataset& dataset) {
  NiasReport report;
  for (std::size_t o = 0; o < dataset.observations.size(); ++o) {
    const auto& obs = dataset.observations[o];
    const auto probs = choice_probabilities(obs);
    const auto& acts = obs.menu->acts;
    for (std::size_t a = 0; a < acts.size(); ++a) {
      if (probs[a].sign() <= 0) continue;
      const Scalar z = revealed_posterior_mean(obs, a);
      const Scalar ua = utility(acts[a], z);
      for (std::size_t b = 0; b < acts.size(); ++b) {
        Scalar gain = utility(acts[b], z) - ua;
        if (gain.sign() > 0) report.violations.push_back({o, a, b, z, std::move(gain)});
      }
    }
  }
  return report;
}

std::optional<std::size_t> FarkasSystem::column_index(std::size_t obs, const Scalar& z_star) const {
  if (obs >= binding.size()) return std::nullopt;
  for (std::size_t k = 0; k < binding[obs].size(); ++k)
    if (binding[obs][k] == z_star) return first_column[obs] + k;
  return std::nullopt;
}

LinearProgram FarkasSystem::to_lp() const {
  LinearProgram lp;
  for (const auto& col : columns) {
    std::ostringstream name;
    name << "lam_o" << col.obs << "_" << col.z_star.to_double();
    lp.add_variable(col.is_free() ? VarSign::free : VarSign::nonnegative, name.str());
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<LpTerm> terms;
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (!matrix[i][j].is_zero()) terms.push_back({j, matrix[i][j]});
    const auto& r = rows[i];
    lp.add_row(std::move(terms), Relation::less_equal, rhs[i],
               "r_" + std::to_string(r.obs_a) + "_" + std::to_string(r.obs_b) + "_" + std::to_string(r.act_a) + "_" +
                   std::to_string(r.act_b));
  }
  return lp;
}

FarkasSystem build_farkas_system(const Dataset& dataset) {
  FarkasSystem sys;
  const std::size_t n = dataset.observations.size();
  for (const auto& obs : dataset.observations) {
    sys.summaries.push_back(revealed_summary(obs));
    const auto prior_cdf = DiscreteCdf::from_prior(*obs.prior);
    sys.binding.push_back(binding_set(prior_cdf, sys.summaries.back().cdf, obs.prior->space));
  }
  for (std::size_t o = 0; o < n; ++o) {
    sys.first_column.push_back(sys.columns.size());
    for (const auto& z : sys.binding[o]) sys.columns.push_back({o, z});
  }
  for (std::size_t A = 0; A < n; ++A) {
    const auto& sa = sys.summaries[A];
    const auto& menu_a = dataset.observations[A].menu->acts;
    for (std::size_t B = 0; B < n; ++B) {
      if (A == B) continue;
      const auto& menu_b = dataset.observations[B].menu->acts;
      for (std::size_t a = 0; a < menu_a.size(); ++a) {
        if (!sa.chosen(a)) continue;
        const Scalar& za = sa.act_mean[a];
        const Scalar& pa = sa.act_probability[a];
        // The entries depend only on (A, B, a); compute once per b.
        std::vector<Scalar> entries(sys.columns.size(), Scalar(0));
        for (std::size_t j = 0; j < sys.columns.size(); ++j) {
          const auto& col = sys.columns[j];
          if (col.obs != A && col.obs != B) continue;
          Scalar v;
          if (col.z_star.is_zero())
            v = pa;
          else if (!(col.z_star < za))
            v = (col.z_star - za) * pa;
          else
            continue;
          entries[j] = col.obs == A ? v : -v;
        }
        const Scalar ua = utility(menu_a[a], za);
        for (std::size_t b = 0; b < menu_b.size(); ++b) {
          sys.rows.push_back({A, B, a, b});
          sys.matrix.push_back(entries);
          sys.rhs.push_back((ua - utility(menu_b[b], za)) * pa);
        }
      }
    }
  }
  return sys;
}

NipmcVerdict check_nipmc(const Dataset& dataset, const NipmcOptions& options) {
  NipmcVerdict verdict;
  verdict.system = build_farkas_system(dataset);
  const FarkasSystem& sys = verdict.system;
  LinearProgram lp = sys.to_lp();
  if (options.flattest) {
    std::vector<LpTerm> obj;
    for (std::size_t j = 0; j < sys.columns.size(); ++j)
      if (!sys.columns[j].is_free()) obj.push_back({j, Scalar(1)});
    lp.set_objective(Sense::minimize, std::move(obj));
  }
  LpOutcome out = solve(lp, options.lp);
  verdict.pivots = out.pivots;
  if (out.status == LpStatus::infeasible) {
    verdict.pass = false;
    verdict.beta = std::move(out.certificate);
    return verdict;
  }
  if (out.status != LpStatus::optimal && out.status != LpStatus::feasible)
    throw std::logic_error(std::string("unexpected LP status ") + to_string(out.status));
  verdict.pass = true;
  for (std::size_t j = 0; j < sys.columns.size(); ++j)
    verdict.lambda.push_back({sys.columns[j].obs, sys.columns[j].z_star, out.primal[j]});
  return verdict;
}

namespace {

std::vector<Scalar> column_totals(const FarkasSystem& system, std::span<const Scalar> beta) {
  std::vector<Scalar> t(system.columns.size(), Scalar(0));
  for (std::size_t i = 0; i < system.rows.size(); ++i) {
    if (beta[i].is_zero()) continue;
    for (std::size_t j = 0; j < t.size(); ++j)
      if (!system.matrix[i][j].is_zero()) t[j] += system.matrix[i][j] * beta[i];
  }
  return t;
}

}  // namespace

bool is_valid_certificate(const FarkasSystem& system, std::span<const Scalar> beta) {
  if (beta.size() != system.rows.size()) return false;
  Scalar by(0);
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (beta[i].sign() < 0) return false;
    by += system.rhs[i] * beta[i];
  }
  if (by.sign() >= 0) return false;
  const auto t = column_totals(system, beta);
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (system.columns[j].is_free() ? !t[j].is_zero() : t[j].sign() < 0) return false;
  }
  return true;
}

ViolationSummary summarize_violation(const NipmcVerdict& verdict) {
  if (verdict.pass) throw DomainError("the dataset satisfies NIPMC; there is no violation to explain");
  const FarkasSystem& sys = verdict.system;
  if (!is_valid_certificate(sys, verdict.beta)) throw DomainError("invalid violation certificate");
  Scalar total(0);
  for (const auto& b : verdict.beta) total += b;
  ViolationSummary s;
  for (const auto& b : verdict.beta) s.weights.push_back(b / total);
  s.payoff_change = Scalar(0);
  for (std::size_t i = 0; i < s.weights.size(); ++i) s.payoff_change += s.weights[i] * sys.rhs[i];
  s.column_totals = column_totals(sys, s.weights);
  return s;
}

std::string explain_violation(const NipmcVerdict& verdict, const Dataset& dataset) {
  const ViolationSummary s = summarize_violation(verdict);
  const FarkasSystem& sys = verdict.system;
  std::ostringstream os;
  os << "NIPMC violated: reallocating posterior means along the cycle below raises total expected payoff by "
     << -s.payoff_change << " (weights normalized to sum to 1).\n";
  os << "weighted switches (weight: observation/act at revealed mean -> observation/act):\n";
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    if (s.weights[i].is_zero()) continue;
    const auto& r = sys.rows[i];
    const auto& oa = dataset.observations[r.obs_a];
    const auto& ob = dataset.observations[r.obs_b];
    const Scalar& z = sys.summaries[r.obs_a].act_mean[r.act_a];
    const Scalar& p = sys.summaries[r.obs_a].act_probability[r.act_a];
    os << "  " << s.weights[i] << ": " << oa.id << "/" << oa.menu->acts[r.act_a].id << " at " << z << " (prob " << p
       << ") -> " << ob.id << "/" << ob.menu->acts[r.act_b].id << ", gain per unit "
       << (utility(ob.menu->acts[r.act_b], z) - utility(oa.menu->acts[r.act_a], z)) << "\n";
  }
  os << "balance per observation (mass sent minus mass received, must be 0):\n";
  for (std::size_t o = 0; o < dataset.observations.size(); ++o)
    os << "  " << dataset.observations[o].id << ": " << s.column_totals[sys.first_column[o]] << "\n";
  os << "binding-point conditions (must be 0 at z*=1, >= 0 inside):\n";
  for (std::size_t j = 0; j < sys.columns.size(); ++j) {
    if (sys.columns[j].z_star.is_zero()) continue;
    os << "  " << dataset.observations[sys.columns[j].obs].id << " z*=" << sys.columns[j].z_star << ": "
       << s.column_totals[j] << "\n";
  }
  return os.str();
}

}  // namespace pmsep
