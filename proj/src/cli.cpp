#include "pmsep/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include "pmsep/axioms.hpp"
#include "pmsep/concavity.hpp"
#include "pmsep/errors.hpp"
#include "pmsep/forward.hpp"
#include "pmsep/io.hpp"
#include "pmsep/recovery.hpp"

namespace pmsep::cli {

namespace {

using io::Json;
using io::scalar_json;

struct Result {
  int code = kPass;
  Json report;
  std::vector<io::Series> figures;
};

struct Context {
  std::optional<std::filesystem::path> dump_dir;
  std::ostream* err = nullptr;
};

Report finish(Result r, const std::string& command) {
  r.report["command"] = command;
  r.report["exit_code"] = r.code;
  if (!r.figures.empty()) {
    Json figs = Json::array();
    for (const auto& s : r.figures) figs.push_back(io::series_json(s));
    r.report["figures"] = figs;
  }
  return Report{r.code, std::move(r.report), std::move(r.figures)};
}

void dump_lp(const Context& ctx, const LinearProgram& lp, const std::string& name) {
  if (!ctx.dump_dir) return;
  std::filesystem::create_directories(*ctx.dump_dir);
  std::ofstream os(*ctx.dump_dir / name);
  if (!os) throw InputError("cannot write LP dump to '" + (*ctx.dump_dir / name).string() + "'");
  write_lp_format(lp, os);
}

Dataset load_valid_dataset(const Json& doc) {
  Dataset d = io::parse_dataset(doc);
  auto report = validate_dataset(d);
  if (!report.ok()) throw InputError("dataset is invalid: " + report.violations.front());
  return d;
}

Json lambda_json(const Dataset& d, const std::vector<LambdaEntry>& lambda) {
  Json out = Json::array();
  for (const auto& e : lambda)
    out.push_back({{"observation", d.observations[e.obs].id}, {"z_star", scalar_json(e.z_star)}, {"value", scalar_json(e.value)}});
  return out;
}

Json revealed_json(const Dataset& d, const FarkasSystem& sys) {
  Json out = Json::array();
  for (std::size_t o = 0; o < d.observations.size(); ++o) {
    const auto& s = sys.summaries[o];
    Json acts = Json::array();
    for (std::size_t a = 0; a < s.act_mean.size(); ++a)
      acts.push_back({{"act", d.observations[o].menu->acts[a].id}, {"mean", scalar_json(s.act_mean[a])},
                      {"probability", scalar_json(s.act_probability[a])}});
    Json zs = Json::array();
    for (const auto& z : sys.binding[o]) zs.push_back(scalar_json(z));
    out.push_back({{"observation", d.observations[o].id}, {"acts", acts}, {"binding_set", zs}});
  }
  return out;
}

Json nias_json(const Dataset& d, const NiasReport& nias) {
  Json v = Json::array();
  for (const auto& x : nias.violations) {
    const auto& obs = d.observations[x.obs];
    v.push_back({{"observation", obs.id}, {"chosen", obs.menu->acts[x.chosen].id},
                 {"deviation", obs.menu->acts[x.deviation].id}, {"revealed_mean", scalar_json(x.revealed_mean)},
                 {"deficit", scalar_json(x.deficit)}});
  }
  return Json{{"pass", nias.pass()}, {"violations", v}};
}

Json certificate_json(const Dataset& d, const NipmcVerdict& v) {
  const auto summary = summarize_violation(v);
  Json rows = Json::array();
  for (std::size_t i = 0; i < v.system.rows.size(); ++i) {
    if (v.beta[i].is_zero()) continue;
    const auto& r = v.system.rows[i];
    rows.push_back({{"observation_a", d.observations[r.obs_a].id}, {"act_a", d.observations[r.obs_a].menu->acts[r.act_a].id},
                    {"observation_b", d.observations[r.obs_b].id}, {"act_b", d.observations[r.obs_b].menu->acts[r.act_b].id},
                    {"beta", scalar_json(v.beta[i])}, {"weight", scalar_json(summary.weights[i])}});
  }
  return Json{{"rows", rows}, {"payoff_change", scalar_json(summary.payoff_change)},
              {"explanation", explain_violation(v, d)}};
}

Json audit_json(const Dataset& d, const RationalizationReport& rep) {
  Json obs = Json::array();
  for (std::size_t o = 0; o < rep.observations.size(); ++o) {
    const auto& a = rep.observations[o];
    obs.push_back({{"observation", d.observations[o].id},
                   {"price_convex", a.price_convex},
                   {"price_majorizes", a.price_majorizes},
                   {"contact_at_revealed", a.contact_at_revealed},
                   {"affine_off_binding", a.affine_off_binding},
                   {"integral_match", a.integral_match},
                   {"convexity_slack", scalar_json(a.convexity_slack)},
                   {"majorization_slack", scalar_json(a.majorization_slack)},
                   {"contact_gap", scalar_json(a.contact_gap)},
                   {"affinity_gap", scalar_json(a.affinity_gap)},
                   {"integral_gap", scalar_json(a.integral_gap)}});
  }
  return Json{{"ok", rep.ok()}, {"observations", obs}};
}

std::vector<Scalar> all_breakpoints(const PiecewiseFunction& f) { return f.breakpoints(); }

Result cmd_validate(const Json& doc) {
  Result r;
  Dataset d = io::parse_dataset(doc);
  auto report = validate_dataset(d);
  r.report["status"] = report.ok() ? "valid" : "invalid";
  r.report["violations"] = report.violations;
  r.code = report.ok() ? kPass : kRejected;
  return r;
}

Result cmd_check(const Context& ctx, const Json& doc, bool flattest) {
  Result r;
  Dataset d = load_valid_dataset(doc);
  const NiasReport nias = check_nias(d);
  r.report["nias"] = nias_json(d, nias);
  if (!nias.pass()) {
    r.report["status"] = "nias_violation";
    r.code = kRejected;
    return r;
  }
  NipmcOptions opt;
  opt.flattest = flattest;
  const NipmcVerdict v = check_nipmc(d, opt);
  dump_lp(ctx, v.system.to_lp(), "farkas.lp");
  r.report["revealed"] = revealed_json(d, v.system);
  Json nipmc{{"pass", v.pass}, {"rows", v.system.rows.size()}, {"columns", v.system.columns.size()}};
  if (v.pass) {
    nipmc["lambda"] = lambda_json(d, v.lambda);
    r.report["status"] = "pass";
  } else {
    nipmc["certificate"] = certificate_json(d, v);
    r.report["status"] = "nipmc_violation";
    r.code = kRejected;
  }
  r.report["nipmc"] = nipmc;
  return r;
}

Result cmd_recover(const Context& ctx, const Json& doc, bool flattest) {
  Result r = cmd_check(ctx, doc, flattest);
  if (r.code != kPass) {
    r.report["hint"] = "the dataset fails the axioms; run the check subcommand for the violation details";
    return r;
  }
  Dataset d = io::parse_dataset(doc);
  NipmcOptions opt;
  opt.flattest = flattest;
  const NipmcVerdict v = check_nipmc(d, opt);
  const Rationalization rat = rationalize(d, v);
  const RationalizationReport audit = verify_rationalization(d, rat.cost, rat.prices);
  r.report["cost"] = io::function_json(rat.cost);
  r.report["cost_is_concave"] = is_concave(rat.cost);
  Json prices = Json::array();
  for (std::size_t o = 0; o < d.observations.size(); ++o)
    prices.push_back({{"observation", d.observations[o].id}, {"function", io::function_json(rat.prices[o])}});
  r.report["prices"] = prices;
  r.report["rationalization"] = audit_json(d, audit);
  r.figures.push_back(io::sample("c", [&](const Scalar& z) { return rat.cost(z); }, all_breakpoints(rat.cost)));
  for (std::size_t o = 0; o < d.observations.size(); ++o) {
    const auto& obs = d.observations[o];
    r.figures.push_back(io::sample("P_" + obs.id, [&](const Scalar& z) { return rat.prices[o](z); },
                                   all_breakpoints(rat.prices[o])));
    r.figures.push_back(io::sample("phi_plus_c_" + obs.id,
                                   [&](const Scalar& z) { return indirect_utility(*obs.menu, z) + rat.cost(z); },
                                   all_breakpoints(rat.cost)));
  }
  if (!audit.ok()) {
    r.report["status"] = "audit_failed";
    r.code = kRejected;
  }
  return r;
}

Result cmd_solve(const Context& ctx, const Json& doc, std::optional<std::size_t> refine) {
  Result r;
  io::ForwardInput in = io::parse_forward_problem(doc);
  if (!refine) refine = in.refine;
  const ForwardProblem& p = in.problem;
  dump_lp(ctx, forward_program(p), "forward.lp");
  const ForwardSolution s = solve_forward(p);
  Json atoms = Json::array();
  for (std::size_t k = 0; k < s.f_star.size(); ++k) {
    const auto& a = s.f_star.atoms()[k];
    atoms.push_back({{"z", scalar_json(a.z)}, {"mass", scalar_json(a.mass)}, {"act", p.menu.acts[s.act[k]].id}});
  }
  const auto prior = DiscreteCdf::from_prior(p.prior);
  r.report["status"] = "optimal";
  r.report["f_star"] = atoms;
  r.report["value"] = scalar_json(s.value);
  r.report["price"] = io::function_json(s.price);
  Json grid = Json::array();
  for (const auto& g : s.grid) grid.push_back(scalar_json(g));
  r.report["grid"] = grid;
  r.report["monotone_partitional"] = is_monotone_partitional(prior, s.f_star);
  r.report["value_at_prior_mean"] = scalar_json(objective_value(p, DiscreteCdf::point_mass(p.prior.mean)));
  r.report["value_at_full_revelation"] = scalar_json(objective_value(p, prior));
  if (refine) {
    if (*refine < p.grid.size())
      throw InputError("--refine must be at least the grid size (" + std::to_string(p.grid.size()) + ")");
    const Scalar ov = oracle_value(p, *refine);
    r.report["oracle"] = Json{{"resolution", *refine}, {"value", scalar_json(ov)}, {"matches", ov == s.value}};
  }
  std::vector<Scalar> pts = s.grid;
  r.figures.push_back(io::sample("phi_plus_c", [&](const Scalar& z) { return p.gross(z); }, pts));
  r.figures.push_back(io::sample("price", [&](const Scalar& z) { return s.price(z); }, pts));
  return r;
}

Result cmd_concavity(const Context& ctx, const Json& doc, std::size_t budget) {
  Result r;
  Dataset d = load_valid_dataset(doc);
  const std::size_t total = assignment_count(d);
  if (ctx.err)
    *ctx.err << "concavity: " << d.observations.size() << "^" << d.space.size() << " = " << total
           << " assignment programs, budget " << budget << "\n";
  ConcavityOptions opt;
  opt.budget = budget;
  const ConcavityVerdict v = certify_concave(d, opt);
  r.report["status"] = to_string(v.status);
  r.report["programs_solved"] = v.programs_solved;
  r.report["total_assignments"] = total;
  r.report["budget"] = budget;
  r.report["rejected_candidates"] = v.rejected_candidates;
  if (v.status == ConcavityStatus::certified) {
    Json assignment = Json::array();
    for (std::size_t s = 0; s < v.assignment.size(); ++s)
      assignment.push_back({{"state", scalar_json(d.space[s])}, {"observation", d.observations[v.assignment[s]].id}});
    r.report["assignment"] = assignment;
    r.report["lambda"] = lambda_json(d, v.lambda);
    r.report["cost"] = io::function_json(v.cost);
    Json prices = Json::array();
    for (std::size_t o = 0; o < d.observations.size(); ++o)
      prices.push_back({{"observation", d.observations[o].id}, {"function", io::function_json(v.prices[o])}});
    r.report["prices"] = prices;
    r.figures.push_back(io::sample("c", [&](const Scalar& z) { return v.cost(z); }, all_breakpoints(v.cost)));
    dump_lp(ctx, assignment_program(d, build_farkas_system(d), v.assignment), "concavity.lp");
  }
  switch (v.status) {
    case ConcavityStatus::certified: r.code = kPass; break;
    case ConcavityStatus::undetermined: r.code = kRejected; break;
    case ConcavityStatus::budget_exceeded: r.code = kResourceError; break;
  }
  return r;
}

Result cmd_generate(const Json& doc) {
  Result r;
  io::GeneratorSpec spec = io::parse_generator_spec(doc);
  Dataset d = generate_dataset(spec.prior, spec.menus, spec.cost, spec.tie_break);
  r.report = io::dataset_json(d);
  return r;
}

Result cmd_verify(const Json& doc, const Json& rep) {
  Result r;
  Dataset d = load_valid_dataset(doc);
  if (!rep.is_object() || !rep.contains("cost") || !rep.contains("prices"))
    throw InputError("report has no cost and price functions");
  PiecewiseFunction cost = io::parse_function(rep.at("cost"));
  std::vector<PiecewiseFunction> prices;
  for (const auto& o : d.observations) {
    const Json* found = nullptr;
    for (const auto& p : rep.at("prices"))
      if (p.value("observation", "") == o.id) found = &p;
    if (!found) throw InputError("report has no price function for observation '" + o.id + "'");
    prices.push_back(io::parse_function(found->at("function")));
  }
  const RationalizationReport audit = verify_rationalization(d, cost, prices);
  r.report["status"] = audit.ok() ? "verified" : "rejected";
  r.report["rationalization"] = audit_json(d, audit);
  r.code = audit.ok() ? kPass : kRejected;
  return r;
}

void emit(const Json& report, const std::optional<std::string>& output, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (!output) {
    out << text;
    return;
  }
  std::ofstream os(*output);
  if (!os) throw InputError("cannot write '" + *output + "'");
  os << text;
}

}  // namespace

Report validate(const Json& dataset) { return finish(cmd_validate(dataset), "validate"); }

Report check(const Json& dataset, bool flattest) { return finish(cmd_check(Context{}, dataset, flattest), "check"); }

Report recover(const Json& dataset, bool flattest) { return finish(cmd_recover(Context{}, dataset, flattest), "recover"); }

Report solve(const Json& problem, std::optional<std::size_t> refine) {
  return finish(cmd_solve(Context{}, problem, refine), "solve");
}

Report concavity(const Json& dataset, std::size_t budget) {
  return finish(cmd_concavity(Context{}, dataset, budget), "concavity");
}

Json generate(const Json& spec) { return cmd_generate(spec).report; }

Report verify(const Json& dataset, const Json& report) { return finish(cmd_verify(dataset, report), "verify"); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Posterior-mean separable rationalization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> output;
  std::optional<std::string> figures_csv;
  std::optional<std::string> dump_dir;
  std::string numeric = "rational";
  if (const char* env = std::getenv("PMSEP_NUMERIC")) numeric = env;
  app.add_option("-o,--output", output, "Write the report here instead of standard output");
  app.add_option("--figures-csv", figures_csv, "Also write figure series as long-format CSV");
  app.add_option("--dump-lp", dump_dir, "Directory for CPLEX-LP dumps of the programs solved");
  app.add_option("--numeric", numeric, "rational (default) or float; overrides PMSEP_NUMERIC")
      ->check(CLI::IsMember({"rational", "float"}));

  std::string path;
  std::string second;
  bool flattest = false;
  std::optional<std::size_t> refine;
  std::size_t budget = 10'000;

  auto* validate_cmd = app.add_subcommand("validate", "Check a dataset file against the model invariants");
  validate_cmd->add_option("dataset", path, "Dataset JSON")->required();
  auto* check_cmd = app.add_subcommand("check", "Test NIAS and NIPMC");
  check_cmd->add_option("dataset", path, "Dataset JSON")->required();
  check_cmd->add_flag("--flattest", flattest, "Report the lambda with least interior weight");
  auto* recover_cmd = app.add_subcommand("recover", "Recover a cost derivative and price functions");
  recover_cmd->add_option("dataset", path, "Dataset JSON")->required();
  recover_cmd->add_flag("--flattest", flattest, "Use the lambda with least interior weight");
  auto* solve_cmd = app.add_subcommand("solve", "Solve a forward information-acquisition problem");
  solve_cmd->add_option("problem", path, "Forward problem JSON")->required();
  solve_cmd->add_option("--refine", refine, "Cross-check against an oracle on k evenly spaced points");
  auto* concavity_cmd = app.add_subcommand("concavity", "Search for a concave rationalizing cost");
  concavity_cmd->add_option("dataset", path, "Dataset JSON")->required();
  concavity_cmd->add_option("--budget", budget, "Maximum number of assignment programs");
  auto* generate_cmd = app.add_subcommand("generate", "Generate a dataset from optimal behaviour");
  generate_cmd->add_option("spec", path, "Generator spec JSON")->required();
  auto* verify_cmd = app.add_subcommand("verify", "Re-audit the cost and prices stored in a report");
  verify_cmd->add_option("dataset", path, "Dataset JSON")->required();
  verify_cmd->add_option("report", second, "Report JSON produced by recover or concavity")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  if (numeric != "rational" && numeric != "float") {
    err << "error: numeric mode must be 'rational' or 'float'\n";
    return kInputError;
  }
  NumericModeGuard mode(numeric == "float" ? NumericMode::floating : NumericMode::rational);
  Context ctx;
  if (dump_dir) ctx.dump_dir = *dump_dir;
  ctx.err = &err;

  std::string command;
  Result r;
  try {
    const Json doc = io::read_json_file(path);
    if (validate_cmd->parsed()) {
      command = "validate";
      r = cmd_validate(doc);
    } else if (check_cmd->parsed()) {
      command = "check";
      r = cmd_check(ctx, doc, flattest);
    } else if (recover_cmd->parsed()) {
      command = "recover";
      r = cmd_recover(ctx, doc, flattest);
    } else if (solve_cmd->parsed()) {
      command = "solve";
      r = cmd_solve(ctx, doc, refine);
    } else if (concavity_cmd->parsed()) {
      command = "concavity";
      r = cmd_concavity(ctx, doc, budget);
    } else if (generate_cmd->parsed()) {
      emit(cmd_generate(doc).report, output, out);
      return kPass;
    } else if (verify_cmd->parsed()) {
      command = "verify";
      r = cmd_verify(doc, io::read_json_file(second));
    }
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const StructuralError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }

  const Report rep = finish(std::move(r), command);
  try {
    emit(rep.body, output, out);
    if (figures_csv) {
      std::ofstream os(*figures_csv);
      if (!os) throw InputError("cannot write '" + *figures_csv + "'");
      os << io::series_csv(rep.figures);
    }
  } catch (const InputError& e) {
    err << "output error: " << e.what() << "\n";
    return kInputError;
  }
  return rep.exit_code;
}

}  // namespace pmsep::cli
