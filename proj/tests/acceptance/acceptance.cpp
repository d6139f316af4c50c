// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Forward problems run through the CLI on the bundled corpus.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/fixtures.hpp"
#include "../support/oracle.hpp"
#include "pmsep/axioms.hpp"
#include "pmsep/cli.hpp"
#include "pmsep/concavity.hpp"
#include "pmsep/forward.hpp"
#include "pmsep/io.hpp"
#include "pmsep/recovery.hpp"

using namespace pmsep;
namespace fx = pmsep::testing;
using fx::q;
using io::Json;

namespace {

const std::filesystem::path kCorpus = PMSEP_CORPUS_DIR;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

Json solve_cli(const std::string& file, std::vector<std::string> extra, Outcome& out) {
  std::vector<std::string> args{"pmsep", "solve"};
  args.insert(args.end(), extra.begin(), extra.end());
  args.push_back((kCorpus / file).string());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream os;
  std::ostringstream es;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), os, es);
  out.require(code == 0, file + ": exit " + std::to_string(code) + " " + es.str());
  if (code != 0) return Json::object();
  return Json::parse(os.str());
}

using AtomList = std::vector<std::pair<Scalar, Scalar>>;

AtomList report_atoms(const Json& report) {
  AtomList out;
  for (const auto& a : report.at("f_star"))
    out.emplace_back(io::parse_scalar(a.at("z").at("exact"), "z"), io::parse_scalar(a.at("mass").at("exact"), "mass"));
  return out;
}

std::string render(const AtomList& atoms) {
  std::string s;
  for (const auto& [z, m] : atoms) s += "(" + z.str() + "," + m.str() + ")";
  return s;
}

Outcome criterion1() {
  Outcome out;
  const Json r = solve_cli("example3_forward.json", {"--refine", "100"}, out);
  if (!out.pass) return out;
  const AtomList want{{q(1, 6), q(1, 2)}, {q(5, 6), q(1, 2)}};
  out.require(report_atoms(r) == want, "atoms " + render(report_atoms(r)));
  const Scalar value = io::parse_scalar(r.at("value").at("exact"), "value");
  const Scalar oracle = io::parse_scalar(r.at("oracle").at("value").at("exact"), "oracle");
  out.require(value == oracle, "oracle " + oracle.str() + " vs " + value.str());
  out.require(value == q(1, 6), "value " + value.str());
  return out;
}

Outcome criterion2() {
  Outcome out;
  const Json r = solve_cli("example3_concavified_forward.json", {}, out);
  if (!out.pass) return out;
  const AtomList want{{q(0), q(1, 4)}, {q(1, 2), q(1, 2)}, {q(1), q(1, 4)}};
  out.require(report_atoms(r) == want, "atoms " + render(report_atoms(r)));
  const PiecewiseFunction price = io::parse_function(r.at("price"));
  // 2/9 - 7z/24 on [0,1/3], 1/8 on [1/3,2/3], -5/72 + 7z/24 on [2/3,1].
  const std::vector<Segment> expected{{q(0), q(1, 3), q(2, 9), q(-7, 24), q(0)},
                                      {q(1, 3), q(2, 3), q(1, 8), q(0), q(0)},
                                      {q(2, 3), q(1), q(-5, 72), q(7, 24), q(0)}};
  const PiecewiseFunction simple = price.simplified();
  const auto& segs = simple.segments();
  bool same = segs.size() == expected.size();
  for (std::size_t i = 0; same && i < segs.size(); ++i)
    same = segs[i].lo == expected[i].lo && segs[i].hi == expected[i].hi && segs[i].c0 == expected[i].c0 &&
           segs[i].c1 == expected[i].c1 && segs[i].c2 == expected[i].c2;
  std::string got;
  for (const auto& s : segs) got += " [" + s.lo.str() + "," + s.hi.str() + "] " + s.c0.str() + " + " + s.c1.str() + "z";
  out.require(same, "price segments differ:" + got);
  const Act a1 = fx::example3_menu().acts[0];
  const Scalar lhs = price(q(1, 6));
  const Scalar rhs = utility(a1, q(1, 6)) + fx::example3_concavified()(q(1, 6));
  out.require(rhs < lhs, "P*(1/6) = " + lhs.str() + " not above " + rhs.str());
  return out;
}

Outcome criterion3() {
  Outcome out;
  const Json r = solve_cli("example2_forward.json", {"--refine", "101"}, out);
  if (!out.pass) return out;
  const AtomList want{{q(0), q(49, 100)}, {q(1, 2), q(2, 100)}, {q(1), q(49, 100)}};
  out.require(report_atoms(r) == want, "atoms " + render(report_atoms(r)));
  out.require(r.at("oracle").at("matches").get<bool>(), "oracle mismatch");
  const Json c = solve_cli("example2_counterfactual_forward.json", {}, out);
  if (!out.pass) return out;
  const Scalar full = io::parse_scalar(c.at("value").at("exact"), "value");
  const Scalar pooled = io::parse_scalar(c.at("value_at_prior_mean").at("exact"), "pooled");
  const Scalar revealed = io::parse_scalar(c.at("value_at_full_revelation").at("exact"), "full");
  out.require(full == revealed, "counterfactual optimum is not full revelation");
  out.require(pooled < full, "delta at 1/2 (" + pooled.str() + ") not below " + full.str());
  return out;
}

Outcome criterion4() {
  Outcome out;
  std::mt19937 rng(20240601);
  int instances = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = fx::random_instance(rng, 5, 3, 4);
    const std::string tag = "instance " + std::to_string(trial) + ": ";
    Dataset d = generate_dataset(inst.prior, inst.menus, inst.cost);
    ++instances;
    out.require(validate_dataset(d).ok(), tag + "invalid dataset");
    out.require(check_nias(d).pass(), tag + "NIAS failed");
    auto verdict = check_nipmc(d);
    if (!verdict.pass) {
      out.require(false, tag + "NIPMC failed");
      continue;
    }
    auto rat = rationalize(d, verdict);
    out.require(verify_rationalization(d, rat.cost, rat.prices).ok(), tag + "audit failed");
    for (const auto& obs : d.observations) {
      auto problem = ForwardProblem::make(*obs.prior, *obs.menu, rat.cost);
      const auto cdf = revealed_summary(obs).cdf;
      out.require(solve_forward(problem).value == objective_value(problem, cdf), tag + "revealed CDF not optimal");
    }
  }
  out.require(instances >= 50, "too few instances");
  out.notes.insert(out.notes.begin(), std::to_string(instances) + " instances");
  return out;
}

Outcome criterion5() {
  Outcome out;
  int count = 0;
  for (const auto& [name, d] : fx::nipmc_violations()) {
    ++count;
    out.require(check_nias(d).pass(), name + ": NIAS should hold");
    auto v = check_nipmc(d);
    if (v.pass) {
      out.require(false, name + ": NIPMC passed");
      continue;
    }
    std::vector<fx::CertRow> rows;
    for (const auto& r : v.system.rows) rows.push_back({r.obs_a, r.obs_b, r.act_a, r.act_b});
    auto check = fx::check_certificate(d, rows, v.beta);
    out.require(check.nonnegative, name + ": negative weight");
    out.require(check.free_columns_zero, name + ": free column not balanced");
    out.require(check.interior_columns_nonnegative, name + ": interior column negative");
    out.require(check.strictly_improving, name + ": b.beta not negative");
    out.require(is_valid_certificate(v.system, v.beta), name + ": library check disagrees");
  }
  out.require(count >= 5, "too few fixtures");
  out.notes.insert(out.notes.begin(), std::to_string(count) + " fixtures");
  return out;
}

Outcome criterion6() {
  Outcome out;
  std::mt19937 rng(66);
  std::uniform_int_distribution<int> w(1, 6);
  std::uniform_int_distribution<int> kap(1, 12);
  int pairs = 0;
  while (pairs < 20) {
    // Prior on a few points of [0,1] with a random merge of neighbouring
    // atoms into their barycentre, which is always an MPC.
    const int n = 2 + static_cast<int>(rng() % 5);
    std::vector<Atom> prior;
    Scalar total(0);
    for (int i = 0; i < n; ++i) {
      prior.push_back({q(i, n - 1), q(w(rng))});
      total += prior.back().mass;
    }
    for (auto& a : prior) a.mass /= total;
    std::vector<Atom> f;
    for (std::size_t i = 0; i < prior.size();) {
      const std::size_t len = 1 + rng() % 3;
      Scalar m(0), mz(0);
      for (std::size_t j = i; j < std::min(prior.size(), i + len); ++j) {
        m += prior[j].mass;
        mz += prior[j].mass * prior[j].z;
      }
      f.push_back({mz / m, m});
      i += len;
    }
    const auto f0 = DiscreteCdf::from_atoms(prior);
    const auto ff = DiscreteCdf::from_atoms(f);
    if (!is_mpc(f0, ff)) {
      out.require(false, "generated pair is not an MPC");
      break;
    }
    const Scalar z0 = f0.mean();
    if (z0.is_zero() || z0 == q(1)) continue;
    const Scalar kappa = q(kap(rng), 4);
    const Scalar cost = information_cost(variance_cost(kappa, z0), ff);
    Scalar direct(0);
    for (const auto& a : f) direct += a.mass * (a.z - z0) * (a.z - z0);
    out.require(cost == kappa * direct, "C(F) = " + cost.str() + " vs " + (kappa * direct).str());
    ++pairs;
  }
  out.notes.insert(out.notes.begin(), std::to_string(pairs) + " pairs");
  return out;
}

Outcome criterion7() {
  Outcome out;
  out.require(!is_concave(fx::example3_cost()), "original cost reported concave");
  out.require(is_concave(fx::example3_concavified()), "concavified cost reported not concave");
  std::mt19937 rng(7007);
  int certified = 0;
  int datasets = 0;
  while (datasets < 30) {
    auto inst = fx::random_instance(rng, 4, 2, 3);
    if (inst.menus.size() > 2 || inst.prior.space.size() > 4) continue;
    Dataset d = generate_dataset(inst.prior, inst.menus, inst.cost);
    ++datasets;
    const std::size_t bound = assignment_count(d);
    auto v = certify_concave(d);
    const std::string tag = "dataset " + std::to_string(datasets) + ": ";
    out.require(bound <= 16, tag + "bound above 16");
    out.require(v.programs_solved <= bound, tag + "more programs than assignments");
    if (v.status != ConcavityStatus::certified) {
      out.require(false, tag + to_string(v.status));
      continue;
    }
    ++certified;
    out.require(is_concave(v.cost), tag + "certified cost not concave");
    out.require(verify_rationalization(d, v.cost, v.prices).ok(), tag + "certified cost fails audit");
  }
  // Soundness on the three-act dataset, whatever the verdict.
  auto d = fx::example3_dataset();
  auto v = certify_concave(d);
  if (v.status == ConcavityStatus::certified) {
    out.require(is_concave(v.cost), "three-act certificate not concave");
    out.require(verify_rationalization(d, v.cost, v.prices).ok(), "three-act certificate fails audit");
  }
  out.notes.insert(out.notes.begin(), std::to_string(certified) + "/" + std::to_string(datasets) + " certified");
  return out;
}

Outcome criterion8() {
  // Covered by the property suites: necessity through the roundtrip, and
  // sufficiency through construction plus the independent audit. Re-run both
  // directions on a fresh sample and the violation corpus.
  Outcome out;
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = fx::random_instance(rng);
    Dataset d = generate_dataset(inst.prior, inst.menus, inst.cost);
    auto v = check_nipmc(d, {true, {}});
    out.require(check_nias(d).pass() && v.pass, "generated data rejected");
    if (!v.pass) continue;
    auto rat = rationalize(d, v);
    out.require(verify_rationalization(d, rat.cost, rat.prices).ok(), "construction fails audit");
  }
  for (const auto& [name, d] : fx::nipmc_violations()) {
    auto v = check_nipmc(d);
    out.require(!v.pass && is_valid_certificate(v.system, v.beta), name + ": no valid certificate");
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit_seconds;
  };
  const std::vector<Criterion> criteria{
      {1, "three-act forward optimum", criterion1, 1.0},
      {2, "concavified three-act optimum and price", criterion2, 1.0},
      {3, "pooling example and two-point counterfactual", criterion3, 1.0},
      {4, "roundtrip property suite", criterion4, 60.0},
      {5, "violation certificates", criterion5, 0.0},
      {6, "variance-cost identity", criterion6, 0.0},
      {7, "concavity algorithm soundness", criterion7, 0.0},
      {8, "axiom equivalence via property suites", criterion8, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds)
      out.require(false, "runtime " + std::to_string(secs) + "s over " + std::to_string(c.limit_seconds) + "s");
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name;
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << secs;
    std::cout << " [" << t.str() << "s]";
    for (const auto& n : out.notes) std::cout << "; " << n;
    std::cout << "\n";
  }
  return failures == 0 ? 0 : 1;
}
