#include "pmsep/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "pmsep/errors.hpp"
#include "pmsep/recovery.hpp"

namespace pmsep::io {

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what() + " (byte " + std::to_string(e.byte) + ")");
  }
}

Scalar parse_scalar(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return Scalar::parse(j.get<std::string>());
    if (j.is_number_integer()) return Scalar(static_cast<long long>(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) return Scalar(static_cast<long long>(j.get<std::uint64_t>()));
    if (j.is_number_float()) return Scalar::parse(j.dump());
    if (j.is_object() && j.contains("exact")) return parse_scalar(j.at("exact"), where);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected a number or a \"p/q\" string, got " + j.dump());
}

Json scalar_json(const Scalar& x) { return Json{{"exact", x.str()}, {"approx", x.to_double()}}; }

Json scalar_text(const Scalar& x) { return x.str(); }

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const Json& a = field(j, key, where);
  if (!a.is_array()) throw InputError(where + ": field \"" + key + "\" must be an array");
  return a;
}

std::vector<Scalar> scalar_list(const Json& a, const std::string& where) {
  if (!a.is_array()) throw InputError(where + ": expected an array");
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse_scalar(a[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string string_or(const Json& j, const char* key, std::string fallback) {
  if (j.is_object() && j.contains(key) && j.at(key).is_string()) return j.at(key).get<std::string>();
  return fallback;
}

}  // namespace

StateSpace parse_states(const Json& j) { return StateSpace{scalar_list(j, "states")}; }

Prior parse_prior(const Json& j, const StateSpace& space, const std::string& fallback_id) {
  const std::string id = string_or(j, "id", fallback_id);
  const std::string where = "prior '" + id + "'";
  auto weights = scalar_list(j.is_array() ? j : array_field(j, "weights", where), where + " weights");
  if (weights.size() != space.size())
    throw InputError(where + ": " + std::to_string(weights.size()) + " weights for " + std::to_string(space.size()) +
                     " states");
  return Prior::make(id, space, std::move(weights));
}

Menu parse_menu(const Json& j, const StateSpace& space) {
  Menu m{string_or(j, "id", ""), {}};
  const std::string where = "menu '" + m.id + "'";
  const Json& acts = array_field(j, "acts", where);
  for (std::size_t k = 0; k < acts.size(); ++k) {
    const Json& a = acts[k];
    const std::string id = string_or(a, "id", "a" + std::to_string(k + 1));
    const std::string aw = where + " act '" + id + "'";
    if (a.contains("payoffs")) {
      m.acts.push_back(act_from_payoff_table(id, space, scalar_list(a.at("payoffs"), aw + " payoffs")));
    } else {
      m.acts.push_back({id, parse_scalar(field(a, "u0", aw), aw + " u0"), parse_scalar(field(a, "u1", aw), aw + " u1")});
    }
  }
  return m;
}

PiecewiseFunction parse_function(const Json& j, const std::optional<Scalar>& prior_mean) {
  try {
    if (j.contains("points")) {
      std::vector<std::pair<Scalar, Scalar>> pts;
      for (const auto& p : j.at("points")) {
        if (p.is_array() && p.size() == 2)
          pts.emplace_back(parse_scalar(p[0], "point z"), parse_scalar(p[1], "point value"));
        else
          pts.emplace_back(parse_scalar(field(p, "z", "point"), "point z"), parse_scalar(field(p, "value", "point"), "point value"));
      }
      return PiecewiseFunction::from_points(pts);
    }
    if (j.contains("segments")) {
      std::vector<Segment> segs;
      for (const auto& s : j.at("segments")) {
        Scalar c2 = s.contains("c2") ? parse_scalar(s.at("c2"), "segment c2") : Scalar(0);
        segs.push_back({parse_scalar(field(s, "lo", "segment"), "segment lo"), parse_scalar(field(s, "hi", "segment"), "segment hi"),
                        parse_scalar(field(s, "c0", "segment"), "segment c0"), parse_scalar(field(s, "c1", "segment"), "segment c1"),
                        std::move(c2)});
      }
      return PiecewiseFunction::from_segments(std::move(segs));
    }
    if (j.contains("variance")) {
      if (!prior_mean) throw InputError("variance cost needs a prior");
      return variance_cost(parse_scalar(field(j.at("variance"), "kappa", "variance"), "kappa"), *prior_mean);
    }
  } catch (const DomainError& e) {
    throw InputError(std::string("function: ") + e.what());
  }
  throw InputError("function: expected \"points\", \"segments\" or \"variance\"");
}

Json function_json(const PiecewiseFunction& f) {
  Json table = Json::array();
  for (const auto& [z, v] : f.table()) table.push_back({{"z", scalar_json(z)}, {"value", scalar_json(v)}});
  Json segs = Json::array();
  for (const auto& s : f.segments())
    segs.push_back({{"lo", scalar_json(s.lo)}, {"hi", scalar_json(s.hi)}, {"c0", scalar_json(s.c0)},
                    {"c1", scalar_json(s.c1)}, {"c2", scalar_json(s.c2)}});
  return Json{{"breakpoints", table}, {"segments", segs}};
}

Dataset parse_dataset(const Json& j) {
  if (!j.is_object()) throw InputError("dataset: top level must be an object");
  Dataset d;
  d.space = parse_states(field(j, "states", "dataset"));

  std::map<std::string, std::shared_ptr<const Prior>> priors;
  std::string default_prior;
  if (j.contains("prior")) {
    auto p = std::make_shared<const Prior>(parse_prior(j.at("prior"), d.space, "prior"));
    default_prior = p->id;
    priors[p->id] = p;
  }
  if (j.contains("priors")) {
    const Json& ps = j.at("priors");
    if (!ps.is_array()) throw InputError("dataset: \"priors\" must be an array");
    for (std::size_t k = 0; k < ps.size(); ++k) {
      auto p = std::make_shared<const Prior>(parse_prior(ps[k], d.space, "prior" + std::to_string(k + 1)));
      if (!priors.emplace(p->id, p).second) throw InputError("dataset: duplicate prior id '" + p->id + "'");
      if (ps.size() == 1) default_prior = p->id;
    }
  }
  if (priors.empty()) throw InputError("dataset: no prior given");

  std::map<std::string, std::shared_ptr<const Menu>> menus;
  const Json& ms = array_field(j, "menus", "dataset");
  for (std::size_t k = 0; k < ms.size(); ++k) {
    Menu m = parse_menu(ms[k], d.space);
    if (m.id.empty()) m.id = "menu" + std::to_string(k + 1);
    const std::string id = m.id;
    if (!menus.emplace(id, std::make_shared<const Menu>(std::move(m))).second)
      throw InputError("dataset: duplicate menu id '" + id + "'");
  }

  const Json& os = array_field(j, "observations", "dataset");
  for (std::size_t k = 0; k < os.size(); ++k) {
    const Json& o = os[k];
    Observation obs;
    obs.id = string_or(o, "id", "obs" + std::to_string(k + 1));
    const std::string where = "observation '" + obs.id + "'";
    const std::string pref = string_or(o, "prior_ref", default_prior);
    if (pref.empty()) throw InputError(where + ": prior_ref required when several priors are given");
    auto pit = priors.find(pref);
    if (pit == priors.end()) throw InputError(where + ": unknown prior '" + pref + "'");
    obs.prior = pit->second;
    const std::string mref = string_or(o, "menu_ref", ms.size() == 1 ? menus.begin()->first : "");
    auto mit = menus.find(mref);
    if (mit == menus.end()) throw InputError(where + ": unknown menu '" + mref + "'");
    obs.menu = mit->second;
    const Json& sigma = array_field(o, "sigma", where);
    for (std::size_t a = 0; a < sigma.size(); ++a)
      obs.sdsc.sigma.push_back(scalar_list(sigma[a], where + " sigma[" + std::to_string(a) + "]"));
    d.observations.push_back(std::move(obs));
  }
  return d;
}

Json dataset_json(const Dataset& d) {
  Json j;
  Json states = Json::array();
  for (const auto& z : d.space.states) states.push_back(scalar_text(z));
  j["states"] = states;
  Json priors = Json::array();
  Json menus = Json::array();
  std::vector<const Prior*> seen_p;
  std::vector<const Menu*> seen_m;
  Json obs = Json::array();
  for (const auto& o : d.observations) {
    if (std::find(seen_p.begin(), seen_p.end(), o.prior.get()) == seen_p.end()) {
      seen_p.push_back(o.prior.get());
      Json w = Json::array();
      for (const auto& x : o.prior->weights) w.push_back(scalar_text(x));
      priors.push_back({{"id", o.prior->id}, {"weights", w}});
    }
    if (std::find(seen_m.begin(), seen_m.end(), o.menu.get()) == seen_m.end()) {
      seen_m.push_back(o.menu.get());
      Json acts = Json::array();
      for (const auto& a : o.menu->acts) acts.push_back({{"id", a.id}, {"u0", scalar_text(a.u0)}, {"u1", scalar_text(a.u1)}});
      menus.push_back({{"id", o.menu->id}, {"acts", acts}});
    }
    Json sigma = Json::array();
    for (const auto& row : o.sdsc.sigma) {
      Json r = Json::array();
      for (const auto& x : row) r.push_back(scalar_text(x));
      sigma.push_back(r);
    }
    obs.push_back({{"id", o.id}, {"prior_ref", o.prior->id}, {"menu_ref", o.menu->id}, {"sigma", sigma}});
  }
  if (priors.size() == 1)
    j["prior"] = priors[0];
  else
    j["priors"] = priors;
  j["menus"] = menus;
  j["observations"] = obs;
  return j;
}

ForwardInput parse_forward_problem(const Json& j) {
  StateSpace space = parse_states(field(j, "states", "forward problem"));
  Prior prior = parse_prior(field(j, "prior", "forward problem"), space, "prior");
  Menu menu = parse_menu(field(j, "menu", "forward problem"), space);
  if (menu.acts.empty()) throw InputError("forward problem: menu has no acts");
  PiecewiseFunction cost = parse_function(field(j, "cost", "forward problem"), prior.mean);
  ValidationReport report;
  validate_state_space(space, report);
  validate_prior(prior, report);
  if (!report.ok()) throw InputError("forward problem: " + report.violations.front());
  ForwardInput in{ForwardProblem::make(std::move(prior), std::move(menu), std::move(cost)), std::nullopt};
  if (j.contains("refine")) in.refine = j.at("refine").get<std::size_t>();
  return in;
}

GeneratorSpec parse_generator_spec(const Json& j) {
  StateSpace space = parse_states(field(j, "states", "generator spec"));
  Prior prior = parse_prior(field(j, "prior", "generator spec"), space, "prior");
  ValidationReport report;
  validate_state_space(space, report);
  validate_prior(prior, report);
  if (!report.ok()) throw InputError("generator spec: " + report.violations.front());
  std::vector<Menu> menus;
  const Json& ms = array_field(j, "menus", "generator spec");
  for (std::size_t k = 0; k < ms.size(); ++k) {
    menus.push_back(parse_menu(ms[k], space));
    if (menus.back().id.empty()) menus.back().id = "menu" + std::to_string(k + 1);
    if (menus.back().acts.empty()) throw InputError("generator spec: menu '" + menus.back().id + "' has no acts");
  }
  PiecewiseFunction cost = parse_function(field(j, "cost", "generator spec"), prior.mean);
  TieBreak tb = TieBreak::lowest_index;
  const std::string t = string_or(j, "tie_break", "lowest");
  if (t == "highest")
    tb = TieBreak::highest_index;
  else if (t != "lowest")
    throw InputError("generator spec: tie_break must be \"lowest\" or \"highest\"");
  return GeneratorSpec{std::move(prior), std::move(menus), std::move(cost), tb};
}

Series sample(const std::string& name, const std::function<Scalar(const Scalar&)>& f,
              std::vector<Scalar> extra_points, int samples) {
  for (int i = 0; i <= samples; ++i) extra_points.push_back(Scalar(i, samples));
  std::sort(extra_points.begin(), extra_points.end());
  extra_points.erase(std::unique(extra_points.begin(), extra_points.end()), extra_points.end());
  Series s{name, {}};
  for (const auto& z : extra_points) s.points.emplace_back(z.to_double(), f(z).to_double());
  return s;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

Json series_json(const Series& s) {
  Json pts = Json::array();
  std::string csv = "z," + s.name + "\n";
  for (const auto& [x, y] : s.points) {
    pts.push_back({x, y});
    csv += fmt(x) + "," + fmt(y) + "\n";
  }
  return Json{{"name", s.name}, {"points", pts}, {"csv", csv}};
}

std::string series_csv(const std::vector<Series>& series) {
  std::string out = "series,z,value\n";
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) out += s.name + "," + fmt(x) + "," + fmt(y) + "\n";
  return out;
}

}  // namespace pmsep::io
