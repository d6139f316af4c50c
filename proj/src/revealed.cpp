#include "pmsep/revealed.hpp"

#include <algorithm>

#include "pmsep/errors.hpp"

namespace pmsep {

DiscreteCdf DiscreteCdf::from_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.z < b.z; });
  DiscreteCdf cdf;
  Scalar total(0);
  Scalar mean(0);
  for (auto& a : atoms) {
    if (a.mass.sign() < 0) throw DomainError("negative mass at " + a.z.str());
    if (a.z.sign() < 0 || Scalar(1) < a.z) throw DomainError("atom " + a.z.str() + " outside [0,1]");
    total += a.mass;
    mean += a.z * a.mass;
    if (a.mass.is_zero()) continue;
    if (!cdf.atoms_.empty() && cdf.atoms_.back().z == a.z)
      cdf.atoms_.back().mass += a.mass;
    else
      cdf.atoms_.push_back(std::move(a));
  }
  if (total != Scalar(1)) throw DomainError("masses sum to " + total.str() + ", not 1");
  cdf.mean_ = std::move(mean);
  return cdf;
}

DiscreteCdf DiscreteCdf::point_mass(const Scalar& z) { return from_atoms({Atom{z, Scalar(1)}}); }

DiscreteCdf DiscreteCdf::from_prior(const Prior& prior) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < prior.space.size(); ++i) atoms.push_back({prior.space[i], prior.weights.at(i)});
  return from_atoms(std::move(atoms));
}

Scalar DiscreteCdf::operator()(const Scalar& z) const {
  Scalar f(0);
  for (const auto& a : atoms_) {
    if (z < a.z) break;
    f += a.mass;
  }
  return f;
}

Scalar DiscreteCdf::mass_at(const Scalar& z) const {
  for (const auto& a : atoms_)
    if (a.z == z) return a.mass;
  return Scalar(0);
}

Scalar DiscreteCdf::integrated(const Scalar& z) const {
  Scalar s(0);
  for (const auto& a : atoms_) {
    if (!(a.z < z)) break;
    s += a.mass * (z - a.z);
  }
  return s;
}

Scalar DiscreteCdf::variance() const {
  Scalar v(0);
  for (const auto& a : atoms_) {
    Scalar d = a.z - mean_;
    v += a.mass * d * d;
  }
  return v;
}

bool operator==(const DiscreteCdf& a, const DiscreteCdf& b) {
  if (a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i)
    if (a.atoms_[i].z != b.atoms_[i].z || a.atoms_[i].mass != b.atoms_[i].mass) return false;
  return true;
}

Scalar mpc_gap(const DiscreteCdf& prior, const DiscreteCdf& f, const Scalar& z) {
  return prior.integrated(z) - f.integrated(z);
}

std::vector<Scalar> gap_kinks(const DiscreteCdf& prior, const DiscreteCdf& f) {
  std::vector<Scalar> pts{Scalar(0), Scalar(1)};
  for (const auto& a : prior.atoms()) pts.push_back(a.z);
  for (const auto& a : f.atoms()) pts.push_back(a.z);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool is_mpc(const DiscreteCdf& prior, const DiscreteCdf& f) {
  if (prior.atoms().empty() || f.atoms().empty()) return false;
  for (const auto& z : gap_kinks(prior, f))
    if (mpc_gap(prior, f, z).sign() < 0) return false;
  return mpc_gap(prior, f, Scalar(1)).is_zero();
}

std::vector<Scalar> binding_set(const DiscreteCdf& prior, const DiscreteCdf& f, const StateSpace& space) {
  if (!is_mpc(prior, f)) throw DomainError("binding set requested for a pair that is not a mean-preserving contraction");
  std::vector<Scalar> out;
  for (const auto& z : space.states)
    if (mpc_gap(prior, f, z).is_zero()) out.push_back(z);
  return out;
}

std::vector<ZeroInterval> gap_zeros(const DiscreteCdf& prior, const DiscreteCdf& f) {
  const auto kinks = gap_kinks(prior, f);
  std::vector<Scalar> values;
  values.reserve(kinks.size());
  for (const auto& k : kinks) values.push_back(mpc_gap(prior, f, k));

  std::vector<ZeroInterval> out;
  auto push_point = [&out](const Scalar& lo, const Scalar& hi) {
    if (!out.empty() && out.back().hi == lo)
      out.back().hi = hi;
    else
      out.push_back({lo, hi});
  };
  for (std::size_t i = 0; i < kinks.size(); ++i) {
    if (values[i].is_zero()) push_point(kinks[i], kinks[i]);
    if (i + 1 == kinks.size()) break;
    const Scalar& v0 = values[i];
    const Scalar& v1 = values[i + 1];
    if (v0.is_zero() && v1.is_zero()) {
      push_point(kinks[i], kinks[i + 1]);
    } else if (v0.sign() * v1.sign() < 0) {
      // Linear piece crossing zero; only possible when the pair is not an MPC.
      Scalar t = v0 / (v0 - v1);
      Scalar z = kinks[i] + t * (kinks[i + 1] - kinks[i]);
      push_point(z, z);
    }
  }
  return out;
}

bool is_monotone_partitional(const DiscreteCdf& prior, const DiscreteCdf& f) {
  if (!is_mpc(prior, f)) throw DomainError("monotone-partitional test requires a mean-preserving contraction");
  const auto zeros = gap_zeros(prior, f);
  const auto& atoms = f.atoms();
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
    const Scalar& lo = atoms[i].z;
    const Scalar& hi = atoms[i + 1].z;
    const bool separated = std::any_of(zeros.begin(), zeros.end(), [&](const ZeroInterval& zi) {
      return !(zi.hi < lo) && !(hi < zi.lo);
    });
    if (!separated) return false;
  }
  return true;
}

std::vector<Scalar> choice_probabilities(const Observation& obs) {
  const auto& sigma = obs.sdsc.sigma;
  const auto& w = obs.prior->weights;
  std::vector<Scalar> p(sigma.size(), Scalar(0));
  for (std::size_t a = 0; a < sigma.size(); ++a)
    for (std::size_t z = 0; z < w.size(); ++z) p[a] += sigma[a][z] * w[z];
  return p;
}

Scalar revealed_posterior_mean(const Observation& obs, std::size_t act) {
  if (act >= obs.sdsc.sigma.size()) throw DomainError("act index out of range for observation '" + obs.id + "'");
  const auto& row = obs.sdsc.sigma[act];
  const auto& w = obs.prior->weights;
  const auto& states = obs.prior->space.states;
  Scalar num(0);
  Scalar den(0);
  for (std::size_t z = 0; z < w.size(); ++z) {
    Scalar m = row[z] * w[z];
    num += states[z] * m;
    den += m;
  }
  if (den.is_zero()) return obs.prior->mean;
  return num / den;
}

Scalar revealed_posterior_mean(const Observation& obs, const std::string& act_id) {
  auto idx = obs.menu->index_of(act_id);
  if (!idx) throw DomainError("act '" + act_id + "' is not in menu '" + obs.menu->id + "'");
  return revealed_posterior_mean(obs, *idx);
}

std::vector<Scalar> RevealedSummary::decision_at(const Scalar& z) const {
  const auto& atoms = cdf.atoms();
  for (std::size_t k = 0; k < atoms.size(); ++k)
    if (atoms[k].z == z) return decision[k];
  return act_probability;
}

RevealedSummary revealed_summary(const Observation& obs) {
  RevealedSummary s;
  s.act_probability = choice_probabilities(obs);
  const std::size_t n = s.act_probability.size();
  s.act_mean.reserve(n);
  for (std::size_t a = 0; a < n; ++a) s.act_mean.push_back(revealed_posterior_mean(obs, a));

  std::vector<Atom> atoms;
  for (std::size_t a = 0; a < n; ++a)
    if (s.chosen(a)) atoms.push_back({s.act_mean[a], s.act_probability[a]});
  s.cdf = DiscreteCdf::from_atoms(std::move(atoms));

  for (const auto& atom : s.cdf.atoms()) {
    std::vector<Scalar> d(n, Scalar(0));
    for (std::size_t a = 0; a < n; ++a)
      if (s.chosen(a) && s.act_mean[a] == atom.z) d[a] = s.act_probability[a] / atom.mass;
    s.decision.push_back(std::move(d));
  }
  return s;
}

}  // namespace pmsep
