#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmsep/model.hpp"
#include "pmsep/scalar.hpp"

namespace pmsep {

struct Atom {
  Scalar z;
  Scalar mass;
};

/// Finite-support distribution of posterior means on [0,1].
///
/// Atoms are kept sorted by location, with duplicates merged and zero masses
/// dropped. Masses must be positive and sum to one.
class DiscreteCdf {
 public:
  DiscreteCdf() = default;

  /// Throws DomainError when masses are negative, do not sum to one, or a
  /// location lies outside [0,1].
  static DiscreteCdf from_atoms(std::vector<Atom> atoms);
  static DiscreteCdf point_mass(const Scalar& z);
  static DiscreteCdf from_prior(const Prior& prior);

  [[nodiscard]] const std::vector<Atom>& atoms() const { return atoms_; }
  [[nodiscard]] const Scalar& mean() const { return mean_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }

  /// F(z), right-continuous.
  [[nodiscard]] Scalar operator()(const Scalar& z) const;

  /// Mass at exactly z (zero off the support).
  [[nodiscard]] Scalar mass_at(const Scalar& z) const;

  /// Integral of F over [0, z].
  [[nodiscard]] Scalar integrated(const Scalar& z) const;

  /// Sum of (z - mean)^2 weighted by the masses.
  [[nodiscard]] Scalar variance() const;

  friend bool operator==(const DiscreteCdf& a, const DiscreteCdf& b);

 private:
  std::vector<Atom> atoms_;
  Scalar mean_;
};

/// I(z) = integral over [0,z] of (F0 - F).
Scalar mpc_gap(const DiscreteCdf& prior, const DiscreteCdf& f, const Scalar& z);

/// Sorted union of atom locations of both distributions together with 0 and 1;
/// the gap function is linear between consecutive entries.
std::vector<Scalar> gap_kinks(const DiscreteCdf& prior, const DiscreteCdf& f);

/// f is feasible for prior: gap >= 0 everywhere and = 0 at 1.
bool is_mpc(const DiscreteCdf& prior, const DiscreteCdf& f);

/// Grid states where the gap vanishes. Throws DomainError unless is_mpc.
std::vector<Scalar> binding_set(const DiscreteCdf& prior, const DiscreteCdf& f, const StateSpace& space);

/// Closed interval [lo, hi]; lo == hi for an isolated zero.
struct ZeroInterval {
  Scalar lo;
  Scalar hi;
};

/// Every zero of the gap on [0,1], not only those on the state grid.
std::vector<ZeroInterval> gap_zeros(const DiscreteCdf& prior, const DiscreteCdf& f);

/// Every pair of consecutive support points of f is separated by a zero of the
/// gap. Throws DomainError unless is_mpc.
bool is_monotone_partitional(const DiscreteCdf& prior, const DiscreteCdf& f);

/// Unconditional probability of each act: sum over z of sigma(a|z) f0(z).
std::vector<Scalar> choice_probabilities(const Observation& obs);

/// Bayes-weighted mean state given the act; the prior mean for acts that are
/// never chosen.
Scalar revealed_posterior_mean(const Observation& obs, std::size_t act);
Scalar revealed_posterior_mean(const Observation& obs, const std::string& act_id);

struct RevealedSummary {
  std::vector<Scalar> act_mean;         ///< revealed posterior mean per act
  std::vector<Scalar> act_probability;  ///< unconditional choice probability per act
  DiscreteCdf cdf;                      ///< revealed distribution of posterior means
  /// decision[k][a]: probability of act a at the k-th atom of cdf.
  std::vector<std::vector<Scalar>> decision;

  /// Decision weights at a posterior mean; off the support these are the
  /// unconditional choice probabilities.
  [[nodiscard]] std::vector<Scalar> decision_at(const Scalar& z) const;
  [[nodiscard]] bool chosen(std::size_t act) const { return act_probability[act].sign() > 0; }
};

RevealedSummary revealed_summary(const Observation& obs);

}  // namespace pmsep
