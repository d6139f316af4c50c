#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "pmsep/model.hpp"
#include "pmsep/piecewise.hpp"
#include "pmsep/revealed.hpp"

namespace pmsep::testing {

/// Optimality certificate for choosing F under prior F0 with a continuous
/// piecewise-linear gross objective V: a convex P with P >= V, P = V on the
/// support of F, and equal integrals of P under F and F0. Written against
/// raw atoms so that it shares nothing with the solver.
struct PriceCheck {
  bool mpc = false;
  bool convex = false;
  bool majorizes = false;
  bool contact = false;
  bool integral = false;
  std::string detail;
  [[nodiscard]] bool ok() const { return mpc && convex && majorizes && contact && integral; }
};

inline Scalar integrated_cdf(const std::vector<Atom>& atoms, const Scalar& z) {
  Scalar s(0);
  for (const auto& a : atoms)
    if (a.z < z) s += a.mass * (z - a.z);
  return s;
}

inline PriceCheck check_price(const std::vector<Atom>& prior, const std::vector<Atom>& f,
                              const std::function<Scalar(const Scalar&)>& gross, std::vector<Scalar> gross_kinks,
                              const PiecewiseFunction& price) {
  PriceCheck r;
  std::vector<Scalar> pts{Scalar(0), Scalar(1)};
  for (const auto& a : prior) pts.push_back(a.z);
  for (const auto& a : f) pts.push_back(a.z);
  r.mpc = true;
  Scalar m0(0);
  Scalar m1(0);
  for (const auto& a : prior) m0 += a.mass * a.z;
  for (const auto& a : f) m1 += a.mass * a.z;
  if (m0 != m1) r.mpc = false;
  for (const auto& z : pts)
    if ((integrated_cdf(prior, z) - integrated_cdf(f, z)).sign() < 0) r.mpc = false;

  const auto& segs = price.segments();
  r.convex = true;
  for (std::size_t k = 1; k < segs.size(); ++k)
    if (segs[k].c1 < segs[k - 1].c1 || !segs[k].linear()) r.convex = false;

  for (const auto& z : price.breakpoints()) gross_kinks.push_back(z);
  gross_kinks.push_back(Scalar(0));
  gross_kinks.push_back(Scalar(1));
  r.majorizes = std::all_of(gross_kinks.begin(), gross_kinks.end(),
                            [&](const Scalar& z) { return !(price(z) < gross(z)); });
  r.contact = std::all_of(f.begin(), f.end(), [&](const Atom& a) { return price(a.z) == gross(a.z); });
  Scalar lhs(0);
  Scalar rhs(0);
  for (const auto& a : f) lhs += price(a.z) * a.mass;
  for (const auto& a : prior) rhs += price(a.z) * a.mass;
  r.integral = lhs == rhs;
  return r;
}

/// Menu kinks computed from scratch.
inline std::vector<Scalar> menu_kinks(const Menu& menu) {
  std::vector<Scalar> out;
  for (const auto& a : menu.acts)
    for (const auto& b : menu.acts) {
      Scalar d = (a.u1 - a.u0) - (b.u1 - b.u0);
      if (d.is_zero()) continue;
      Scalar z = (b.u0 - a.u0) / d;
      if (z.sign() > 0 && z < Scalar(1)) out.push_back(z);
    }
  return out;
}

inline std::vector<Atom> prior_atoms(const Prior& p) {
  std::vector<Atom> out;
  for (std::size_t i = 0; i < p.space.size(); ++i)
    if (p.weights[i].sign() > 0) out.push_back({p.space[i], p.weights[i]});
  return out;
}

/// Farkas certificate check computed directly from a dataset, independent of
/// the library's system builder: for every observation, net weight on the
/// intercept and unit columns vanishes, interior binding columns get
/// nonnegative weight, and the payoff side is negative.
struct CertificateCheck {
  bool nonnegative = false;
  bool free_columns_zero = false;
  bool interior_columns_nonnegative = false;
  bool strictly_improving = false;
  [[nodiscard]] bool ok() const {
    return nonnegative && free_columns_zero && interior_columns_nonnegative && strictly_improving;
  }
};

struct RevealedAct {
  Scalar mean;
  Scalar prob;
};

inline std::vector<RevealedAct> reveal(const Observation& obs) {
  std::vector<RevealedAct> out;
  const auto& st = obs.prior->space.states;
  const auto& w = obs.prior->weights;
  for (const auto& row : obs.sdsc.sigma) {
    Scalar p(0);
    Scalar num(0);
    for (std::size_t z = 0; z < st.size(); ++z) {
      p += row[z] * w[z];
      num += row[z] * w[z] * st[z];
    }
    out.push_back({p.sign() > 0 ? num / p : obs.prior->mean, p});
  }
  return out;
}

/// rows: (A, B, a, b) tuples in the order used by the certificate.
struct CertRow {
  std::size_t A, B, a, b;
};

inline CertificateCheck check_certificate(const Dataset& d, const std::vector<CertRow>& rows,
                                          const std::vector<Scalar>& beta) {
  CertificateCheck r;
  const std::size_t n = d.observations.size();
  std::vector<std::vector<RevealedAct>> rev;
  std::vector<std::vector<Scalar>> zstar(n);
  for (std::size_t o = 0; o < n; ++o) {
    rev.push_back(reveal(d.observations[o]));
    std::vector<Atom> fr;
    for (const auto& ra : rev[o])
      if (ra.prob.sign() > 0) fr.push_back({ra.mean, ra.prob});
    auto pa = prior_atoms(*d.observations[o].prior);
    for (const auto& z : d.observations[o].prior->space.states)
      if ((integrated_cdf(pa, z) - integrated_cdf(fr, z)).is_zero()) zstar[o].push_back(z);
  }
  r.nonnegative = std::all_of(beta.begin(), beta.end(), [](const Scalar& b) { return b.sign() >= 0; });
  Scalar payoff(0);
  r.free_columns_zero = true;
  r.interior_columns_nonnegative = true;
  for (std::size_t o = 0; o < n; ++o) {
    for (const auto& zs : zstar[o]) {
      Scalar t(0);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const auto& ra = rev[row.A][row.a];
        Scalar e = zs.is_zero() ? ra.prob : (ra.mean < zs || ra.mean == zs ? (zs - ra.mean) * ra.prob : Scalar(0));
        if (row.A == o) t += e * beta[i];
        if (row.B == o) t -= e * beta[i];
      }
      const bool is_free = zs.is_zero() || zs == Scalar(1);
      if (is_free && !t.is_zero()) r.free_columns_zero = false;
      if (!is_free && t.sign() < 0) r.interior_columns_nonnegative = false;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto& ra = rev[row.A][row.a];
    const Act& a = d.observations[row.A].menu->acts[row.a];
    const Act& b = d.observations[row.B].menu->acts[row.b];
    payoff += beta[i] * (utility(a, ra.mean) - utility(b, ra.mean)) * ra.prob;
  }
  r.strictly_improving = payoff.sign() < 0;
  return r;
}

}  // namespace pmsep::testing
