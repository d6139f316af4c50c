#include "pmsep/recovery.hpp"

#include <algorithm>

#include "pmsep/errors.hpp"

namespace pmsep {

PiecewiseFunction lambda_to_envelope(const std::vector<LambdaEntry>& lambda, std::size_t obs) {
  std::vector<Scalar> xs{Scalar(0), Scalar(1)};
  for (const auto& e : lambda)
    if (e.obs == obs) xs.push_back(e.z_star);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<Scalar, Scalar>> pts;
  for (const auto& z : xs) {
    Scalar v(0);
    for (const auto& e : lambda) {
      if (e.obs != obs) continue;
      if (e.z_star.is_zero())
        v += e.value;
      else if (!(e.z_star < z))
        v += e.value * (e.z_star - z);
    }
    pts.emplace_back(z, std::move(v));
  }
  return PiecewiseFunction::from_points(pts).simplified();
}

PiecewiseFunction price_function(const std::vector<LambdaEntry>& lambda, std::size_t obs) {
  return lambda_to_envelope(lambda, obs);
}

PiecewiseFunction recover_cost(const Dataset& dataset, const std::vector<LambdaEntry>& lambda) {
  std::vector<PiecewiseFunction> pieces;
  for (std::size_t o = 0; o < dataset.observations.size(); ++o) {
    const auto env = lambda_to_envelope(lambda, o);
    for (const auto& a : dataset.observations[o].menu->acts)
      pieces.push_back(env - PiecewiseFunction::affine(a.u0, a.u1 - a.u0));
  }
  return pointwise_min(pieces);
}

Rationalization rationalize(const Dataset& dataset, const NipmcVerdict& verdict) {
  if (!verdict.pass) throw DomainError("cannot rationalize a dataset that violates NIPMC");
  Rationalization r{verdict.lambda, recover_cost(dataset, verdict.lambda), {}};
  for (std::size_t o = 0; o < dataset.observations.size(); ++o) r.prices.push_back(price_function(verdict.lambda, o));
  return r;
}

bool RationalizationReport::ok() const {
  return std::all_of(observations.begin(), observations.end(), [](const ObservationAudit& a) { return a.ok(); });
}

namespace {

struct Mass {
  Scalar z;
  Scalar p;
};

// Integral of the CDF difference; kept local so the audit does not lean on
// the code it is checking.
Scalar gap(const std::vector<Mass>& prior, const std::vector<Mass>& revealed, const Scalar& z) {
  Scalar s(0);
  for (const auto& m : prior)
    if (m.z < z) s += m.p * (z - m.z);
  for (const auto& m : revealed)
    if (m.z < z) s -= m.p * (z - m.z);
  return s;
}

Scalar max_utility(const Menu& menu, const Scalar& z) {
  Scalar best = utility(menu.acts.at(0), z);
  for (const auto& a : menu.acts) best = max(best, utility(a, z));
  return best;
}

ObservationAudit audit(const Observation& obs, const PiecewiseFunction& cost, const PiecewiseFunction& price) {
  ObservationAudit out;
  const auto& states = obs.prior->space.states;
  const auto& f0 = obs.prior->weights;
  const auto& menu = *obs.menu;
  const auto& sigma = obs.sdsc.sigma;

  std::vector<Mass> prior;
  for (std::size_t z = 0; z < states.size(); ++z)
    if (f0[z].sign() > 0) prior.push_back({states[z], f0[z]});

  struct Chosen {
    std::size_t act;
    Scalar mean;
    Scalar prob;
  };
  std::vector<Chosen> chosen;
  std::vector<Mass> revealed;
  for (std::size_t a = 0; a < sigma.size(); ++a) {
    Scalar p(0);
    Scalar num(0);
    for (std::size_t z = 0; z < states.size(); ++z) {
      p += sigma[a][z] * f0[z];
      num += sigma[a][z] * f0[z] * states[z];
    }
    if (p.sign() <= 0) continue;
    chosen.push_back({a, num / p, p});
    revealed.push_back({num / p, p});
  }

  // (1) majorization: between consecutive candidate points P - phi - c is
  // polynomial of degree <= 2, so endpoints plus any interior vertex suffice.
  std::vector<Scalar> pts = price.breakpoints();
  for (const auto& z : cost.breakpoints()) pts.push_back(z);
  for (std::size_t i = 0; i < menu.acts.size(); ++i) {
    for (std::size_t j = i + 1; j < menu.acts.size(); ++j) {
      const Act& a = menu.acts[i];
      const Act& b = menu.acts[j];
      Scalar d = (a.u1 - a.u0) - (b.u1 - b.u0);
      if (d.is_zero()) continue;
      Scalar z = (b.u0 - a.u0) / d;
      if (z.sign() > 0 && z < Scalar(1)) pts.push_back(z);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Scalar> probes = pts;
  for (const auto& seg : cost.segments()) {
    if (seg.linear()) continue;
    // The curvature of P - phi - c on a cell is -c2; a positive value may put
    // the minimum strictly inside the cell. Probe the vertex in every cell.
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const Scalar& lo = pts[k];
      const Scalar& hi = pts[k + 1];
      if (!(seg.lo < hi) || !(lo < seg.hi)) continue;
      const Scalar mid = (lo + hi) / Scalar(2);
      // Slope of P - phi on the cell, read from two evaluations.
      const Scalar q = (lo + mid) / Scalar(2);
      const Scalar lin = ((price(mid) - max_utility(menu, mid)) - (price(q) - max_utility(menu, q))) / (mid - q);
      const Scalar vertex = (lin - seg.c1) / (Scalar(2) * seg.c2);
      if (lo < vertex && vertex < hi) probes.push_back(vertex);
    }
  }
  bool first = true;
  for (const auto& z : probes) {
    Scalar s = price(z) - max_utility(menu, z) - cost(z);
    if (first || s < out.majorization_slack) out.majorization_slack = std::move(s);
    first = false;
  }
  out.price_majorizes = out.majorization_slack.sign() >= 0;

  // (2) convexity of P.
  const auto& psegs = price.segments();
  out.convexity_slack = Scalar(0);
  bool convex = true;
  for (const auto& s : psegs)
    if (s.c2.sign() < 0) convex = false;
  for (std::size_t k = 1; k < psegs.size(); ++k) {
    Scalar jump = psegs[k].slope_at(psegs[k].lo) - psegs[k - 1].slope_at(psegs[k].lo);
    if (k == 1 || jump < out.convexity_slack) out.convexity_slack = jump;
  }
  out.price_convex = convex && out.convexity_slack.sign() >= 0;

  // (3) contact at revealed means of chosen acts.
  out.contact_gap = Scalar(0);
  for (const auto& c : chosen) {
    Scalar g = abs(price(c.mean) - utility(menu.acts[c.act], c.mean) - cost(c.mean));
    out.contact_gap = max(out.contact_gap, g);
  }
  out.contact_at_revealed = out.contact_gap.is_zero();

  // (4) P may only bend where the MPC gap vanishes.
  out.affinity_gap = Scalar(0);
  bool linear = true;
  for (const auto& s : psegs) {
    if (!s.linear()) linear = false;
  }
  for (std::size_t k = 1; k < psegs.size(); ++k) {
    const Scalar& z = psegs[k].lo;
    Scalar jump = abs(psegs[k].slope_at(z) - psegs[k - 1].slope_at(z));
    if (jump.is_zero()) continue;
    if (gap(prior, revealed, z).sign() != 0) out.affinity_gap = max(out.affinity_gap, jump);
  }
  out.affine_off_binding = linear && out.affinity_gap.is_zero();

  // (5) integral condition.
  Scalar lhs(0);
  Scalar rhs(0);
  for (const auto& m : revealed) lhs += price(m.z) * m.p;
  for (const auto& m : prior) rhs += price(m.z) * m.p;
  out.integral_gap = lhs - rhs;
  out.integral_match = out.integral_gap.is_zero();
  return out;
}

}  // namespace

RationalizationReport verify_rationalization(const Dataset& dataset, const PiecewiseFunction& cost,
                                             const std::vector<PiecewiseFunction>& prices) {
  if (prices.size() != dataset.observations.size())
    throw StructuralError("expected one price function per observation");
  RationalizationReport report;
  for (std::size_t o = 0; o < dataset.observations.size(); ++o)
    report.observations.push_back(audit(dataset.observations[o], cost, prices[o]));
  return report;
}

PiecewiseFunction variance_cost(const Scalar& kappa, const Scalar& z0) {
  if (kappa.sign() <= 0) throw DomainError("kappa must be positive");
  if (z0.sign() <= 0 || !(z0 < Scalar(1))) throw DomainError("prior mean must lie in (0,1)");
  return PiecewiseFunction::quadratic(-kappa * z0 * z0, Scalar(2) * kappa * z0, -kappa);
}

Scalar information_cost(const PiecewiseFunction& cost, const DiscreteCdf& f) {
  return cost(f.mean()) - expectation(cost, f);
}

}  // namespace pmsep
