#pragma once

#include <cstddef>
#include <vector>

#include "pmsep/axioms.hpp"
#include "pmsep/model.hpp"
#include "pmsep/piecewise.hpp"

namespace pmsep {

/// Lambda_A(z) = lambda(0,A) + sum over interior and unit z* of
/// lambda(z*,A) (z* - z)^+, for the observation `obs`.
PiecewiseFunction lambda_to_envelope(const std::vector<LambdaEntry>& lambda, std::size_t obs);

/// The price function of an observation; identical to its envelope.
PiecewiseFunction price_function(const std::vector<LambdaEntry>& lambda, std::size_t obs);

/// c(z) = min over observations A and acts a of Lambda_A(z) - u(a, z).
PiecewiseFunction recover_cost(const Dataset& dataset, const std::vector<LambdaEntry>& lambda);

struct Rationalization {
  std::vector<LambdaEntry> lambda;
  PiecewiseFunction cost;
  std::vector<PiecewiseFunction> prices;  ///< per observation
};

/// Cost and prices from a passing verdict. Throws DomainError otherwise.
Rationalization rationalize(const Dataset& dataset, const NipmcVerdict& verdict);

struct ObservationAudit {
  bool price_convex = false;
  bool price_majorizes = false;
  bool contact_at_revealed = false;
  bool affine_off_binding = false;
  bool integral_match = false;

  Scalar convexity_slack;     ///< smallest slope increase at a kink of P (>= 0 when convex)
  Scalar majorization_slack;  ///< min of P - phi - c over [0,1]
  Scalar contact_gap;         ///< max |P - u - c| over chosen acts' revealed means
  Scalar affinity_gap;        ///< max |slope change of P| where the MPC gap is positive
  Scalar integral_gap;        ///< integral of P against revealed minus prior

  [[nodiscard]] bool ok() const {
    return price_convex && price_majorizes && contact_at_revealed && affine_off_binding && integral_match;
  }
};

struct RationalizationReport {
  std::vector<ObservationAudit> observations;
  [[nodiscard]] bool ok() const;
};

/// Independent audit of a proposed cost derivative and per-observation price
/// functions against raw data. Recomputes revealed means and the MPC gap
/// itself. Throws StructuralError when the number of prices does not match.
RationalizationReport verify_rationalization(const Dataset& dataset, const PiecewiseFunction& cost,
                                             const std::vector<PiecewiseFunction>& prices);

/// c(z) = -kappa (z - z0)^2. Throws DomainError unless kappa > 0 and z0 is in (0,1).
PiecewiseFunction variance_cost(const Scalar& kappa, const Scalar& z0);

/// C(F) = c(z0) - integral of c against F, with z0 the mean of F.
Scalar information_cost(const PiecewiseFunction& cost, const DiscreteCdf& f);

}  // namespace pmsep
