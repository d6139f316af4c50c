#pragma once

#include <utility>
#include <vector>

#include "pmsep/model.hpp"
#include "pmsep/revealed.hpp"
#include "pmsep/scalar.hpp"

namespace pmsep {

/// c0 + c1 z + c2 z^2 on [lo, hi].
struct Segment {
  Scalar lo;
  Scalar hi;
  Scalar c0;
  Scalar c1;
  Scalar c2;

  [[nodiscard]] Scalar eval(const Scalar& z) const { return c0 + z * (c1 + z * c2); }
  [[nodiscard]] bool linear() const { return c2.is_zero(); }
  [[nodiscard]] Scalar slope_at(const Scalar& z) const { return c1 + Scalar(2) * c2 * z; }
};

/// Continuous function on [0,1] given by consecutive polynomial segments of
/// degree at most two.
class PiecewiseFunction {
 public:
  PiecewiseFunction();  ///< identically zero

  /// Linear interpolation through (z, value) pairs; z must start at 0, end at
  /// 1 and increase strictly.
  static PiecewiseFunction from_points(const std::vector<std::pair<Scalar, Scalar>>& points);

  /// Segments must tile [0,1] in order and agree at shared endpoints.
  /// Throws DomainError otherwise.
  static PiecewiseFunction from_segments(std::vector<Segment> segments);

  static PiecewiseFunction constant(const Scalar& c);
  static PiecewiseFunction affine(const Scalar& intercept, const Scalar& slope);
  static PiecewiseFunction quadratic(const Scalar& c0, const Scalar& c1, const Scalar& c2);

  /// Throws DomainError outside [0,1].
  [[nodiscard]] Scalar operator()(const Scalar& z) const;

  [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }

  /// Segment endpoints, 0 and 1 included.
  [[nodiscard]] std::vector<Scalar> breakpoints() const;

  [[nodiscard]] bool is_piecewise_linear() const;

  /// One slope per segment. Throws DomainError for quadratic segments.
  [[nodiscard]] std::vector<Scalar> slopes() const;

  /// (z, value) at every breakpoint.
  [[nodiscard]] std::vector<std::pair<Scalar, Scalar>> table() const;

  /// Merges neighbouring segments carrying the same polynomial.
  [[nodiscard]] PiecewiseFunction simplified() const;

  /// Same function with extra breakpoints inserted at the given points.
  [[nodiscard]] PiecewiseFunction refined(const std::vector<Scalar>& points) const;

  friend PiecewiseFunction operator+(const PiecewiseFunction& a, const PiecewiseFunction& b);
  friend PiecewiseFunction operator-(const PiecewiseFunction& a, const PiecewiseFunction& b);
  friend PiecewiseFunction operator*(const Scalar& k, const PiecewiseFunction& f);

 private:
  explicit PiecewiseFunction(std::vector<Segment> segments) : segments_(std::move(segments)) {}
  std::vector<Segment> segments_;
};

/// Pointwise minimum of piecewise-linear functions, with exact crossing
/// points. Throws DomainError for quadratic input.
PiecewiseFunction pointwise_min(const std::vector<PiecewiseFunction>& fs);
PiecewiseFunction pointwise_max(const std::vector<PiecewiseFunction>& fs);

/// The upper envelope of the menu's affine utilities.
PiecewiseFunction indirect_utility_function(const Menu& menu);

/// Sum of f(z) times mass over the atoms.
Scalar expectation(const PiecewiseFunction& f, const DiscreteCdf& cdf);

/// Slopes never increase from left to right; quadratic pieces need a
/// nonpositive second derivative.
bool is_concave(const PiecewiseFunction& f);

/// Slopes never decrease; quadratic pieces need a nonnegative second
/// derivative.
bool is_convex(const PiecewiseFunction& f);

}  // namespace pmsep
