#include "pmsep/piecewise.hpp"

#include <algorithm>

#include "pmsep/errors.hpp"

namespace pmsep {

namespace {

void sort_unique(std::vector<Scalar>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool same_polynomial(const Segment& a, const Segment& b) { return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2; }

}  // namespace

PiecewiseFunction::PiecewiseFunction() : segments_{Segment{Scalar(0), Scalar(1), Scalar(0), Scalar(0), Scalar(0)}} {}

PiecewiseFunction PiecewiseFunction::from_points(const std::vector<std::pair<Scalar, Scalar>>& points) {
  if (points.size() < 2) throw DomainError("a piecewise function needs at least the points 0 and 1");
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& [x0, y0] = points[i];
    const auto& [x1, y1] = points[i + 1];
    if (!(x0 < x1)) throw DomainError("breakpoints must increase strictly (at " + x1.str() + ")");
    Scalar slope = (y1 - y0) / (x1 - x0);
    Scalar intercept = y0 - slope * x0;
    segs.push_back({x0, x1, std::move(intercept), std::move(slope), Scalar(0)});
  }
  return from_segments(std::move(segs));
}

PiecewiseFunction PiecewiseFunction::from_segments(std::vector<Segment> segments) {
  if (segments.empty()) throw DomainError("no segments");
  if (!segments.front().lo.is_zero()) throw DomainError("first segment must start at 0");
  if (segments.back().hi != Scalar(1)) throw DomainError("last segment must end at 1");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!(segments[i].lo < segments[i].hi)) throw DomainError("empty segment at " + segments[i].lo.str());
    if (i == 0) continue;
    if (segments[i].lo != segments[i - 1].hi)
      throw DomainError("segments do not tile [0,1] at " + segments[i - 1].hi.str());
    const Scalar& z = segments[i].lo;
    if (segments[i - 1].eval(z) != segments[i].eval(z)) throw DomainError("discontinuity at " + z.str());
  }
  return PiecewiseFunction(std::move(segments));
}

PiecewiseFunction PiecewiseFunction::constant(const Scalar& c) { return quadratic(c, Scalar(0), Scalar(0)); }

PiecewiseFunction PiecewiseFunction::affine(const Scalar& intercept, const Scalar& slope) {
  return quadratic(intercept, slope, Scalar(0));
}

PiecewiseFunction PiecewiseFunction::quadratic(const Scalar& c0, const Scalar& c1, const Scalar& c2) {
  return PiecewiseFunction({Segment{Scalar(0), Scalar(1), c0, c1, c2}});
}

Scalar PiecewiseFunction::operator()(const Scalar& z) const {
  if (z.sign() < 0 || Scalar(1) < z) throw DomainError("argument " + z.str() + " outside [0,1]");
  for (const auto& s : segments_)
    if (!(s.hi < z)) return s.eval(z);
  return segments_.back().eval(z);
}

std::vector<Scalar> PiecewiseFunction::breakpoints() const {
  std::vector<Scalar> out;
  out.reserve(segments_.size() + 1);
  for (const auto& s : segments_) out.push_back(s.lo);
  out.push_back(segments_.back().hi);
  return out;
}

bool PiecewiseFunction::is_piecewise_linear() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) { return s.linear(); });
}

std::vector<Scalar> PiecewiseFunction::slopes() const {
  std::vector<Scalar> out;
  for (const auto& s : segments_) {
    if (!s.linear()) throw DomainError("slopes requested for a quadratic segment");
    out.push_back(s.c1);
  }
  return out;
}

std::vector<std::pair<Scalar, Scalar>> PiecewiseFunction::table() const {
  std::vector<std::pair<Scalar, Scalar>> out;
  for (const auto& z : breakpoints()) out.emplace_back(z, (*this)(z));
  return out;
}

PiecewiseFunction PiecewiseFunction::simplified() const {
  std::vector<Segment> out;
  for (const auto& s : segments_) {
    if (!out.empty() && same_polynomial(out.back(), s))
      out.back().hi = s.hi;
    else
      out.push_back(s);
  }
  return PiecewiseFunction(std::move(out));
}

PiecewiseFunction PiecewiseFunction::refined(const std::vector<Scalar>& points) const {
  std::vector<Scalar> cuts = breakpoints();
  for (const auto& p : points)
    if (p.sign() > 0 && p < Scalar(1)) cuts.push_back(p);
  sort_unique(cuts);
  std::vector<Segment> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    while (segments_[k].hi < cuts[i + 1]) ++k;
    Segment s = segments_[k];
    s.lo = cuts[i];
    s.hi = cuts[i + 1];
    out.push_back(std::move(s));
  }
  return PiecewiseFunction(std::move(out));
}

namespace {

template <typename Op>
PiecewiseFunction combine(const PiecewiseFunction& a, const PiecewiseFunction& b, Op op) {
  auto ra = a.refined(b.breakpoints());
  auto rb = b.refined(a.breakpoints());
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < ra.segments().size(); ++i) {
    const Segment& x = ra.segments()[i];
    const Segment& y = rb.segments()[i];
    segs.push_back({x.lo, x.hi, op(x.c0, y.c0), op(x.c1, y.c1), op(x.c2, y.c2)});
  }
  return PiecewiseFunction::from_segments(std::move(segs)).simplified();
}

}  // namespace

PiecewiseFunction operator+(const PiecewiseFunction& a, const PiecewiseFunction& b) {
  return combine(a, b, [](const Scalar& x, const Scalar& y) { return x + y; });
}

PiecewiseFunction operator-(const PiecewiseFunction& a, const PiecewiseFunction& b) {
  return combine(a, b, [](const Scalar& x, const Scalar& y) { return x - y; });
}

PiecewiseFunction operator*(const Scalar& k, const PiecewiseFunction& f) {
  std::vector<Segment> segs = f.segments_;
  for (auto& s : segs) {
    s.c0 *= k;
    s.c1 *= k;
    s.c2 *= k;
  }
  return PiecewiseFunction(std::move(segs)).simplified();
}

namespace {

PiecewiseFunction envelope(const std::vector<PiecewiseFunction>& fs, bool lower) {
  if (fs.empty()) throw DomainError("envelope of an empty family");
  std::vector<Scalar> cuts;
  for (const auto& f : fs) {
    if (!f.is_piecewise_linear()) throw DomainError("envelope requires piecewise-linear functions");
    auto bp = f.breakpoints();
    cuts.insert(cuts.end(), bp.begin(), bp.end());
  }
  sort_unique(cuts);
  std::vector<PiecewiseFunction> refined;
  refined.reserve(fs.size());
  for (const auto& f : fs) refined.push_back(f.refined(cuts));

  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Scalar& lo = cuts[i];
    const Scalar& hi = cuts[i + 1];
    std::vector<Scalar> sub{lo, hi};
    for (std::size_t p = 0; p < refined.size(); ++p) {
      const Segment& s = refined[p].segments()[i];
      for (std::size_t q = p + 1; q < refined.size(); ++q) {
        const Segment& t = refined[q].segments()[i];
        Scalar dslope = s.c1 - t.c1;
        if (dslope.is_zero()) continue;
        Scalar z = (t.c0 - s.c0) / dslope;
        if (lo < z && z < hi) sub.push_back(std::move(z));
      }
    }
    sort_unique(sub);
    for (std::size_t j = 0; j + 1 < sub.size(); ++j) {
      Scalar mid = (sub[j] + sub[j + 1]) / Scalar(2);
      std::size_t best = 0;
      Scalar best_v = refined[0].segments()[i].eval(mid);
      for (std::size_t p = 1; p < refined.size(); ++p) {
        Scalar v = refined[p].segments()[i].eval(mid);
        if (lower ? v < best_v : best_v < v) {
          best_v = std::move(v);
          best = p;
        }
      }
      const Segment& s = refined[best].segments()[i];
      out.push_back({sub[j], sub[j + 1], s.c0, s.c1, Scalar(0)});
    }
  }
  return PiecewiseFunction::from_segments(std::move(out)).simplified();
}

}  // namespace

PiecewiseFunction pointwise_min(const std::vector<PiecewiseFunction>& fs) { return envelope(fs, true); }
PiecewiseFunction pointwise_max(const std::vector<PiecewiseFunction>& fs) { return envelope(fs, false); }

PiecewiseFunction indirect_utility_function(const Menu& menu) {
  if (menu.acts.empty()) throw StructuralError("menu '" + menu.id + "' is empty");
  std::vector<PiecewiseFunction> lines;
  for (const auto& a : menu.acts) lines.push_back(PiecewiseFunction::affine(a.u0, a.u1 - a.u0));
  return pointwise_max(lines);
}

Scalar expectation(const PiecewiseFunction& f, const DiscreteCdf& cdf) {
  Scalar s(0);
  for (const auto& a : cdf.atoms()) s += f(a.z) * a.mass;
  return s;
}

namespace {

/// sign > 0 checks convexity, sign < 0 concavity.
bool curvature_is(const PiecewiseFunction& f, int sign) {
  const auto& segs = f.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].c2.sign() * sign < 0) return false;
    if (i == 0) continue;
    const Scalar left = segs[i - 1].slope_at(segs[i].lo);
    const Scalar right = segs[i].slope_at(segs[i].lo);
    if ((right - left).sign() * sign < 0) return false;
  }
  return true;
}

}  // namespace

bool is_concave(const PiecewiseFunction& f) { return curvature_is(f, -1); }
bool is_convex(const PiecewiseFunction& f) { return curvature_is(f, 1); }

}  // namespace pmsep
