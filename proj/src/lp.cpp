#include "pmsep/lp.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "pmsep/errors.hpp"

namespace pmsep {

std::size_t LinearProgram::add_variable(VarSign sign, std::string name) {
  signs_.push_back(sign);
  if (name.empty()) name = "x" + std::to_string(signs_.size() - 1);
  names_.push_back(std::move(name));
  return signs_.size() - 1;
}

namespace {

std::vector<LpTerm> canonical_terms(std::vector<LpTerm> terms, std::size_t nvars) {
  std::map<std::size_t, Scalar> acc;
  for (auto& t : terms) {
    if (t.var >= nvars)
      throw StructuralError("coefficient index " + std::to_string(t.var) + " exceeds variable count " +
                            std::to_string(nvars));
    auto [it, inserted] = acc.try_emplace(t.var, t.coef);
    if (!inserted) it->second += t.coef;
  }
  std::vector<LpTerm> out;
  out.reserve(acc.size());
  for (auto& [var, coef] : acc)
    if (!coef.is_zero()) out.push_back({var, coef});
  return out;
}

}  // namespace

std::size_t LinearProgram::add_row(std::vector<LpTerm> terms, Relation relation, Scalar rhs, std::string name) {
  LpRow row{canonical_terms(std::move(terms), signs_.size()), relation, std::move(rhs), std::move(name)};
  if (row.name.empty()) row.name = "r" + std::to_string(rows_.size());
  rows_.push_back(std::move(row));
  return rows_.size() - 1;
}

void LinearProgram::set_objective(Sense sense, std::vector<LpTerm> terms) {
  sense_ = sense;
  objective_ = canonical_terms(std::move(terms), signs_.size());
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::feasible: return "feasible";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::error: return "error";
  }
  return "error";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

enum class ColumnKind { structural, slack, artificial };

/// Dense tableau in equality form: T x = rhs with an explicit basis, plus a
/// reduced-cost row. The last column of every row holds the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows * (cols + 1)), cost_row_(cols + 1) {}

  Scalar& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return t_[i * (n_ + 1) + j]; }
  Scalar& rhs(std::size_t i) { return at(i, n_); }
  const Scalar& rhs(std::size_t i) const { return at(i, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  std::vector<std::size_t> basis;
  std::vector<bool> blocked;  // columns never allowed to enter

  /// Reduced costs for the given cost vector; last entry is -objective.
  void price(const std::vector<Scalar>& cost) {
    for (std::size_t j = 0; j < n_; ++j) cost_row_[j] = cost[j];
    cost_row_[n_] = Scalar(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const Scalar& cb = cost[basis[i]];
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j <= n_; ++j) {
        const Scalar& v = at(i, j);
        if (!v.is_zero()) cost_row_[j].sub_mul(cb, v);
      }
    }
  }

  const Scalar& reduced_cost(std::size_t j) const { return cost_row_[j]; }
  Scalar objective() const { return -cost_row_[n_]; }

  void pivot(std::size_t r, std::size_t c) {
    const Scalar piv = at(r, c);
    nz_.clear();
    for (std::size_t j = 0; j <= n_; ++j) {
      Scalar& v = at(r, j);
      if (v.is_zero()) continue;
      v /= piv;
      nz_.push_back(j);
    }
    auto eliminate = [this, c](Scalar* row, const Scalar* prow) {
      if (row[c].is_zero()) return;
      const Scalar factor = row[c];
      for (std::size_t j : nz_) {
        row[j].sub_mul(factor, prow[j]);
        if (row[j].is_float() && row[j].is_zero()) row[j] = Scalar::from_double(0.0);
      }
      row[c] = Scalar(0);
    };
    const Scalar* prow = &at(r, 0);
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) eliminate(&at(i, 0), prow);
    eliminate(cost_row_.data(), prow);
    basis[r] = c;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<Scalar> t_;
  std::vector<Scalar> cost_row_;
  std::vector<std::size_t> nz_;
};

enum class SimplexResult { optimal, unbounded };

/// a/b < c/d for b, d > 0.
bool ratio_less(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d) { return a * d < c * b; }

std::size_t ratio_test(const Tableau& t, std::size_t col) {
  std::size_t best = kNone;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const Scalar& v = t.at(i, col);
    if (v.sign() <= 0) continue;
    if (best == kNone) {
      best = i;
      continue;
    }
    const Scalar& bv = t.at(best, col);
    if (ratio_less(t.rhs(i), v, t.rhs(best), bv)) {
      best = i;
    } else if (!ratio_less(t.rhs(best), bv, t.rhs(i), v) && t.basis[i] < t.basis[best]) {
      best = i;
    }
  }
  return best;
}

/// Minimizes the priced objective. Entering columns follow the most negative
/// reduced cost; any pivot that would be degenerate is replaced by Bland's
/// smallest-index choice, so no cycle of degenerate pivots can occur.
SimplexResult run_simplex(Tableau& t, std::size_t& pivots, std::size_t cap) {
  for (;;) {
    std::size_t enter = kNone;
    std::size_t bland = kNone;
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (t.blocked[j] || t.reduced_cost(j).sign() >= 0) continue;
      if (bland == kNone) bland = j;
      if (enter == kNone || t.reduced_cost(j) < t.reduced_cost(enter)) enter = j;
    }
    if (enter == kNone) return SimplexResult::optimal;
    std::size_t leave = ratio_test(t, enter);
    if (leave == kNone) return SimplexResult::unbounded;
    if (t.rhs(leave).is_zero() && enter != bland) {
      enter = bland;
      leave = ratio_test(t, enter);
      if (leave == kNone) return SimplexResult::unbounded;
    }
    if (++pivots > cap) throw ResourceError("simplex pivot cap of " + std::to_string(cap) + " exceeded");
    t.pivot(leave, enter);
  }
}

}  // namespace

LpOutcome solve(const LinearProgram& lp, const SolveOptions& options) {
  const std::size_t nvars = lp.num_variables();
  const auto& rows = lp.rows();
  const std::size_t m = rows.size();
  for (const auto& row : rows)
    for (const auto& term : row.terms)
      if (term.var >= nvars) throw StructuralError("row '" + row.name + "' references a missing variable");

  // Column layout: structural (free variables split), then slacks, then artificials.
  std::vector<std::size_t> pos_col(nvars);
  std::vector<std::size_t> neg_col(nvars, kNone);
  std::size_t ncols = 0;
  for (std::size_t v = 0; v < nvars; ++v) {
    pos_col[v] = ncols++;
    if (lp.sign(v) == VarSign::free) neg_col[v] = ncols++;
  }
  const std::size_t n_struct = ncols;

  std::vector<int> flip(m, 1);
  std::vector<Relation> rel(m);
  std::vector<std::size_t> slack_col(m, kNone);
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = rows[i].relation;
    if (rows[i].rhs.sign() < 0) {
      flip[i] = -1;
      if (rel[i] == Relation::less_equal)
        rel[i] = Relation::greater_equal;
      else if (rel[i] == Relation::greater_equal)
        rel[i] = Relation::less_equal;
    }
    if (rel[i] != Relation::equal) slack_col[i] = ncols++;
  }
  std::vector<std::size_t> init_col(m);
  std::vector<ColumnKind> kind(ncols, ColumnKind::structural);
  for (std::size_t i = 0; i < m; ++i)
    if (slack_col[i] != kNone) kind[slack_col[i]] = ColumnKind::slack;
  for (std::size_t i = 0; i < m; ++i) {
    if (rel[i] == Relation::less_equal) {
      init_col[i] = slack_col[i];
    } else {
      init_col[i] = ncols++;
      kind.push_back(ColumnKind::artificial);
    }
  }

  Tableau t(m, ncols);
  t.basis = init_col;
  t.blocked.assign(ncols, false);
  for (std::size_t i = 0; i < m; ++i) {
    const Scalar sgn(flip[i]);
    for (const auto& term : rows[i].terms) {
      Scalar c = term.coef * sgn;
      if (neg_col[term.var] != kNone) t.at(i, neg_col[term.var]) = -c;
      t.at(i, pos_col[term.var]) = std::move(c);
    }
    if (slack_col[i] != kNone) t.at(i, slack_col[i]) = Scalar(rel[i] == Relation::less_equal ? 1 : -1);
    if (init_col[i] != slack_col[i]) t.at(i, init_col[i]) = Scalar(1);
    t.rhs(i) = rows[i].rhs * sgn;
  }

  LpOutcome out;
  std::vector<Scalar> cost(ncols, Scalar(0));
  bool has_artificial = false;
  for (std::size_t j = 0; j < ncols; ++j)
    if (kind[j] == ColumnKind::artificial) {
      cost[j] = Scalar(1);
      has_artificial = true;
    }

  if (has_artificial) {
    t.price(cost);
    run_simplex(t, out.pivots, options.pivot_cap);
    const Scalar infeasibility = t.objective();
    if (infeasibility.sign() > 0) {
      // Phase-one duals pi_i = c_init - rc_init; the ray is -pi in the
      // normalized orientation, mapped back through the row flips.
      out.status = LpStatus::infeasible;
      out.certificate.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        Scalar pi = cost[init_col[i]] - t.reduced_cost(init_col[i]);
        out.certificate[i] = -pi * Scalar(flip[i]) / infeasibility;
      }
      return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (kind[t.basis[i]] != ColumnKind::artificial) continue;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (kind[j] != ColumnKind::artificial && !t.at(i, j).is_zero()) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = 0; j < ncols; ++j)
      if (kind[j] == ColumnKind::artificial) t.blocked[j] = true;
  }

  auto extract_primal = [&]() {
    std::vector<Scalar> col_value(ncols, Scalar(0));
    for (std::size_t i = 0; i < m; ++i) col_value[t.basis[i]] = t.rhs(i);
    out.primal.assign(nvars, Scalar(0));
    for (std::size_t v = 0; v < nvars; ++v) {
      out.primal[v] = col_value[pos_col[v]];
      if (neg_col[v] != kNone) out.primal[v] -= col_value[neg_col[v]];
    }
  };

  if (lp.sense() == Sense::feasibility) {
    out.status = LpStatus::feasible;
    extract_primal();
    return out;
  }

  std::fill(cost.begin(), cost.end(), Scalar(0));
  const bool maximize = lp.sense() == Sense::maximize;
  for (const auto& term : lp.objective()) {
    Scalar c = maximize ? -term.coef : term.coef;
    if (neg_col[term.var] != kNone) cost[neg_col[term.var]] = -c;
    cost[pos_col[term.var]] = std::move(c);
  }
  (void)n_struct;
  t.price(cost);
  if (run_simplex(t, out.pivots, options.pivot_cap) == SimplexResult::unbounded) {
    out.status = LpStatus::unbounded;
    extract_primal();
    return out;
  }
  out.status = LpStatus::optimal;
  extract_primal();
  out.objective = maximize ? -t.objective() : t.objective();
  out.dual.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    Scalar pi = cost[init_col[i]] - t.reduced_cost(init_col[i]);
    pi *= Scalar(flip[i]);
    out.dual[i] = maximize ? -pi : pi;
  }
  return out;
}

std::vector<LpOutcome> solve_batch(std::span<const LinearProgram> lps, const SolveOptions& options) {
  std::vector<LpOutcome> out(lps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < lps.size(); i = next++) {
      try {
        out[i] = solve(lps[i], options);
      } catch (const std::exception& e) {
        out[i] = LpOutcome{};
        out[i].status = LpStatus::error;
        out[i].error = e.what();
      }
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), lps.size());
  if (nthreads <= 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
  pool.clear();
  return out;
}

namespace {

Scalar row_value(const LpRow& row, std::span<const Scalar> x) {
  Scalar lhs(0);
  for (const auto& t : row.terms) lhs += t.coef * x[t.var];
  return lhs;
}

}  // namespace

bool is_feasible_point(const LinearProgram& lp, std::span<const Scalar> x) {
  if (x.size() != lp.num_variables()) return false;
  for (std::size_t v = 0; v < x.size(); ++v)
    if (lp.sign(v) == VarSign::nonnegative && x[v].sign() < 0) return false;
  for (const auto& row : lp.rows()) {
    const Scalar lhs = row_value(row, x);
    switch (row.relation) {
      case Relation::less_equal:
        if (row.rhs < lhs) return false;
        break;
      case Relation::greater_equal:
        if (lhs < row.rhs) return false;
        break;
      case Relation::equal:
        if (lhs != row.rhs) return false;
        break;
    }
  }
  return true;
}

std::vector<Scalar> transpose_times(const LinearProgram& lp, std::span<const Scalar> y) {
  std::vector<Scalar> aty(lp.num_variables(), Scalar(0));
  const auto& rows = lp.rows();
  for (std::size_t i = 0; i < rows.size() && i < y.size(); ++i) {
    if (y[i].is_zero()) continue;
    for (const auto& t : rows[i].terms) aty[t.var] += t.coef * y[i];
  }
  return aty;
}

bool is_infeasibility_certificate(const LinearProgram& lp, std::span<const Scalar> y) {
  const auto& rows = lp.rows();
  if (y.size() != rows.size()) return false;
  Scalar by(0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].relation == Relation::less_equal && y[i].sign() < 0) return false;
    if (rows[i].relation == Relation::greater_equal && y[i].sign() > 0) return false;
    by += rows[i].rhs * y[i];
  }
  if (by.sign() >= 0) return false;
  const auto aty = transpose_times(lp, y);
  for (std::size_t v = 0; v < aty.size(); ++v) {
    if (lp.sign(v) == VarSign::free && !aty[v].is_zero()) return false;
    if (lp.sign(v) == VarSign::nonnegative && aty[v].sign() < 0) return false;
  }
  return true;
}

namespace {

void write_terms(std::ostream& os, const LinearProgram& lp, const std::vector<LpTerm>& terms) {
  if (terms.empty()) {
    os << "0 " << lp.variable_name(0);
    return;
  }
  bool first = true;
  for (const auto& t : terms) {
    const double c = t.coef.to_double();
    if (!first || c < 0) os << (c < 0 ? " - " : " + ");
    os << std::setprecision(17) << (c < 0 ? -c : c) << ' ' << lp.variable_name(t.var);
    first = false;
  }
}

}  // namespace

void write_lp_format(const LinearProgram& lp, std::ostream& os) {
  os << "\\ exact rationals rounded to double precision\n";
  os << (lp.sense() == Sense::maximize ? "Maximize\n" : "Minimize\n") << " obj: ";
  if (lp.num_variables() == 0) {
    os << "\nSubject To\nEnd\n";
    return;
  }
  write_terms(os, lp, lp.objective());
  os << "\nSubject To\n";
  for (const auto& row : lp.rows()) {
    os << ' ' << row.name << ": ";
    write_terms(os, lp, row.terms);
    os << (row.relation == Relation::less_equal ? " <= " : row.relation == Relation::equal ? " = " : " >= ")
       << std::setprecision(17) << row.rhs.to_double() << '\n';
  }
  os << "Bounds\n";
  for (std::size_t v = 0; v < lp.num_variables(); ++v)
    if (lp.sign(v) == VarSign::free) os << ' ' << lp.variable_name(v) << " free\n";
  os << "End\n";
}

}  // namespace pmsep
