#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pmsep/errors.hpp"
#include "pmsep/lp.hpp"

using namespace pmsep;

TEST(Lp, MaximizeBoundedVariable) {
  LinearProgram lp;
  auto x = lp.add_variable(VarSign::nonnegative);
  lp.add_row({{x, Scalar(1)}}, Relation::less_equal, Scalar(3));
  lp.set_objective(Sense::maximize, {{x, Scalar(1)}});
  auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::optimal);
  EXPECT_EQ(out.primal[x], Scalar(3));
  EXPECT_EQ(out.objective, Scalar(3));
  ASSERT_EQ(out.dual.size(), 1u);
  EXPECT_EQ(out.dual[0], Scalar(1));
}

TEST(Lp, OneVariableAlternative) {
  LinearProgram lp;
  auto x = lp.add_variable(VarSign::nonnegative);
  lp.add_row({{x, Scalar(1)}}, Relation::less_equal, Scalar(-1));
  lp.add_row({{x, Scalar(1)}}, Relation::greater_equal, Scalar(0));
  auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::infeasible);
  EXPECT_TRUE(out.primal.empty());
  EXPECT_TRUE(is_infeasibility_certificate(lp, out.certificate));
  Scalar by = Scalar(-1) * out.certificate[0] + Scalar(0) * out.certificate[1];
  EXPECT_EQ(by, Scalar(-1));
}

TEST(Lp, FreeVariablesAndEquality) {
  // x + y = 2y - 2 on the feasible line, so the minimum sits at y = 0.
  LinearProgram lp;
  auto x = lp.add_variable(VarSign::free);
  auto y = lp.add_variable(VarSign::nonnegative);
  lp.add_row({{x, Scalar(1)}, {y, Scalar(-1)}}, Relation::equal, Scalar(-2));
  lp.add_row({{y, Scalar(1)}}, Relation::less_equal, Scalar(1));
  lp.set_objective(Sense::minimize, {{x, Scalar(1)}, {y, Scalar(1)}});
  auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::optimal);
  EXPECT_EQ(out.primal[x], Scalar(-2));
  EXPECT_EQ(out.primal[y], Scalar(0));
  EXPECT_EQ(out.objective, Scalar(-2));
}

TEST(Lp, Unbounded) {
  LinearProgram lp;
  auto x = lp.add_variable(VarSign::nonnegative);
  lp.add_row({{x, Scalar(1)}}, Relation::greater_equal, Scalar(1));
  lp.set_objective(Sense::maximize, {{x, Scalar(1)}});
  EXPECT_EQ(solve(lp).status, LpStatus::unbounded);
}

TEST(Lp, BadIndexIsStructural) {
  LinearProgram lp;
  lp.add_variable(VarSign::free);
  EXPECT_THROW(lp.add_row({{3, Scalar(1)}}, Relation::equal, Scalar(0)), StructuralError);
}

TEST(Lp, ZeroTermsDroppedAndDuplicatesSummed) {
  LinearProgram lp;
  auto x = lp.add_variable(VarSign::free);
  auto y = lp.add_variable(VarSign::free);
  lp.add_row({{x, Scalar(1)}, {y, Scalar(0)}, {x, Scalar(2)}}, Relation::equal, Scalar(0));
  ASSERT_EQ(lp.rows()[0].terms.size(), 1u);
  EXPECT_EQ(lp.rows()[0].terms[0].coef, Scalar(3));
}

TEST(Lp, BatchPreservesOrder) {
  EXPECT_TRUE(solve_batch({}).empty());
  std::vector<LinearProgram> lps(5);
  for (int k = 0; k < 5; ++k) {
    auto x = lps[k].add_variable(VarSign::nonnegative);
    lps[k].add_row({{x, Scalar(1)}}, Relation::less_equal, Scalar(k));
    lps[k].set_objective(Sense::maximize, {{x, Scalar(1)}});
  }
  auto outs = solve_batch(lps);
  ASSERT_EQ(outs.size(), 5u);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(outs[k].objective, Scalar(k));
}

TEST(Lp, DegenerateProgramTerminates) {
  // Classic cycling example for pure Dantzig pivoting (Beale).
  LinearProgram lp;
  std::vector<std::size_t> x;
  for (int i = 0; i < 4; ++i) x.push_back(lp.add_variable(VarSign::nonnegative));
  lp.add_row({{x[0], Scalar(1, 4)}, {x[1], Scalar(-8)}, {x[2], Scalar(-1)}, {x[3], Scalar(9)}}, Relation::less_equal, Scalar(0));
  lp.add_row({{x[0], Scalar(1, 2)}, {x[1], Scalar(-12)}, {x[2], Scalar(-1, 2)}, {x[3], Scalar(3)}}, Relation::less_equal, Scalar(0));
  lp.add_row({{x[2], Scalar(1)}}, Relation::less_equal, Scalar(1));
  lp.set_objective(Sense::maximize, {{x[0], Scalar(3, 4)}, {x[1], Scalar(-20)}, {x[2], Scalar(1, 2)}, {x[3], Scalar(-6)}});
  auto out = solve(lp);
  ASSERT_EQ(out.status, LpStatus::optimal);
  EXPECT_EQ(out.objective, Scalar(5, 4));
}

TEST(Lp, PivotCap) {
  LinearProgram lp;
  auto x = lp.add_variable(VarSign::nonnegative);
  auto y = lp.add_variable(VarSign::nonnegative);
  lp.add_row({{x, Scalar(1)}, {y, Scalar(1)}}, Relation::less_equal, Scalar(1));
  lp.set_objective(Sense::maximize, {{x, Scalar(1)}, {y, Scalar(2)}});
  EXPECT_THROW(solve(lp, SolveOptions{0}), ResourceError);
}

TEST(Lp, WritesLpFormat) {
  LinearProgram lp;
  auto x = lp.add_variable(VarSign::free, "lam");
  lp.add_row({{x, Scalar(1, 2)}}, Relation::less_equal, Scalar(1), "row0");
  std::ostringstream os;
  write_lp_format(lp, os);
  EXPECT_NE(os.str().find("row0: 0.5 lam <= 1"), std::string::npos);
  EXPECT_NE(os.str().find("lam free"), std::string::npos);
}

namespace {

// Random small programs: every outcome must carry a checkable witness, and
// optimal duals must reproduce the objective.
LinearProgram random_program(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> nv(1, 4);
  std::uniform_int_distribution<int> nr(1, 5);
  std::uniform_int_distribution<int> rel(0, 2);
  LinearProgram lp;
  const int n = nv(rng);
  for (int j = 0; j < n; ++j) lp.add_variable(rng() % 3 == 0 ? VarSign::free : VarSign::nonnegative);
  const int m = nr(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<LpTerm> terms;
    for (int j = 0; j < n; ++j) terms.push_back({static_cast<std::size_t>(j), Scalar(coef(rng))});
    lp.add_row(terms, static_cast<Relation>(rel(rng)), Scalar(coef(rng)));
  }
  // Box keeps most programs bounded.
  for (int j = 0; j < n; ++j) {
    lp.add_row({{static_cast<std::size_t>(j), Scalar(1)}}, Relation::less_equal, Scalar(5));
    lp.add_row({{static_cast<std::size_t>(j), Scalar(1)}}, Relation::greater_equal, Scalar(-5));
  }
  std::vector<LpTerm> obj;
  for (int j = 0; j < n; ++j) obj.push_back({static_cast<std::size_t>(j), Scalar(coef(rng))});
  lp.set_objective(rng() % 2 ? Sense::maximize : Sense::minimize, obj);
  return lp;
}

}  // namespace

TEST(LpProperty, WitnessesAreValid) {
  std::mt19937 rng(17);
  int infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    LinearProgram lp = random_program(rng);
    auto out = solve(lp);
    ASSERT_NE(out.status, LpStatus::unbounded);
    if (out.status == LpStatus::infeasible) {
      ++infeasible;
      EXPECT_TRUE(out.primal.empty());
      ASSERT_TRUE(is_infeasibility_certificate(lp, out.certificate));
      Scalar by(0);
      for (std::size_t i = 0; i < lp.num_rows(); ++i) by += lp.rows()[i].rhs * out.certificate[i];
      EXPECT_EQ(by, Scalar(-1));
      continue;
    }
    ASSERT_EQ(out.status, LpStatus::optimal);
    EXPECT_TRUE(out.certificate.empty());
    ASSERT_TRUE(is_feasible_point(lp, out.primal));
    Scalar by(0);
    for (std::size_t i = 0; i < lp.num_rows(); ++i) by += lp.rows()[i].rhs * out.dual[i];
    EXPECT_EQ(by, out.objective);
    // Dual feasibility: A^T y = c on free variables; >= c (max) / <= c (min) on nonnegative ones.
    auto aty = transpose_times(lp, out.dual);
    std::vector<Scalar> c(lp.num_variables(), Scalar(0));
    for (const auto& t : lp.objective()) c[t.var] = t.coef;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (lp.sign(j) == VarSign::free)
        EXPECT_EQ(aty[j], c[j]);
      else if (lp.sense() == Sense::maximize)
        EXPECT_GE(aty[j], c[j]);
      else
        EXPECT_LE(aty[j], c[j]);
    }
  }
  EXPECT_GT(infeasible, 0);
}

TEST(LpProperty, RowScalingKeepsStatus) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    LinearProgram lp = random_program(rng);
    LinearProgram scaled;
    for (std::size_t j = 0; j < lp.num_variables(); ++j) scaled.add_variable(lp.sign(j));
    for (const auto& row : lp.rows()) {
      Scalar k = row.relation == Relation::less_equal ? Scalar(7, 3) : Scalar(1);
      std::vector<LpTerm> terms;
      for (const auto& t : row.terms) terms.push_back({t.var, t.coef * k});
      scaled.add_row(terms, row.relation, row.rhs * k);
    }
    EXPECT_EQ(solve(lp).status == LpStatus::infeasible, solve(scaled).status == LpStatus::infeasible);
  }
}

TEST(LpProperty, FloatModeAgreesWithRational) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    LinearProgram lp = random_program(rng);
    auto exact = solve(lp);
    LinearProgram flp;
    {
      NumericModeGuard guard(NumericMode::floating);
      for (std::size_t j = 0; j < lp.num_variables(); ++j) flp.add_variable(lp.sign(j));
      for (const auto& row : lp.rows()) {
        std::vector<LpTerm> terms;
        for (const auto& t : row.terms) terms.push_back({t.var, Scalar::from_double(t.coef.to_double())});
        flp.add_row(terms, row.relation, Scalar::from_double(row.rhs.to_double()));
      }
      std::vector<LpTerm> obj;
      for (const auto& t : lp.objective()) obj.push_back({t.var, Scalar::from_double(t.coef.to_double())});
      flp.set_objective(lp.sense(), obj);
      auto approx = solve(flp);
      ASSERT_EQ(exact.status, approx.status);
      if (exact.status == LpStatus::optimal) EXPECT_NEAR(exact.objective.to_double(), approx.objective.to_double(), 1e-9);
    }
  }
}
