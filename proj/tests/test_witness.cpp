#include <cmath>
#include <mutex>

#include <gtest/gtest.h>

#include "opmetric/corpus.hpp"
#include "opmetric/criteria.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/witness.hpp"

using namespace opmetric;

namespace {

SearchConfig small_config(int restarts = 16) {
  SearchConfig cfg;
  cfg.restarts = restarts;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST(Maximize, NormOnUnitBall) {
  const SpaceRep s = corpus::full_matrix_space(2);
  const Objective f = [&](const LevelElement& x) { return s.norm(x); };
  const SearchResult r = maximize_violation(f, s, SearchDomain::level(1, 1.0), small_config(8));
  ASSERT_TRUE(r.found());
  EXPECT_NEAR(r.best_value, 1.0, 1e-4);
  EXPECT_LE(s.norm(r.best_point), 1.0 + 1e-9);
}

TEST(Maximize, FindsKnownRotationViolation) {
  const SpaceRep s = corpus::build_linf(3, true).space;
  const CVec u = *s.unit();
  const Objective f = [&](const LevelElement& x) { return criteria::four_rotation_violation(s, u, x); };
  const SearchResult r = maximize_violation(f, s, SearchDomain::level(1, 1.0), small_config());
  EXPECT_GE(r.best_value, std::sqrt(2.0) - 1.0 - 1e-3);
}

TEST(Maximize, ThreadCountDoesNotChangeResult) {
  const SpaceRep s = corpus::upper_triangular_space(2);
  const CVec u = *s.unit();
  const Objective f = [&](const LevelElement& x) { return criteria::t_gadget_violation(s, u, x); };
  SearchConfig one = small_config(12), many = small_config(12);
  many.threads = 8;
  const SearchResult a = maximize_violation(f, s, SearchDomain::level(2, 0.5, 7), one);
  const SearchResult b = maximize_violation(f, s, SearchDomain::level(2, 0.5, 7), many);
  EXPECT_EQ(a.best_value, b.best_value);
  EXPECT_EQ(a.best_point, b.best_point);
  EXPECT_EQ(a.restart_best, b.restart_best);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Maximize, StaysInsideBall) {
  const SpaceRep s = corpus::build_twisted_selfadjoint().space;
  std::mutex mu;
  double largest = 0.0;
  SearchConfig cfg = small_config(6);
  const Objective g = [&](const LevelElement& x) {
    const double n = s.norm(x);
    std::lock_guard<std::mutex> lock(mu);
    largest = std::max(largest, n);
    return n;
  };
  maximize_violation(g, s, SearchDomain::level(2, 0.3), cfg);
  EXPECT_LE(largest, 0.3 + 1e-9);
}

TEST(Maximize, TracesAreMonotone) {
  const SpaceRep s = corpus::build_column_H2().space;
  const CVec u = *s.unit();
  const Objective f = [&](const LevelElement& x) { return criteria::t_gadget_violation(s, u, x); };
  SearchConfig cfg = small_config(6);
  cfg.record_trace = true;
  const SearchResult r = maximize_violation(f, s, SearchDomain::level(1, 0.5), cfg);
  ASSERT_EQ(r.trace.size(), 6u);
  for (const auto& t : r.trace) {
    ASSERT_FALSE(t.empty());
    for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GE(t[i], t[i - 1]);
  }
}

TEST(Maximize, ZeroRestartsFindsNothing) {
  const SpaceRep s = corpus::full_matrix_space(2);
  const Objective f = [&](const LevelElement& x) { return s.norm(x); };
  const SearchResult r = maximize_violation(f, s, SearchDomain::level(1, 1.0), small_config(0));
  EXPECT_FALSE(r.found());
  EXPECT_EQ(r.evaluations, 0);
}

TEST(Maximize, RejectsBadConfig) {
  const SpaceRep s = corpus::full_matrix_space(2);
  const Objective f = [&](const LevelElement& x) { return s.norm(x); };
  SearchConfig cfg = small_config();
  cfg.radius = -1.0;
  EXPECT_THROW(maximize_violation(f, s, SearchDomain::level(1, 1.0), cfg), InvalidInput);
  cfg = small_config();
  cfg.max_level = 300;
  EXPECT_THROW(cfg.validate(2, 2), InvalidInput);
}

TEST(Refine, KeepsExactWitness) {
  const SpaceRep s = corpus::build_linf(3, true).space;
  const CVec u = *s.unit();
  const Objective f = [&](const LevelElement& x) { return criteria::four_rotation_violation(s, u, x); };
  const LevelElement e2 = LevelElement::single(CVec::Unit(3, 1));
  const SearchResult r = refine_witness(f, s, e2, 1.0, small_config());
  EXPECT_GE(r.best_value, std::sqrt(2.0) - 1.0 - 1e-9);
}

TEST(Refine, NeverDecreases) {
  const SpaceRep s = corpus::full_matrix_space(2);
  const Objective peak = [&](const LevelElement& x) { return -s.norm(x); };
  const LevelElement zero = LevelElement::square(1, 4);
  const SearchResult r0 = refine_witness(peak, s, zero, 1.0, small_config());
  EXPECT_EQ(r0.best_value, 0.0);

  const CVec u = *s.unit();
  const Objective f = [&](const LevelElement& x) { return criteria::t_gadget_violation(s, u, x); };
  RngStream rng(5, 0);
  for (int t = 0; t < 5; ++t) {
    LevelElement x = LevelElement::square(1, 4);
    for (Eigen::Index i = 0; i < 4; ++i) x.coeffs()(i) = 0.2 * rng.complex_normal();
    const SearchResult r = refine_witness(f, s, x, 1.0, small_config());
    EXPECT_GE(r.best_value, f(x));
  }
}
