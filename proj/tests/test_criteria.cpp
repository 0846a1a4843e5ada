#include <cmath>

#include <gtest/gtest.h>

#include "opmetric/corpus.hpp"
#include "opmetric/criteria.hpp"
#include "opmetric/errors.hpp"
#include "oracles.hpp"

using namespace opmetric;
using namespace opmetric::criteria;

namespace {

SearchConfig budget(int restarts = 16) {
  SearchConfig cfg;
  cfg.restarts = restarts;
  return cfg;
}

CVec coeffs(std::initializer_list<cplx> c) {
  CVec v(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx z : c) v(i++) = z;
  return v;
}

// Re-evaluates the stored witness of a search-based report from scratch.
void expect_reproducible(const CheckReport& r, const std::function<double(const LevelElement&)>& f) {
  ASSERT_EQ(r.verdict, Verdict::Violated);
  ASSERT_TRUE(r.witness && r.witness->point);
  EXPECT_NEAR(f(*r.witness->point), -r.margin, 1e-9);
}

}  // namespace

TEST(FourRotation, MatrixAlgebraHolds) {
  const SpaceRep s = corpus::full_matrix_space(2);
  const CheckReport r = check_unitary_four_rotation(s, *s.unit(), budget());
  EXPECT_EQ(r.verdict, Verdict::HoldsWithinBudget);
  EXPECT_EQ(r.levels_checked, (std::vector<int>{1, 2}));
  // Spot value at x = 0.3 E12: ‖1 + x‖ − √1.3.
  const double spot = -four_rotation_violation(s, *s.unit(), LevelElement::single(coeffs({0, 0.3, 0, 0})));
  EXPECT_NEAR(spot, oracle::unipotent_norm(0.3) - std::sqrt(1.3), 1e-12);
  EXPECT_NEAR(spot, 0.0210, 1e-4);
}

TEST(FourRotation, SupNormWithCornerUnitFails) {
  const SpaceRep s = corpus::build_linf(3, true).space;
  const CheckReport r = check_unitary_four_rotation(s, *s.unit(), budget());
  EXPECT_GE(-r.margin, std::sqrt(2.0) - 1.0 - 1e-3);
  expect_reproducible(r, [&](const LevelElement& x) { return four_rotation_violation(s, *s.unit(), x); });
  EXPECT_NEAR(four_rotation_violation(s, *s.unit(), LevelElement::single(coeffs({0, 1, 0}))), std::sqrt(2.0) - 1.0,
              1e-14);
}

TEST(FourRotation, TraceClassAtLevelOne) {
  const SpaceRep s = corpus::build_trace_class_2().space;
  const CheckReport r = check_unitary_four_rotation(s, *s.unit(), budget());
  EXPECT_EQ(r.levels_checked, std::vector<int>{1});
  EXPECT_EQ(r.qualifier, kLevelOneQualifier);
  EXPECT_GE(-r.margin, 0.08);
  expect_reproducible(r, [&](const LevelElement& x) { return four_rotation_violation(s, *s.unit(), x); });
  const double gap = four_rotation_violation(s, *s.unit(), LevelElement::single(coeffs({0, 0, 0.25, 0})));
  EXPECT_NEAR(gap, std::sqrt(1.25) - std::sqrt(1.0625), 1e-9);
}

TEST(FourRotation, ScaledFormAgrees) {
  // Multiplying the inequality through by λ: the scaled functional at λx is λ times the plain one at x.
  const SpaceRep s = corpus::build_linf(3, true).space;
  RngStream rng(3, 0);
  for (int t = 0; t < 20; ++t) {
    const double lambda = 1.0 - rng.uniform();
    LevelElement x = LevelElement::single(coeffs({0, 0, 0}));
    for (Eigen::Index i = 0; i < 3; ++i) x.coeffs()(i) = 0.5 * rng.complex_normal();
    const double plain = four_rotation_violation(s, *s.unit(), x);
    const double scaled = four_rotation_violation_scaled(s, *s.unit(), x.scaled(lambda), lambda);
    EXPECT_EQ(plain > 1e-12, scaled > 1e-12);
    EXPECT_NEAR(scaled, lambda * plain, 1e-12);
  }
}

TEST(TGadget, Examples) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  EXPECT_EQ(check_unitary_t_gadget(m2, *m2.unit(), budget()).verdict, Verdict::HoldsWithinBudget);
  const SpaceRep tri = corpus::upper_triangular_space(2);
  EXPECT_EQ(check_unitary_t_gadget(tri, *tri.unit(), budget()).verdict, Verdict::HoldsWithinBudget);
  const SpaceRep col = corpus::build_column_H2().space;
  const CheckReport r = check_unitary_t_gadget(col, *col.unit(), budget());
  expect_reproducible(r, [&](const LevelElement& x) { return t_gadget_violation(col, *col.unit(), x); });
  const SpaceRep tc = corpus::build_trace_class_2().space;
  EXPECT_EQ(check_unitary_t_gadget(tc, *tc.unit(), budget()).verdict, Verdict::UnsupportedLevel);
}

TEST(RowColumnChecks, Examples) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  EXPECT_EQ(check_coisometry(m2, *m2.unit(), budget()).verdict, Verdict::HoldsWithinBudget);
  EXPECT_EQ(check_isometry(m2, *m2.unit(), budget()).verdict, Verdict::HoldsWithinBudget);

  const SpaceRep col = corpus::build_column_H2().space;
  EXPECT_EQ(check_isometry(col, *col.unit(), budget()).verdict, Verdict::HoldsWithinBudget);
  const CheckReport co = check_coisometry(col, *col.unit(), budget());
  EXPECT_EQ(co.verdict, Verdict::Violated);
  EXPECT_NEAR(co.margin, 1.0 - std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(row_deviation(col, *col.unit(), LevelElement::single(coeffs({0, 1}))), std::sqrt(2.0) - 1.0, 1e-12);

  const SpaceRep tri = corpus::upper_triangular_space(2);
  EXPECT_EQ(check_coisometry(tri, *tri.unit(), budget()).verdict, Verdict::HoldsWithinBudget);
}

TEST(OperatorSystem, Examples) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  EXPECT_EQ(check_operator_system(m2, *m2.unit(), budget()).verdict, Verdict::HoldsWithinBudget);
  const SpaceRep tw = corpus::build_twisted_selfadjoint().space;
  const CheckReport a = check_operator_system(tw, *tw.unit(), budget());
  const CheckReport b = check_operator_system(tw, *tw.unit(), budget());
  expect_reproducible(a, [&](const LevelElement& x) { return operator_system_deviation(tw, *tw.unit(), x); });
  EXPECT_EQ(a, b);

  SpaceDefinition def;
  def.p = def.q = 2;
  def.basis = {CMat::Identity(2, 2)};
  def.unit = CVec::Ones(1);
  def.involution = CMat::Identity(1, 1);
  const SpaceRep scalars = SpaceRep::create(std::move(def));
  EXPECT_EQ(check_operator_system(scalars, *scalars.unit(), budget()).verdict, Verdict::HoldsWithinBudget);
  EXPECT_THROW(check_operator_system(corpus::upper_triangular_space(2), CVec::Unit(3, 0), budget()), InvalidInput);
}

TEST(SGadget, AlwaysExploratory) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  const CheckReport r = check_s_gadget(m2, *m2.unit(), budget(4));
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_FALSE(r.qualifier.empty());
  EXPECT_LE(-r.margin, 1e-8);
}

TEST(Positive, Examples) {
  const SearchConfig cfg = budget();
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 0.25;
  EXPECT_EQ(check_positive(d, cfg).verdict, Verdict::HoldsWithinBudget);
  const CheckReport zero = check_positive(CMat::Zero(2, 2), cfg);
  EXPECT_EQ(zero.verdict, Verdict::HoldsWithinBudget);
  EXPECT_NEAR(zero.margin, 0.0, 1e-15);
  const CheckReport neg = check_positive(CMat(-0.5 * CMat::Identity(2, 2)), cfg);
  ASSERT_EQ(neg.verdict, Verdict::Violated);
  EXPECT_NEAR(neg.witness->aux.at("z_re"), 2.0, 1e-6);
  EXPECT_NEAR(neg.witness->aux.at("z_im"), 0.0, 1e-6);
  EXPECT_NEAR(neg.margin, -1.0, 1e-9);
}

TEST(Positive, SpaceForm) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  EXPECT_EQ(check_positive(m2, coeffs({0.3, 0, 0, 0.9}), budget()).verdict, Verdict::HoldsWithinBudget);
  EXPECT_EQ(check_positive(m2, coeffs({0.3, 0.5, 0.5, -0.2}), budget()).verdict, Verdict::Violated);
}

TEST(Adjoint, Examples) {
  const CMat e12 = oracle::unit(2, 2, 0, 1), e21 = oracle::unit(2, 2, 1, 0);
  EXPECT_EQ(check_adjoint(e12, e21, budget()).verdict, Verdict::HoldsWithinBudget);
  EXPECT_EQ(check_adjoint(CMat::Zero(2, 2), CMat::Zero(2, 2), budget()).verdict, Verdict::HoldsWithinBudget);
  // With z = −x* the block is [[t, x], [x*, t]], whose norm is t + 1 > √(1+t²) for t > 0.
  const CheckReport r = check_adjoint(e12, CMat(-e21), budget());
  ASSERT_EQ(r.verdict, Verdict::Violated);
  const double t = r.witness->aux.at("t");
  EXPECT_NEAR(-r.margin, std::abs(t) + 1.0 - std::sqrt(1.0 + t * t), 1e-9);
  EXPECT_NEAR(std::abs(t), budget().t_max, 1e-9);  // the excess grows with |t|
}

TEST(MultClosed, Examples) {
  const CheckReport tri = check_mult_closed(corpus::upper_triangular_space(2), budget());
  EXPECT_EQ(tri.verdict, Verdict::HoldsWithinBudget);
  EXPECT_TRUE(tri.cross_validation_agree.value_or(false));
  const CheckReport m2 = check_mult_closed(corpus::full_matrix_space(2), budget());
  EXPECT_EQ(m2.verdict, Verdict::HoldsWithinBudget);
  EXPECT_TRUE(m2.cross_validation_agree.value_or(false));
  const CheckReport off = check_mult_closed(corpus::build_non_algebra_span().space, budget());
  EXPECT_EQ(off.verdict, Verdict::Violated);
  EXPECT_TRUE(off.cross_validation_agree.value_or(false));
  EXPECT_NEAR(off.witness->aux.at("residual"), 1.0, 1e-9);
}

TEST(Multiplier, Examples) {
  const SpaceRep tri = corpus::upper_triangular_space(2);
  EXPECT_EQ(check_multiplier(tri, oracle::unit(2, 2, 0, 0), MultiplierSide::Left, budget()).verdict,
            Verdict::HoldsWithinBudget);
  const SpaceRep off = corpus::build_non_algebra_span().space;
  const CheckReport q = check_multiplier(off, CMat::Identity(2, 2), MultiplierSide::Quasi, budget());
  EXPECT_EQ(q.verdict, Verdict::Violated);
  EXPECT_NEAR(q.margin, -1.0, 1e-9);
  for (MultiplierSide side : {MultiplierSide::Left, MultiplierSide::Right, MultiplierSide::Quasi}) {
    EXPECT_EQ(check_multiplier(off, CMat::Zero(2, 2), side, budget()).verdict, Verdict::HoldsWithinBudget);
  }
  EXPECT_EQ(multiplier_side_from_string(to_string(MultiplierSide::Quasi)), MultiplierSide::Quasi);
  EXPECT_THROW(multiplier_side_from_string("sideways"), InvalidInput);
}

TEST(LeftMultiplierMap, Examples) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  const CMat id = CMat::Identity(4, 4);
  EXPECT_EQ(check_left_multiplier_map(m2, id, budget(8)).verdict, Verdict::HoldsWithinBudget);
  // Left multiplication by E11 on coefficients in the E11, E12, E21, E22 basis.
  CMat left = CMat::Zero(4, 4);
  left(0, 0) = 1.0;
  left(1, 1) = 1.0;
  EXPECT_EQ(check_left_multiplier_map(m2, left, budget(8)).verdict, Verdict::HoldsWithinBudget);
  const CheckReport r = check_left_multiplier_map(m2, CMat(2.0 * id), budget(8));
  ASSERT_EQ(r.verdict, Verdict::Violated);
  // a = b already gives ‖[2a; a]‖ = √5‖a‖ > √2‖a‖; on the unit ball the excess peaks at b = 0, ‖a‖ = 1.
  EXPECT_NEAR(-r.margin, 1.0, 1e-3);
}

TEST(AlgebraProduct, Examples) {
  const SpaceRep tri = corpus::upper_triangular_space(2);
  const StructureTensor prod = ambient_product_tensor(tri);
  EXPECT_EQ(check_algebra_product(tri, *tri.unit(), prod, budget(8)).verdict, Verdict::HoldsWithinBudget);
  StructureTensor doubled = prod;
  for (CMat& m : doubled) m *= 2.0;
  const CheckReport bad = check_algebra_product(tri, *tri.unit(), doubled, budget(8));
  EXPECT_EQ(bad.verdict, Verdict::Violated);
  const SpaceRep linf2 = corpus::build_linf(2).space;
  EXPECT_EQ(check_algebra_product(linf2, *linf2.unit(), ambient_product_tensor(linf2), budget(8)).verdict,
            Verdict::HoldsWithinBudget);
}

TEST(CstarAmongSystems, Examples) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  const CheckReport ok = check_cstar_among_systems(m2, budget());
  EXPECT_EQ(ok.verdict, Verdict::HoldsWithinBudget);
  EXPECT_LE(-ok.margin, 1e-6);
  CstarSampling shifted;
  shifted.z_shift = CMat(0.3 * CMat::Identity(2, 2));
  const CheckReport bad = check_cstar_among_systems(m2, budget(), shifted);
  EXPECT_EQ(bad.verdict, Verdict::Violated);
  EXPECT_GT(-bad.margin, 1e-3);
}

TEST(Catalog, DispatchAndErrors) {
  EXPECT_EQ(catalog().size(), 13u);
  const corpus::CorpusEntry e = corpus::build_linf(3, true);
  EXPECT_EQ(run_criterion("coisometry", e.space, {}, budget(4)).verdict, Verdict::Violated);
  EXPECT_THROW(run_criterion("nonsense", e.space, {}, budget(4)), InvalidInput);
  EXPECT_THROW(run_criterion("positive", e.space, {}, budget(4)), InvalidInput);
  SearchConfig none = budget(0);
  EXPECT_EQ(run_criterion("unitary-t-gadget", e.space, {}, none).verdict, Verdict::Inconclusive);
}
