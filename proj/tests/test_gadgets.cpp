#include <cmath>

#include <gtest/gtest.h>

#include "opmetric/corpus.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/gadgets.hpp"
#include "oracles.hpp"

using namespace opmetric;
using namespace opmetric::gadgets;

namespace {

SpaceRep scalars() {
  SpaceDefinition def;
  def.p = def.q = 1;
  def.basis = {CMat::Identity(1, 1)};
  def.unit = CVec::Ones(1);
  def.involution = CMat::Identity(1, 1);
  return SpaceRep::create(std::move(def));
}

LevelElement one_by_one(double v) { return LevelElement::single(CVec::Constant(1, v)); }

LevelElement random_element(const SpaceRep& s, int n, double norm, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  LevelElement x = LevelElement::square(n, s.dim());
  for (Eigen::Index i = 0; i < x.coeffs().size(); ++i) x.coeffs()(i) = cplx(nd(gen), nd(gen));
  return x.scaled(norm / s.norm(x));
}

}  // namespace

TEST(TGadget, Scalars) {
  const SpaceRep s = scalars();
  const CVec v = CVec::Ones(1);
  EXPECT_EQ(build_t(s, v, one_by_one(0.0)), CMat(CMat::Identity(2, 2)));
  const CMat t = build_t(s, v, one_by_one(1.0));
  CMat expect(2, 2);
  expect << 1, 1, 0, 1;
  EXPECT_EQ(t, expect);
  EXPECT_NEAR(std::pow(op_norm(t), 2), (3.0 + std::sqrt(5.0)) / 2.0, 1e-12);
}

TEST(TGadget, ClosedFormOnMatrixAlgebras) {
  std::mt19937_64 gen(31);
  for (const SpaceRep& s : {corpus::full_matrix_space(2), corpus::full_matrix_space(3),
                            corpus::upper_triangular_space(2)}) {
    for (int n = 1; n <= 2; ++n) {
      for (int t = 0; t < 100; ++t) {
        const double target = std::uniform_real_distribution<double>(0.01, 2.0)(gen);
        const LevelElement x = random_element(s, n, target, gen);
        const double g = oracle::ref_norm(build_t(s, *s.unit(), x));
        EXPECT_NEAR(g * g, oracle::t_gadget_squared(target), 1e-8);
      }
    }
  }
  const SpaceRep m2 = corpus::full_matrix_space(2);
  const LevelElement x = random_element(m2, 1, 0.7, gen);
  EXPECT_NEAR(std::pow(op_norm(build_t(m2, *m2.unit(), x)), 2), 0.5 * (2.0 + 0.49 + 0.7 * std::sqrt(4.49)), 1e-9);
}

TEST(TGadget, PhaseInvariance) {
  // ‖t_{iᵏx}‖ = ‖t_x‖.
  std::mt19937_64 gen(37);
  const SpaceRep s = corpus::upper_triangular_space(2);
  const LevelElement x = random_element(s, 2, 0.8, gen);
  const double base = op_norm(build_t(s, *s.unit(), x));
  for (cplx phase : {cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
    EXPECT_NEAR(op_norm(build_t(s, *s.unit(), x.scaled(phase))), base, 1e-10);
  }
}

TEST(SRGadgets, Scalars) {
  const SpaceRep s = scalars();
  const CVec v = CVec::Ones(1);
  CMat ones(2, 2), rot(2, 2);
  ones << 1, 1, 1, 1;
  rot << 1, 1, -1, 1;
  EXPECT_EQ(build_s(s, v, one_by_one(1.0)), ones);
  EXPECT_EQ(build_r(s, v, one_by_one(1.0)), rot);
  EXPECT_NEAR(op_norm(ones), 2.0, 1e-14);
  EXPECT_NEAR(op_norm(rot), std::sqrt(2.0), 1e-14);
}

TEST(SRGadgets, MatrixAlgebra) {
  const SpaceRep s = corpus::full_matrix_space(2);
  const LevelElement zero = LevelElement::square(1, 4);
  EXPECT_EQ(build_s(s, *s.unit(), zero), CMat(CMat::Identity(4, 4)));
  EXPECT_EQ(build_r(s, *s.unit(), zero), CMat(CMat::Identity(4, 4)));
  std::mt19937_64 gen(41);
  for (const SpaceRep& sp : {corpus::full_matrix_space(2), corpus::full_matrix_space(3)}) {
    for (int n = 1; n <= 2; ++n) {
      for (int t = 0; t < 100; ++t) {
        const double target = std::uniform_real_distribution<double>(0.01, 2.0)(gen);
        const LevelElement x = random_element(sp, n, target, gen);
        EXPECT_NEAR(oracle::ref_norm(build_s(sp, *sp.unit(), x)), 1.0 + target, 1e-8);
        EXPECT_NEAR(oracle::ref_norm(build_r(sp, *sp.unit(), x)), std::sqrt(1.0 + target * target), 1e-8);
      }
    }
  }
  EXPECT_THROW(build_s(corpus::upper_triangular_space(2), CVec::Ones(3), LevelElement::square(1, 3)), InvalidInput);
}

TEST(RowColumn, Examples) {
  const SpaceRep s = corpus::full_matrix_space(2);
  const CMat row0 = build_row(s, *s.unit(), LevelElement::square(1, 4));
  EXPECT_EQ(row0.rows(), 2);
  EXPECT_EQ(row0.cols(), 4);
  EXPECT_NEAR(op_norm(row0), 1.0, 1e-14);
  std::mt19937_64 gen(43);
  const LevelElement x = random_element(s, 1, 1.0, gen);
  EXPECT_NEAR(oracle::ref_norm(build_row(s, *s.unit(), x)), std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(oracle::ref_norm(build_column(s, *s.unit(), x)), std::sqrt(2.0), 1e-10);

  const SpaceRep col = corpus::build_column_H2().space;
  const LevelElement e2 = LevelElement::single(CVec::Unit(2, 1));
  const CMat c = build_column(col, *col.unit(), e2);
  const CMat r = build_row(col, *col.unit(), e2);
  EXPECT_NEAR(oracle::ref_norm(c), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(oracle::op_norm_2x2(r), 1.0, 1e-12);
}

TEST(RowColumn, GridFormsMatchDenseBuilders) {
  std::mt19937_64 gen(47);
  const SpaceRep s = corpus::build_twisted_selfadjoint().space;
  std::normal_distribution<double> nd;
  LevelElement x(2, 3, s.dim());
  for (Eigen::Index i = 0; i < x.coeffs().size(); ++i) x.coeffs()(i) = cplx(nd(gen), nd(gen));
  EXPECT_EQ(s.realize(row_grid(*s.unit(), x)), build_row(s, *s.unit(), x));
  EXPECT_EQ(s.realize(column_grid(*s.unit(), x)), build_column(s, *s.unit(), x));
  const LevelElement sq = random_element(s, 2, 0.5, gen);
  EXPECT_NEAR(s.norm(t_grid(s, *s.unit(), sq)), oracle::ref_norm(build_t(s, *s.unit(), sq)), 1e-10);
  EXPECT_NEAR(s.norm(r_grid(s, *s.unit(), sq)), oracle::ref_norm(build_r(s, *s.unit(), sq)), 1e-10);
}

TEST(FourRotation, Examples) {
  const SpaceRep linf = corpus::build_linf(3).space;
  CVec x = CVec::Zero(3);
  x(1) = 0.3;
  EXPECT_NEAR(linf.norm(build_four_rotation(linf, *linf.unit(), LevelElement::single(x), 0)), 1.3, 1e-14);

  const SpaceRep m2 = corpus::full_matrix_space(2);
  CVec e12 = CVec::Zero(4);
  e12(1) = 0.3;
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(m2.norm(build_four_rotation(m2, *m2.unit(), LevelElement::single(e12), k)), oracle::unipotent_norm(0.3),
                1e-12);
  }

  const SpaceRep tc = corpus::build_trace_class_2().space;
  CVec c = CVec::Zero(4);
  c(2) = 0.25;
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(tc.norm(build_four_rotation(tc, *tc.unit(), LevelElement::single(c), k)), std::sqrt(1.0625), 1e-12);
  }
  EXPECT_THROW(build_four_rotation(tc, *tc.unit(), LevelElement::square(2, 4), 0), UnsupportedLevel);
}

TEST(Ue, Construction) {
  const SpaceRep m2 = corpus::full_matrix_space(2);
  const SpaceRep ue = build_Ue(m2, *m2.unit());
  EXPECT_EQ(ue.dim(), 5);
  EXPECT_EQ(ue.p(), 4);
  EXPECT_NEAR(ue.norm(*ue.unit()), 1.0, 1e-14);
  const SpaceRep linf = corpus::build_linf(3, true).space;
  const SpaceRep ue3 = build_Ue(linf, *linf.unit());
  EXPECT_EQ(ue3.dim(), 4);
  EXPECT_EQ(ue3.p(), 6);
  EXPECT_EQ(ue3.q(), 6);
}

TEST(MPm, Coisometries) {
  const CMat z = CMat::Zero(2, 2);
  const CMat mp = build_M_pm(z, z, z, z, Sign::Plus);
  EXPECT_NEAR((mp * mp.adjoint() - CMat::Identity(4, 4)).norm(), 0.0, 1e-12);

  std::mt19937_64 gen(53);
  for (int t = 0; t < 20; ++t) {
    CMat x = oracle::random_matrix(2, 2, gen), y = oracle::random_matrix(2, 2, gen);
    x /= oracle::ref_norm(x) * 1.5;
    y /= oracle::ref_norm(y) * 1.5;
    const CMat zz = -x * y.adjoint();
    const CMat h = x * x.adjoint() + y * y.adjoint() + zz * zz.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es(oracle::ref_norm(h) * CMat::Identity(2, 2) - h);
    const CMat b = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                   es.eigenvectors().adjoint();
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
      const CMat m = build_M_pm(x, y, zz, b, sg);
      EXPECT_NEAR((m * m.adjoint() - CMat::Identity(4, 4)).norm(), 0.0, 1e-9);
    }
  }

  const CMat one = CMat::Identity(2, 2);
  const CMat mm = build_M_pm(z, one, z, z, Sign::Minus);
  const double scale = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR((mm.block(2, 6, 2, 2) + scale * one).norm(), 0.0, 1e-12);
  EXPECT_NEAR((mm.block(2, 10, 2, 2) + scale * one).norm(), 0.0, 1e-12);
}

TEST(MultRow, ConstantsOnly) {
  const CMat z = CMat::Zero(2, 2);
  const MultRow r = build_mult_row(z, z, z, z);
  EXPECT_NEAR(oracle::ref_norm(r.row), 2.0, 1e-12);
  EXPECT_NEAR(oracle::ref_norm(r.full), 2.0, 1e-12);
  EXPECT_NEAR(op_norm(r.full), oracle::ref_norm(r.full), 1e-12);
}

TEST(MultRow, PerturbedZSeparatesNorms) {
  const CMat x = oracle::unit(2, 2, 0, 1), y = oracle::unit(2, 2, 0, 1);
  CMat zz = -x * y.adjoint();
  // b chosen so that [2, x, z, b] has orthogonal rows of equal length.
  auto b_for = [&](const CMat& zm) {
    const CMat h = 4.0 * CMat::Identity(2, 2) + x * x.adjoint() + zm * zm.adjoint();
    const double n = oracle::ref_norm(h);
    Eigen::SelfAdjointEigenSolver<CMat> es(n * CMat::Identity(2, 2) - h);
    return CMat(es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                es.eigenvectors().adjoint());
  };
  MultRow r = build_mult_row(x, y, zz, b_for(zz));
  EXPECT_NEAR(oracle::ref_norm(r.full), oracle::ref_norm(r.row), 1e-9);
  zz += 0.5 * oracle::unit(2, 2, 0, 0);
  r = build_mult_row(x, y, zz, b_for(zz));
  EXPECT_GT(oracle::ref_norm(r.full) - oracle::ref_norm(r.row), 1e-3);
}

TEST(AdjointBlock, Examples) {
  const CMat x = oracle::unit(2, 2, 0, 1), z = oracle::unit(2, 2, 1, 0);
  EXPECT_NEAR(op_norm(build_adjoint_block(x, z, 0.0)), 1.0, 1e-14);
  EXPECT_NEAR(op_norm(build_adjoint_block(x, z, 1.0)), std::sqrt(2.0), 1e-9);
  // z = 0 is not the adjoint: some t on the grid exceeds √(1+t²).
  double worst = -1.0;
  for (int i = 0; i <= 16; ++i) {
    const double t = 0.25 * i;
    worst = std::max(worst, oracle::ref_norm(build_adjoint_block(x, CMat::Zero(2, 2), t)) - std::sqrt(1.0 + t * t));
  }
  EXPECT_GT(worst, 1e-3);
  EXPECT_THROW(build_adjoint_block(x, CMat::Zero(3, 3), 0.0), ShapeError);
}
