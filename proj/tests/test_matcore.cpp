#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "opmetric/errors.hpp"
#include "opmetric/matcore.hpp"
#include "oracles.hpp"

using namespace opmetric;

TEST(OpNorm, SmallExamples) {
  EXPECT_NEAR(op_norm(CMat::Identity(2, 2)), 1.0, 1e-15);
  CMat m = CMat::Zero(2, 2);
  m(0, 1) = 2.0;
  EXPECT_NEAR(op_norm(m), 2.0, 1e-15);
  CMat j(2, 2);
  j << 1, 1, 0, 1;
  EXPECT_NEAR(op_norm(j), (1.0 + std::sqrt(5.0)) / 2.0, 1e-14);
  EXPECT_NEAR(op_norm(j), oracle::power_norm(j), 1e-12);
  EXPECT_NEAR(op_norm(j), oracle::ref_norm(j), 1e-12);
}

TEST(OpNorm, MatchesReferenceEigensolver) {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 60; ++t) {
    const int r = 1 + t % 8, c = 1 + (t / 8) % 8;
    const CMat m = oracle::random_matrix(r, c, gen);
    EXPECT_NEAR(op_norm(m), oracle::ref_norm(m), 1e-9 * (1.0 + op_norm(m))) << r << "x" << c;
  }
}

TEST(OpNorm, PermutedBlockDiagonal) {
  // Decoupled rows/columns are split into blocks internally; the answer must not change.
  std::mt19937_64 gen(3);
  CMat m = CMat::Zero(5, 4);
  m.block(0, 0, 2, 2) = oracle::random_matrix(2, 2, gen);
  m.block(2, 2, 3, 2) = 3.0 * oracle::random_matrix(3, 2, gen);
  Eigen::PermutationMatrix<Eigen::Dynamic> pr(5), pc(4);
  pr.indices() << 3, 0, 4, 1, 2;
  pc.indices() << 2, 0, 3, 1;
  const CMat shuffled = pr * m * pc;
  EXPECT_NEAR(op_norm(shuffled), oracle::ref_norm(m), 1e-10);
  EXPECT_EQ(singular_values(shuffled).size(), 4);
}

TEST(OpNorm, CstarIdentity) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 500; ++t) {
    const int r = 1 + static_cast<int>(gen() % 8), c = 1 + static_cast<int>(gen() % 8);
    const CMat m = oracle::random_matrix(r, c, gen);
    const double n = op_norm(m);
    EXPECT_LE(std::abs(n * n - op_norm(dagger(m) * m)), 1e-9 * (1.0 + n * n));
  }
}

TEST(OpNorm, RejectsNonFinite) {
  CMat m = CMat::Identity(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(op_norm(m), InvalidInput);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(trace_norm(m), InvalidInput);
}

TEST(TraceNorm, Examples) {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 0.6;
  d(1, 1) = 0.4;
  EXPECT_NEAR(trace_norm(d), 1.0, 1e-15);
  CMat c = d;
  c(1, 0) = 0.25;
  EXPECT_NEAR(trace_norm(c), std::sqrt(1.0625), 1e-12);
  EXPECT_NEAR(trace_norm(c), oracle::trace_norm_2x2(c), 1e-12);
  EXPECT_EQ(trace_norm(CMat::Zero(3, 3)), 0.0);
}

TEST(TraceNorm, DominatesOpNorm) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 100; ++t) {
    const CMat m = oracle::random_matrix(2, 2, gen);
    EXPECT_NEAR(trace_norm(m), oracle::trace_norm_2x2(m), 1e-10);
    const CMat big = oracle::random_matrix(4, 3, gen);
    EXPECT_GE(trace_norm(big), op_norm(big) - 1e-12);
    EXPECT_GT(op_norm(big), 1e-12);
  }
}

TEST(Dagger, Basics) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = cplx(0, 1);
  EXPECT_EQ(dagger(m)(0, 0), cplx(0, -1));
  CMat s(2, 2);
  s << 1, 2, 2, 3;
  EXPECT_EQ(dagger(s), s);
  std::mt19937_64 gen(1);
  const CMat r = oracle::random_matrix(3, 5, gen);
  EXPECT_NEAR(op_norm(dagger(r)), op_norm(r), 1e-12);
}

TEST(Block, Assembly) {
  std::mt19937_64 gen(2);
  const CMat a = oracle::random_matrix(3, 2, gen);
  EXPECT_EQ(block({{a}}), a);
  const CMat i2 = CMat::Identity(2, 2), z2 = CMat::Zero(2, 2);
  EXPECT_EQ(block({{i2, z2}, {z2, i2}}), CMat(CMat::Identity(4, 4)));
  EXPECT_THROW(block({{i2, z2}, {z2}}), ShapeError);
  EXPECT_THROW(block({{CMat::Identity(2, 2), CMat::Identity(3, 3)}}), ShapeError);
}

TEST(Block, SymmetricAndRotationPairs) {
  std::mt19937_64 gen(9);
  const cplx i(0, 1);
  for (int t = 0; t < 200; ++t) {
    const CMat a = oracle::random_matrix(3, 3, gen), b = oracle::random_matrix(3, 3, gen);
    const double sym = std::max(oracle::ref_norm(a + b), oracle::ref_norm(a - b));
    EXPECT_NEAR(op_norm(block({{a, b}, {b, a}})), sym, 1e-9);
    const double rot = std::max(oracle::ref_norm(a + i * b), oracle::ref_norm(a - i * b));
    EXPECT_NEAR(op_norm(block({{a, CMat(-b)}, {b, a}})), rot, 1e-9);
  }
}

TEST(ScalarAmplify, Examples) {
  std::mt19937_64 gen(4);
  const CMat m = oracle::random_matrix(2, 3, gen);
  EXPECT_EQ(scalar_amplify(m, 1), m);
  EXPECT_EQ(scalar_amplify(CMat::Identity(2, 2), 3), CMat(CMat::Identity(6, 6)));
  const CMat big = scalar_amplify(m, 4);
  EXPECT_EQ(big.rows(), 8);
  EXPECT_EQ(big.cols(), 12);
  EXPECT_NEAR(op_norm(big), op_norm(m), 1e-12);
}

TEST(Rng, Determinism) {
  RngStream a(42, 3), b(42, 3), c(42, 4);
  const CMat ma = rand_cmat(3, 3, a), mb = rand_cmat(3, 3, b), mc = rand_cmat(3, 3, c);
  EXPECT_EQ(ma, mb);
  EXPECT_NE(ma, mc);
  RngStream d(1, 0);
  EXPECT_NEAR(op_norm(rand_cmat_with_norm(2, 2, 1.0, d)), 1.0, 1e-12);
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
}
