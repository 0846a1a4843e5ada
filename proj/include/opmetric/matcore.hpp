#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace opmetric {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Row-major grid of blocks, as passed to block().
using BlockGrid = std::vector<std::vector<CMat>>;

/// Largest singular value. Throws InvalidInput on NaN/Inf entries.
double op_norm(const CMat& m);

/// Sum of singular values (Schatten-1 norm).
double trace_norm(const CMat& m);

/// All singular values, descending. Uses the same block splitting as op_norm.
Eigen::VectorXd singular_values(const CMat& m);

inline CMat dagger(const CMat& m) { return m.adjoint(); }

/// Concatenates a rectangular grid of blocks. Zero-sized blocks are not allowed;
/// pass explicit zero matrices of the right shape instead.
CMat block(const BlockGrid& blocks);

/// m ⊗ I_n arranged as the block diagonal diag(m, ..., m).
CMat scalar_amplify(const CMat& m, int n);

bool all_finite(const CMat& m);

/// Deterministic stream of standard complex Gaussians.
///
/// A stream is identified by (master seed, stream index); two streams with the
/// same identity produce the same sequence regardless of which thread owns them.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  /// Standard complex normal: real and imaginary parts are N(0, 1/2).
  cplx complex_normal();
  double normal();
  /// Uniform on [0, 1).
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// rows × cols matrix with i.i.d. standard complex Gaussian entries.
CMat rand_cmat(int rows, int cols, RngStream& rng);

/// Random matrix rescaled to operator norm `norm`.
CMat rand_cmat_with_norm(int rows, int cols, double norm, RngStream& rng);

/// Mixes a salt into a seed so that unrelated consumers of one master seed
/// draw from disjoint stream families.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt);

}  // namespace opmetric
