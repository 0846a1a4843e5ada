#include "opmetric/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "opmetric/errors.hpp"

namespace opmetric {

namespace {

constexpr int kJacobiMaxDim = 32;

Eigen::VectorXd dense_singular_values(const CMat& m) {
  if (std::min(m.rows(), m.cols()) <= kJacobiMaxDim) {
    Eigen::JacobiSVD<CMat> svd(m);
    return svd.singularValues();
  }
  Eigen::BDCSVD<CMat> svd(m);
  return svd.singularValues();
}

// Union-find over the bipartite row/column graph of the nonzero pattern.
class Components {
 public:
  explicit Components(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// A matrix that is a direct sum up to row/column permutation has as singular
// values the union of the singular values of its summands. Splitting first keeps
// diagonal-heavy realizations (l-infinity, root-of-unity models) cheap.
template <typename Visit>
void for_each_block(const CMat& m, Visit&& visit) {
  const int r = static_cast<int>(m.rows());
  const int c = static_cast<int>(m.cols());
  Components comp(r + c);
  bool any = false;
  for (int j = 0; j < c; ++j) {
    for (int i = 0; i < r; ++i) {
      if (m(i, j) != cplx(0.0, 0.0)) {
        comp.unite(i, r + j);
        any = true;
      }
    }
  }
  if (!any) return;

  std::vector<std::vector<int>> rows_of(r + c);
  std::vector<std::vector<int>> cols_of(r + c);
  for (int i = 0; i < r; ++i) rows_of[comp.find(i)].push_back(i);
  for (int j = 0; j < c; ++j) cols_of[comp.find(r + j)].push_back(j);

  for (int root = 0; root < r + c; ++root) {
    const auto& ri = rows_of[root];
    const auto& ci = cols_of[root];
    if (ri.empty() || ci.empty()) continue;
    if (static_cast<int>(ri.size()) == r && static_cast<int>(ci.size()) == c) {
      visit(m);
      return;
    }
    CMat sub(ri.size(), ci.size());
    for (std::size_t a = 0; a < ri.size(); ++a)
      for (std::size_t b = 0; b < ci.size(); ++b) sub(a, b) = m(ri[a], ci[b]);
    visit(sub);
  }
}

// Largest singular value as √λ_max of the smaller Gram matrix. An
// eigenvalues-only Hermitian solve is several times cheaper than a Jacobi SVD
// at these sizes, and the top singular value loses nothing by squaring.
double top_singular_value(const CMat& m) {
  const CMat gram = m.rows() <= m.cols() ? CMat(m * m.adjoint()) : CMat(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues()(gram.rows() - 1), 0.0));
}

void require_finite(const CMat& m, const char* who) {
  if (!all_finite(m)) throw InvalidInput(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace

bool all_finite(const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double op_norm(const CMat& m) {
  require_finite(m, "op_norm");
  double best = 0.0;
  for_each_block(m, [&](const CMat& sub) {
    if (sub.rows() == 1 || sub.cols() == 1) {
      best = std::max(best, sub.norm());
    } else {
      best = std::max(best, top_singular_value(sub));
    }
  });
  return best;
}

double trace_norm(const CMat& m) {
  require_finite(m, "trace_norm");
  double total = 0.0;
  for_each_block(m, [&](const CMat& sub) { total += dense_singular_values(sub).sum(); });
  return total;
}

Eigen::VectorXd singular_values(const CMat& m) {
  require_finite(m, "singular_values");
  std::vector<double> values;
  for_each_block(m, [&](const CMat& sub) {
    const Eigen::VectorXd s = dense_singular_values(sub);
    values.insert(values.end(), s.data(), s.data() + s.size());
  });
  const auto full = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
  values.resize(std::max(values.size(), full), 0.0);
  std::sort(values.begin(), values.end(), std::greater<>());
  values.resize(full);
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

CMat block(const BlockGrid& blocks) {
  if (blocks.empty() || blocks.front().empty()) throw ShapeError("block: empty grid");
  const std::size_t grid_cols = blocks.front().size();
  std::vector<Eigen::Index> row_heights;
  std::vector<Eigen::Index> col_widths(grid_cols, -1);
  for (std::size_t gi = 0; gi < blocks.size(); ++gi) {
    const auto& grid_row = blocks[gi];
    if (grid_row.size() != grid_cols) throw ShapeError("block: grid rows have different lengths");
    const Eigen::Index h = grid_row.front().rows();
    for (std::size_t gj = 0; gj < grid_cols; ++gj) {
      const CMat& b = grid_row[gj];
      if (b.rows() != h) {
        throw ShapeError("block: row-count mismatch in grid row " + std::to_string(gi));
      }
      if (col_widths[gj] < 0) {
        col_widths[gj] = b.cols();
      } else if (col_widths[gj] != b.cols()) {
        throw ShapeError("block: column-count mismatch in grid column " + std::to_string(gj));
      }
    }
    row_heights.push_back(h);
  }
  const Eigen::Index total_rows = std::accumulate(row_heights.begin(), row_heights.end(), Eigen::Index{0});
  const Eigen::Index total_cols = std::accumulate(col_widths.begin(), col_widths.end(), Eigen::Index{0});
  if (total_rows == 0 || total_cols == 0) throw ShapeError("block: zero-sized result");

  CMat out(total_rows, total_cols);
  Eigen::Index r0 = 0;
  for (std::size_t gi = 0; gi < blocks.size(); ++gi) {
    Eigen::Index c0 = 0;
    for (std::size_t gj = 0; gj < grid_cols; ++gj) {
      out.block(r0, c0, row_heights[gi], col_widths[gj]) = blocks[gi][gj];
      c0 += col_widths[gj];
    }
    r0 += row_heights[gi];
  }
  return out;
}

CMat scalar_amplify(const CMat& m, int n) {
  if (n < 1) throw InvalidInput("scalar_amplify: n must be positive");
  CMat out = CMat::Zero(m.rows() * n, m.cols() * n);
  for (int i = 0; i < n; ++i) out.block(i * m.rows(), i * m.cols(), m.rows(), m.cols()) = m;
  return out;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt) {
  // splitmix64 finalizer over the combined word
  std::uint64_t z = master_seed ^ (salt + 0x9e3779b97f4a7c15ULL + (master_seed << 6) + (master_seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed), stream_(stream_index), engine_(make_engine(master_seed, stream_index)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() { return uniform_(engine_); }

cplx RngStream::complex_normal() {
  static const double kScale = std::sqrt(0.5);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

CMat rand_cmat(int rows, int cols, RngStream& rng) {
  if (rows < 1 || cols < 1) throw InvalidInput("rand_cmat: dimensions must be positive");
  CMat m(rows, cols);
  // fill row-major so the sequence matches the documented entry order
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

CMat rand_cmat_with_norm(int rows, int cols, double norm, RngStream& rng) {
  CMat m = rand_cmat(rows, cols, rng);
  const double current = op_norm(m);
  if (current == 0.0) return m;
  return m * (norm / current);
}

}  // namespace opmetric
