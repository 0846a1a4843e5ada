#include "opmetric/opspace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "opmetric/errors.hpp"

namespace opmetric {

std::string to_string(NormMode mode) {
  return mode == NormMode::Embedded ? "embedded" : "level1-oracle";
}

std::string to_string(Level1Oracle oracle) {
  switch (oracle) {
    case Level1Oracle::TraceNorm:
      return "trace_norm";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// LevelElement

LevelElement::LevelElement(int rows, int cols, int dim)
    : LevelElement(rows, cols, dim, CVec::Zero(static_cast<Eigen::Index>(rows) * cols * dim)) {}

LevelElement::LevelElement(int rows, int cols, int dim, CVec coeffs)
    : rows_(rows), cols_(cols), dim_(dim), coeffs_(std::move(coeffs)) {
  if (rows < 1 || cols < 1 || dim < 1) throw ShapeError("LevelElement: grid and dimension must be positive");
  if (coeffs_.size() != static_cast<Eigen::Index>(rows) * cols * dim) {
    throw ShapeError("LevelElement: coefficient count does not match grid");
  }
}

LevelElement LevelElement::single(const CVec& coeffs) {
  return {1, 1, static_cast<int>(coeffs.size()), coeffs};
}

int LevelElement::level() const {
  if (!is_square()) throw ShapeError("LevelElement: rectangular grid has no level");
  return rows_;
}

LevelElement LevelElement::scaled(cplx alpha) const {
  LevelElement out = *this;
  out.coeffs_ *= alpha;
  return out;
}

LevelElement LevelElement::padded(int extra_rows, int extra_cols) const {
  LevelElement out(rows_ + extra_rows, cols_ + extra_cols, dim_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.cell(i, j) = cell(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// SpaceRep

namespace {

constexpr double kStructureTolerance = 1e-10;

void validate_shapes(const SpaceDefinition& def) {
  if (def.p < 1 || def.q < 1) throw InvalidInput("space: p and q must be positive");
  if (def.basis.empty()) throw InvalidInput("space: basis is empty");
  for (std::size_t i = 0; i < def.basis.size(); ++i) {
    const CMat& b = def.basis[i];
    if (b.rows() != def.p || b.cols() != def.q) {
      throw ShapeError("space: basis element " + std::to_string(i) + " is not p×q");
    }
    if (!all_finite(b)) throw InvalidInput("space: basis element " + std::to_string(i) + " is not finite");
  }
  if (def.norm_mode == NormMode::Level1Oracle && !def.level1_oracle) {
    throw InvalidInput("space: level1-oracle mode needs a level1_oracle");
  }
}

}  // namespace

SpaceRep::SpaceRep(SpaceDefinition def) : def_(std::move(def)) {}

SpaceRep SpaceRep::create(SpaceDefinition def, double rank_tolerance) {
  validate_shapes(def);
  const int k = static_cast<int>(def.basis.size());
  const Eigen::Index pq = static_cast<Eigen::Index>(def.p) * def.q;

  SpaceRep space(std::move(def));
  space.rank_tolerance_ = rank_tolerance;
  space.basis_columns_.resize(pq, k);
  for (int i = 0; i < k; ++i) {
    space.basis_columns_.col(i) = Eigen::Map<const CVec>(space.def_.basis[i].data(), pq);
  }

  if (k > pq) throw RankDeficient("space: more basis elements than ambient dimension");
  const Eigen::VectorXd sv = singular_values(space.basis_columns_);
  if (sv(0) == 0.0 || sv(k - 1) <= rank_tolerance * sv(0)) {
    throw RankDeficient("space: basis is linearly dependent (smallest/largest singular value " +
                        std::to_string(sv(0) == 0.0 ? 0.0 : sv(k - 1) / sv(0)) + ")");
  }
  space.qr_.compute(space.basis_columns_);
  space.split_support();

  if (space.def_.involution) {
    const CMat& s = *space.def_.involution;
    if (s.rows() != k || s.cols() != k) throw ShapeError("space: involution must be k×k");
    if (!all_finite(s)) throw InvalidInput("space: involution is not finite");
    const CMat twice = s * s.conjugate();
    const double scale = std::max(1.0, op_norm(s) * op_norm(s));
    if (op_norm(twice - CMat::Identity(k, k)) > kStructureTolerance * scale) {
      throw InvalidInput("space: involution applied twice is not the identity");
    }
    if (space.embedded()) {
      if (space.p() != space.q()) throw InvalidInput("space: embedded involution needs a square ambient");
      for (int i = 0; i < k; ++i) {
        const CMat image = space.realize(CVec(s.col(i)));
        const CMat& b = space.def_.basis[i];
        if (op_norm(image - b.adjoint()) > kStructureTolerance * std::max(1.0, op_norm(b))) {
          throw InvalidInput("space: involution does not realize the adjoint on basis element " +
                             std::to_string(i));
        }
      }
    }
  }

  if (space.def_.unit) {
    if (space.def_.unit->size() != k) throw ShapeError("space: unit must have k coefficients");
    if (!space.def_.unit->allFinite()) throw InvalidInput("space: unit is not finite");
    const double n = space.norm(*space.def_.unit);
    if (n > 1.0 + kStructureTolerance) {
      throw InvalidInput("space: unit has norm " + std::to_string(n) + " > 1");
    }
  }
  return space;
}

SpaceRep SpaceRep::with_unit(std::optional<CVec> unit) const {
  SpaceDefinition def = def_;
  def.unit = std::move(unit);
  return create(std::move(def), rank_tolerance_);
}

CMat SpaceRep::realize(const CVec& coeffs) const {
  if (coeffs.size() != dim()) throw ShapeError("realize: coefficient vector has wrong length");
  const CVec flat = basis_columns_ * coeffs;
  return Eigen::Map<const CMat>(flat.data(), def_.p, def_.q);
}

CMat SpaceRep::realize(const LevelElement& x) const {
  if (x.dim() != dim()) throw ShapeError("realize: element dimension does not match space");
  CMat out(static_cast<Eigen::Index>(def_.p) * x.rows(), static_cast<Eigen::Index>(def_.q) * x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      const CVec flat = basis_columns_ * x.cell(i, j);
      out.block(static_cast<Eigen::Index>(i) * def_.p, static_cast<Eigen::Index>(j) * def_.q, def_.p, def_.q) =
          Eigen::Map<const CMat>(flat.data(), def_.p, def_.q);
    }
  }
  return out;
}

void SpaceRep::split_support() {
  // Union-find over rows 0..p-1 and columns p..p+q-1, joined by nonzero entries.
  const int p = def_.p, q = def_.q;
  std::vector<int> parent(static_cast<std::size_t>(p + q));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<char> used(static_cast<std::size_t>(p + q), 0);
  for (const CMat& b : def_.basis) {
    for (int c = 0; c < q; ++c) {
      for (int r = 0; r < p; ++r) {
        if (b(r, c) == cplx(0.0, 0.0)) continue;
        used[r] = used[p + c] = 1;
        parent[find(r)] = find(p + c);
      }
    }
  }
  std::map<int, Component> by_root;
  for (int r = 0; r < p; ++r) {
    if (used[r]) by_root[find(r)].rows.push_back(r);
  }
  for (int c = 0; c < q; ++c) {
    if (used[p + c]) by_root[find(p + c)].cols.push_back(c);
  }
  components_.clear();
  Eigen::Index total = 0;
  for (auto& [root, comp] : by_root) {
    comp.offset = total;
    total += static_cast<Eigen::Index>(comp.rows.size() * comp.cols.size());
    components_.push_back(std::move(comp));
  }
  support_columns_.resize(total, dim());
  for (const Component& comp : components_) {
    const auto a = static_cast<Eigen::Index>(comp.rows.size());
    for (std::size_t jc = 0; jc < comp.cols.size(); ++jc) {
      for (std::size_t ir = 0; ir < comp.rows.size(); ++ir) {
        const Eigen::Index src = static_cast<Eigen::Index>(comp.cols[jc]) * p + comp.rows[ir];
        support_columns_.row(comp.offset + static_cast<Eigen::Index>(jc) * a + static_cast<Eigen::Index>(ir)) =
            basis_columns_.row(src);
      }
    }
  }
}

double SpaceRep::component_norm(const LevelElement& x) const {
  // Entries of every cell on the joint support, one column per cell.
  const Eigen::Map<const CMat> cells(x.coeffs().data(), dim(), static_cast<Eigen::Index>(x.rows()) * x.cols());
  const CMat values = support_columns_ * cells;
  double best = 0.0;
  for (const Component& comp : components_) {
    const auto a = static_cast<Eigen::Index>(comp.rows.size());
    const auto b = static_cast<Eigen::Index>(comp.cols.size());
    CMat m(a * x.rows(), b * x.cols());
    for (int i = 0; i < x.rows(); ++i) {
      for (int j = 0; j < x.cols(); ++j) {
        const Eigen::Index c = static_cast<Eigen::Index>(i) * x.cols() + j;
        m.block(i * a, j * b, a, b) = Eigen::Map<const CMat>(values.col(c).data() + comp.offset, a, b);
      }
    }
    best = std::max(best, op_norm(m));
  }
  return best;
}

double SpaceRep::norm(const LevelElement& x) const {
  if (embedded()) {
    if (x.dim() != dim()) throw ShapeError("norm: element dimension does not match space");
    const bool whole = components_.size() == 1 && static_cast<int>(components_[0].rows.size()) == def_.p &&
                       static_cast<int>(components_[0].cols.size()) == def_.q;
    return whole ? op_norm(realize(x)) : component_norm(x);
  }
  if (x.rows() != 1 || x.cols() != 1) {
    throw UnsupportedLevel("norm: level1-oracle space only provides the 1×1 norm");
  }
  return norm(CVec(x.cell(0, 0)));
}

double SpaceRep::norm(const CVec& coeffs) const {
  if (embedded()) return norm(LevelElement(1, 1, dim(), coeffs));
  const CMat m = realize(coeffs);
  switch (*def_.level1_oracle) {
    case Level1Oracle::TraceNorm:
      return trace_norm(m);
  }
  throw InvalidInput("norm: unknown level-1 oracle");
}

CVec SpaceRep::coefficients_of(const CMat& m) const {
  if (m.rows() != def_.p || m.cols() != def_.q) throw ShapeError("coefficients_of: matrix is not p×q");
  const Eigen::Index pq = static_cast<Eigen::Index>(def_.p) * def_.q;
  const CMat dense = m;  // contiguous column-major copy
  return qr_.solve(Eigen::Map<const CVec>(dense.data(), pq));
}

CMat SpaceRep::project(const CMat& m) const { return realize(coefficients_of(m)); }

double SpaceRep::membership_residual(const CMat& m) const {
  if (!all_finite(m)) throw InvalidInput("membership_residual: matrix is not finite");
  return op_norm(m - project(m));
}

CVec SpaceRep::apply_involution(const CVec& coeffs) const {
  if (!def_.involution) throw InvalidInput("apply_involution: space has no involution");
  return *def_.involution * coeffs.conjugate();
}

LevelElement SpaceRep::apply_involution(const LevelElement& x) const {
  if (!def_.involution) throw InvalidInput("apply_involution: space has no involution");
  LevelElement out(x.cols(), x.rows(), x.dim());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) out.cell(j, i) = *def_.involution * x.cell(i, j).conjugate();
  return out;
}

LevelElement SpaceRep::project_to_ball(const LevelElement& x, double radius) const {
  if (!(radius > 0.0)) throw InvalidInput("project_to_ball: radius must be positive");
  const double n = norm(x);
  if (n <= radius) return x;
  return x.scaled(radius / n);
}

LevelElement SpaceRep::amplify(const CVec& v, int n) const {
  if (v.size() != dim()) throw ShapeError("amplify: coefficient vector has wrong length");
  LevelElement out = LevelElement::square(n, dim());
  for (int i = 0; i < n; ++i) out.cell(i, i) = v;
  return out;
}

}  // namespace opmetric
