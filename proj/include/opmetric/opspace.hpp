#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opmetric/matcore.hpp"

namespace opmetric {

enum class NormMode { Embedded, Level1Oracle };

/// Named level-1 norms available to level1-oracle spaces.
enum class Level1Oracle { TraceNorm };

std::string to_string(NormMode mode);
std::string to_string(Level1Oracle oracle);

/// An element of M_{r×c}(X): an r×c grid of coefficient vectors over the basis.
///
/// Square grids are the usual amplification levels; rectangular grids appear in
/// row/column gadgets and in stacked multiplier pairs.
class LevelElement {
 public:
  LevelElement() = default;
  LevelElement(int rows, int cols, int dim);
  LevelElement(int rows, int cols, int dim, CVec coeffs);

  static LevelElement square(int level, int dim) { return {level, level, dim}; }
  /// The 1×1 element with the given coefficients.
  static LevelElement single(const CVec& coeffs);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return dim_; }
  bool is_square() const { return rows_ == cols_; }
  /// Grid size for square elements; throws ShapeError otherwise.
  int level() const;

  const CVec& coeffs() const { return coeffs_; }
  CVec& coeffs() { return coeffs_; }

  Eigen::Ref<CVec> cell(int i, int j) { return coeffs_.segment(offset(i, j), dim_); }
  Eigen::Ref<const CVec> cell(int i, int j) const { return coeffs_.segment(offset(i, j), dim_); }

  LevelElement scaled(cplx alpha) const;
  /// Zero-padded copy with an extra block row and column.
  LevelElement padded(int extra_rows, int extra_cols) const;

  bool operator==(const LevelElement& other) const = default;

 private:
  Eigen::Index offset(int i, int j) const { return (static_cast<Eigen::Index>(i) * cols_ + j) * dim_; }

  int rows_ = 0;
  int cols_ = 0;
  int dim_ = 0;
  CVec coeffs_;
};

/// Raw description of a space before validation.
struct SpaceDefinition {
  int p = 0;
  int q = 0;
  std::vector<CMat> basis;
  std::optional<CVec> unit;
  /// S with coefficients(x*) = S · conj(coefficients(x)).
  std::optional<CMat> involution;
  NormMode norm_mode = NormMode::Embedded;
  std::optional<Level1Oracle> level1_oracle;
};

inline constexpr double kDefaultRankTolerance = 1e-10;

/// A concrete operator space X ⊆ M_{p×q}(ℂ), immutable once created.
class SpaceRep {
 public:
  /// Validates every invariant; throws RankDeficient, InvalidInput or ShapeError.
  static SpaceRep create(SpaceDefinition def, double rank_tolerance = kDefaultRankTolerance);

  int p() const { return def_.p; }
  int q() const { return def_.q; }
  int dim() const { return static_cast<int>(def_.basis.size()); }
  const std::vector<CMat>& basis() const { return def_.basis; }
  const std::optional<CVec>& unit() const { return def_.unit; }
  const std::optional<CMat>& involution() const { return def_.involution; }
  NormMode norm_mode() const { return def_.norm_mode; }
  const std::optional<Level1Oracle>& level1_oracle() const { return def_.level1_oracle; }
  bool embedded() const { return def_.norm_mode == NormMode::Embedded; }
  const SpaceDefinition& definition() const { return def_; }

  /// Copy with a different distinguished element (validated like the original).
  SpaceRep with_unit(std::optional<CVec> unit) const;

  /// Σ cᵢBᵢ as a p×q matrix.
  CMat realize(const CVec& coeffs) const;
  /// The (p·rows)×(q·cols) matrix of a grid element.
  CMat realize(const LevelElement& x) const;

  /// ‖x‖ at its level. Level-1 oracle spaces only answer for 1×1 grids.
  double norm(const LevelElement& x) const;
  double norm(const CVec& coeffs) const;

  /// Least-squares coefficients of the Frobenius projection of m onto span(basis).
  CVec coefficients_of(const CMat& m) const;
  /// Projection of m onto span(basis), as a matrix.
  CMat project(const CMat& m) const;
  /// op_norm(m − projection(m)).
  double membership_residual(const CMat& m) const;

  /// Grid transpose with c ↦ S·conj(c) in every cell.
  LevelElement apply_involution(const LevelElement& x) const;
  CVec apply_involution(const CVec& coeffs) const;

  /// Rescales x by min(1, radius/‖x‖).
  LevelElement project_to_ball(const LevelElement& x, double radius) const;

  /// v ⊗ I_n as an n×n grid.
  LevelElement amplify(const CVec& v, int n) const;

 private:
  explicit SpaceRep(SpaceDefinition def);
  void split_support();
  double component_norm(const LevelElement& x) const;

  // Connected pieces of the joint support of the basis: every element is block
  // diagonal over them (up to a row/column permutation).
  struct Component {
    std::vector<int> rows;
    std::vector<int> cols;
    Eigen::Index offset = 0;  // first row of this piece inside support_columns_
  };

  SpaceDefinition def_;
  std::vector<Component> components_;
  CMat support_columns_;  // restrictions of basis_columns_ to each component, stacked
  double rank_tolerance_ = kDefaultRankTolerance;
  CMat basis_columns_;  // (p·q)×k, column i is vec(Bᵢ)
  Eigen::ColPivHouseholderQR<CMat> qr_;
};

}  // namespace opmetric
