#pragma once

#include <string>
#include <utility>

#include "opmetric/opspace.hpp"

namespace opmetric {

enum class GadgetKind {
  TGadget,
  SGadget,
  RGadget,
  Row,
  Column,
  FourRotation,
  UeSpace,
  MPlus,
  MMinus,
  MultRow,
  AdjointBlock,
};

std::string to_string(GadgetKind kind);

namespace gadgets {

// Grid forms of the gadgets below, as elements of M_{2n}(X) or M_{k×(k+m)}(X).
// Measuring them with space.norm skips the dense realization where the basis splits.
LevelElement t_grid(const SpaceRep& space, const CVec& v, const LevelElement& x);
LevelElement s_grid(const SpaceRep& space, const CVec& v, const LevelElement& x);
LevelElement r_grid(const SpaceRep& space, const CVec& v, const LevelElement& x);
LevelElement row_grid(const CVec& u, const LevelElement& x);
LevelElement column_grid(const CVec& u, const LevelElement& x);

/// [[v_n, x], [0, v_n]] where n is the level of x.
CMat build_t(const SpaceRep& space, const CVec& v, const LevelElement& x);

/// [[v_n, x], [x*, v_n]]; x* uses the space's involution.
CMat build_s(const SpaceRep& space, const CVec& v, const LevelElement& x);

/// [[v_n, x], [-x*, v_n]].
CMat build_r(const SpaceRep& space, const CVec& v, const LevelElement& x);

/// [u_k  x] for x with k block rows and any number of block columns.
CMat build_row(const SpaceRep& space, const CVec& u, const LevelElement& x);

/// [u_k ; x] for x with k block columns.
CMat build_column(const SpaceRep& space, const CVec& u, const LevelElement& x);

/// v_n + i^k x as an element of M_n(X), so it can be measured in either norm mode.
LevelElement build_four_rotation(const SpaceRep& space, const CVec& v, const LevelElement& x, int k);

/// The space of [[λe, x], [0, λe]] inside M_{2p×2q}, with unit e ⊗ I₂.
SpaceRep build_Ue(const SpaceRep& space, const CVec& e);

enum class Sign { Plus, Minus };

/// Normalized 2×6 block row
///   [ y 0 1  x  b z ]
///   [ x b z ±y  0 ±1 ] / ‖·‖
/// with 1 the d×d identity. Throws NumericalError when the unnormalized norm is 0.
CMat build_M_pm(const CMat& x, const CMat& y, const CMat& z, const CMat& b, Sign sign);

/// Same block pattern with an explicit identity element `one` (the unit of the ambient algebra).
CMat build_M_pm(const CMat& x, const CMat& y, const CMat& z, const CMat& b, const CMat& one, Sign sign);

struct MultRow {
  CMat full;  // [[0, y, 1, 0], [2·1, x, z, b]]
  CMat row;   // [2·1, x, z, b]
};

MultRow build_mult_row(const CMat& x, const CMat& y, const CMat& z, const CMat& b);

/// [[t·1, x], [-z, t·1]].
CMat build_adjoint_block(const CMat& x, const CMat& z, double t);

}  // namespace gadgets
}  // namespace opmetric
