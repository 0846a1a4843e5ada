#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opmetric/opspace.hpp"
#include "opmetric/report.hpp"
#include "opmetric/witness.hpp"

namespace opmetric::criteria {

inline constexpr const char* kLevelOneQualifier = "level-1 necessary condition";

// ---------------------------------------------------------------------------
// Violation functionals. Positive values are violations; the checkers maximize
// these and the tests re-evaluate witnesses through them.

/// √(1+‖x‖) − max_k ‖u_n + iᵏx‖.
double four_rotation_violation(const SpaceRep& space, const CVec& u, const LevelElement& x);
/// Same inequality multiplied through by λ > 0: √(λ²+λ‖x‖) − max_k ‖λu_n + iᵏx‖.
double four_rotation_violation_scaled(const SpaceRep& space, const CVec& u, const LevelElement& x, double lambda);

/// √(1+‖x‖) − ‖t^v_x‖.
double t_gadget_violation(const SpaceRep& space, const CVec& v, const LevelElement& x);
double t_gadget_violation_scaled(const SpaceRep& space, const CVec& v, const LevelElement& x, double lambda);

/// |‖[u_n x̂]‖ − √2| with x̂ = x/‖x‖ (0 for x = 0).
double row_deviation(const SpaceRep& space, const CVec& u, const LevelElement& x);
/// |‖[u_n ; x̂]‖ − √2|.
double column_deviation(const SpaceRep& space, const CVec& u, const LevelElement& x);

/// |‖r^v_x‖ − √(1+‖x‖²)|.
double operator_system_deviation(const SpaceRep& space, const CVec& v, const LevelElement& x);
/// |‖s^v_x‖ − (1+‖x‖)|.
double s_gadget_deviation(const SpaceRep& space, const CVec& v, const LevelElement& x);

/// ‖[T(a); b]‖ − ‖[a; b]‖ for a stacked element whose top half is a and bottom half b.
double left_multiplier_excess(const SpaceRep& space, const CMat& map, const LevelElement& stacked);

/// ‖[[t·1, x], [−z, t·1]]‖ − √(1+t²).
double adjoint_excess(const CMat& x, const CMat& z, double t);

// ---------------------------------------------------------------------------
// Unital operator spaces, isometries, coisometries

/// max_k ‖u_n + iᵏx‖ ≥ √(1+‖x‖_n) over small x at every level.
CheckReport check_unitary_four_rotation(const SpaceRep& space, const CVec& u, const SearchConfig& cfg);

/// ‖t^v_x‖ ≥ √(1+‖x‖_n) over small x. Level1-oracle spaces get UNSUPPORTED_LEVEL.
CheckReport check_unitary_t_gadget(const SpaceRep& space, const CVec& v, const SearchConfig& cfg);

/// ‖[u_n x]‖² = 2 for every norm-one x.
CheckReport check_coisometry(const SpaceRep& space, const CVec& u, const SearchConfig& cfg);
/// ‖[u_n ; x]‖² = 2 for every norm-one x.
CheckReport check_isometry(const SpaceRep& space, const CVec& u, const SearchConfig& cfg);

// ---------------------------------------------------------------------------
// Operator systems, positivity, adjoints

/// ‖r^{v}_x‖ = √(1+‖x‖²) at every level. Needs an involution and v = v*.
CheckReport check_operator_system(const SpaceRep& space, const CVec& v, const SearchConfig& cfg);

/// Reports the largest |‖s^v_x‖ − (1+‖x‖)| found. Exploratory: the verdict is
/// always INCONCLUSIVE because this equality is only known to be necessary.
CheckReport check_s_gadget(const SpaceRep& space, const CVec& v, const SearchConfig& cfg);

/// ‖1 − zx‖ ≤ 1 on the circle |1 − z| = 1, with 1 the space's unit, or the
/// identity of a square ambient when the space has no unit.
CheckReport check_positive(const SpaceRep& space, const CVec& x, const SearchConfig& cfg);
/// Same test in M_d with the identity matrix as 1.
CheckReport check_positive(const CMat& x, const SearchConfig& cfg);

/// ‖[[t·1, x], [−z, t·1]]‖ ≤ √(1+t²) for t ∈ [−t_max, t_max].
CheckReport check_adjoint(const CMat& x, const CMat& z, const SearchConfig& cfg);

// ---------------------------------------------------------------------------
// Multiplication

/// A·A ⊆ A, decided by the membership oracle and cross-checked with the
/// four-block norm equality at z = −P_A(x·yᴴ).
CheckReport check_mult_closed(const SpaceRep& algebra, const SearchConfig& cfg);

enum class MultiplierSide { Left, Right, Quasi };
std::string to_string(MultiplierSide side);
MultiplierSide multiplier_side_from_string(const std::string& s);

/// w·A ⊆ A, A·w ⊆ A, or A·w·A ⊆ A.
CheckReport check_multiplier(const SpaceRep& algebra, const CMat& w, MultiplierSide side, const SearchConfig& cfg);

/// T in the unit ball of the left multipliers: ‖[T(a); b]‖ ≤ ‖[a; b]‖.
CheckReport check_left_multiplier_map(const SpaceRep& space, const CMat& map, const SearchConfig& cfg);

/// m(Bᵢ, Bⱼ) = Σ_l tensor[i](l, j) B_l.
using StructureTensor = std::vector<CMat>;

/// Structure tensor of the ambient matrix product restricted to the space (projected).
StructureTensor ambient_product_tensor(const SpaceRep& space);

/// Coisometry of u, contractive left multipliers m(x,·), and m(x,u) = x.
CheckReport check_algebra_product(const SpaceRep& space, const CVec& u, const StructureTensor& tensor,
                                  const SearchConfig& cfg);

struct CstarSampling {
  int pairs = 20;
  int w_samples = 16;
  /// Added to z = −x·yᴴ; used to demonstrate sensitivity.
  std::optional<CMat> z_shift;
};

/// ‖[M± ⊗ I_m, w]‖ = √2 for norm-one w, with z = −x·y* and b from the C*-identity.
CheckReport check_cstar_among_systems(const SpaceRep& algebra, const SearchConfig& cfg,
                                      const CstarSampling& sampling = {});

// ---------------------------------------------------------------------------
// Catalog used by the CLI, corpus and bindings

struct Operands {
  std::optional<CVec> unit;
  std::optional<CVec> x;
  std::optional<CVec> z;
  std::optional<CMat> w;
  MultiplierSide side = MultiplierSide::Left;
  std::optional<CMat> map;
  std::optional<StructureTensor> tensor;
};

const std::vector<std::string>& catalog();
bool is_known(const std::string& criterion);

/// Runs a criterion by id. Throws InvalidInput for unknown ids or missing operands.
CheckReport run_criterion(const std::string& criterion, const SpaceRep& space, const Operands& operands,
                          const SearchConfig& cfg);

}  // namespace opmetric::criteria
