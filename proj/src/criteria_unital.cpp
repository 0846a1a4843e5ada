#include <algorithm>
#include <cmath>

#include "criteria_internal.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/gadgets.hpp"

namespace opmetric::criteria {

using namespace detail;

double four_rotation_violation_scaled(const SpaceRep& space, const CVec& u, const LevelElement& x, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("four_rotation_violation: lambda must be positive");
  const double nx = space.norm(x);
  const CVec lu = lambda * u;
  double best = 0.0;
  for (int k = 0; k < 4; ++k) best = std::max(best, space.norm(gadgets::build_four_rotation(space, lu, x, k)));
  return std::sqrt(lambda * lambda + lambda * nx) - best;
}

double four_rotation_violation(const SpaceRep& space, const CVec& u, const LevelElement& x) {
  return four_rotation_violation_scaled(space, u, x, 1.0);
}

double t_gadget_violation_scaled(const SpaceRep& space, const CVec& v, const LevelElement& x, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("t_gadget_violation: lambda must be positive");
  const double nx = space.norm(x);
  return std::sqrt(lambda * lambda + lambda * nx) - space.norm(gadgets::t_grid(space, lambda * v, x));
}

double t_gadget_violation(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  return t_gadget_violation_scaled(space, v, x, 1.0);
}

namespace {

LevelElement normalized(const SpaceRep& space, const LevelElement& x, double& norm_out) {
  norm_out = space.norm(x);
  return norm_out > 0.0 ? x.scaled(1.0 / norm_out) : x;
}

}  // namespace

double row_deviation(const SpaceRep& space, const CVec& u, const LevelElement& x) {
  double nx = 0.0;
  const LevelElement xh = normalized(space, x, nx);
  if (!(nx > 0.0)) return 0.0;
  return std::abs(space.norm(gadgets::row_grid(u, xh)) - std::sqrt(2.0));
}

double column_deviation(const SpaceRep& space, const CVec& u, const LevelElement& x) {
  double nx = 0.0;
  const LevelElement xh = normalized(space, x, nx);
  if (!(nx > 0.0)) return 0.0;
  return std::abs(space.norm(gadgets::column_grid(u, xh)) - std::sqrt(2.0));
}

CheckReport check_unitary_four_rotation(const SpaceRep& space, const CVec& u, const SearchConfig& cfg) {
  require_unit_vector(space, u, "unitary-four-rotation");
  return run_search("unitary-four-rotation", space, cfg, search_levels(space, cfg), small_norm_sweep(cfg),
                    [&](int) -> Objective {
                      return [&](const LevelElement& x) { return four_rotation_violation(space, u, x); };
                    });
}

CheckReport check_unitary_t_gadget(const SpaceRep& space, const CVec& v, const SearchConfig& cfg) {
  if (!space.embedded()) {
    return unsupported("unitary-t-gadget", cfg, "t-gadget needs level-2 norms; the space only has a level-1 oracle");
  }
  require_unit_vector(space, v, "unitary-t-gadget");
  return run_search("unitary-t-gadget", space, cfg, search_levels(space, cfg), small_norm_sweep(cfg),
                    [&](int) -> Objective {
                      return [&](const LevelElement& x) { return t_gadget_violation(space, v, x); };
                    });
}

namespace {

// Norm-one x only: the objective normalizes, so a unit ball search covers the sphere.
CheckReport check_sqrt2(const char* id, const SpaceRep& space, const CVec& u, const SearchConfig& cfg,
                        double (*deviation)(const SpaceRep&, const CVec&, const LevelElement&)) {
  if (!space.embedded()) {
    return unsupported(id, cfg, "row and column gadgets need matrix-level norms; the space only has a level-1 oracle");
  }
  require_unit_vector(space, u, id);
  CheckReport r = run_search(id, space, cfg, search_levels(space, cfg), {1.0}, [&](int) -> Objective {
    return [&, deviation](const LevelElement& x) { return deviation(space, u, x); };
  });
  if (r.witness && r.witness->point) {
    double n = 0.0;
    r.witness->point = normalized(space, *r.witness->point, n);
    r.witness->aux["norm"] = 1.0;
  }
  return r;
}

}  // namespace

CheckReport check_coisometry(const SpaceRep& space, const CVec& u, const SearchConfig& cfg) {
  return check_sqrt2("coisometry", space, u, cfg, &row_deviation);
}

CheckReport check_isometry(const SpaceRep& space, const CVec& u, const SearchConfig& cfg) {
  return check_sqrt2("isometry", space, u, cfg, &column_deviation);
}

}  // namespace opmetric::criteria
