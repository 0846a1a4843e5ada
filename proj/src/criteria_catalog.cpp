#include <algorithm>

#include "criteria_internal.hpp"
#include "opmetric/errors.hpp"

namespace opmetric::criteria {

const std::vector<std::string>& catalog() {
  static const std::vector<std::string> ids = {
      "unitary-four-rotation", "unitary-t-gadget", "coisometry",          "isometry",
      "operator-system",       "s-gadget",         "positive",            "adjoint",
      "mult-closed",           "multiplier",       "left-multiplier-map", "algebra-product",
      "cstar-among-systems",
  };
  return ids;
}

bool is_known(const std::string& criterion) {
  const auto& ids = catalog();
  return std::find(ids.begin(), ids.end(), criterion) != ids.end();
}

namespace {

CVec need_unit(const SpaceRep& space, const Operands& ops, const std::string& id) {
  if (ops.unit) return *ops.unit;
  if (space.unit()) return *space.unit();
  throw InvalidInput(id + ": no distinguished element (give a unit in the space file or --unit-index)");
}

template <class T>
const T& need(const std::optional<T>& v, const std::string& id, const char* what) {
  if (!v) throw InvalidInput(id + ": missing operand " + what);
  return *v;
}

}  // namespace

CheckReport run_criterion(const std::string& id, const SpaceRep& space, const Operands& ops, const SearchConfig& cfg) {
  if (!is_known(id)) throw InvalidInput("unknown criterion '" + id + "'");
  if (id == "unitary-four-rotation") return check_unitary_four_rotation(space, need_unit(space, ops, id), cfg);
  if (id == "unitary-t-gadget") return check_unitary_t_gadget(space, need_unit(space, ops, id), cfg);
  if (id == "coisometry") return check_coisometry(space, need_unit(space, ops, id), cfg);
  if (id == "isometry") return check_isometry(space, need_unit(space, ops, id), cfg);
  if (id == "operator-system") return check_operator_system(space, need_unit(space, ops, id), cfg);
  if (id == "s-gadget") return check_s_gadget(space, need_unit(space, ops, id), cfg);
  if (id == "positive") return check_positive(space, need(ops.x, id, "x"), cfg);
  if (id == "adjoint") {
    if (!space.embedded() || space.p() != space.q()) throw InvalidInput("adjoint: needs an embedded square space");
    return check_adjoint(space.realize(need(ops.x, id, "x")), space.realize(need(ops.z, id, "z")), cfg);
  }
  if (id == "mult-closed") return check_mult_closed(space, cfg);
  if (id == "multiplier") return check_multiplier(space, need(ops.w, id, "w"), ops.side, cfg);
  if (id == "left-multiplier-map") return check_left_multiplier_map(space, need(ops.map, id, "map"), cfg);
  if (id == "algebra-product") {
    const StructureTensor tensor = ops.tensor ? *ops.tensor : ambient_product_tensor(space);
    return check_algebra_product(space, need_unit(space, ops, id), tensor, cfg);
  }
  return check_cstar_among_systems(ops.unit ? space.with_unit(ops.unit) : space, cfg);
}

}  // namespace opmetric::criteria
