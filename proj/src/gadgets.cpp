#include "opmetric/gadgets.hpp"

#include "opmetric/errors.hpp"

namespace opmetric {

std::string to_string(GadgetKind kind) {
  switch (kind) {
    case GadgetKind::TGadget:
      return "T_GADGET";
    case GadgetKind::SGadget:
      return "S_GADGET";
    case GadgetKind::RGadget:
      return "R_GADGET";
    case GadgetKind::Row:
      return "ROW";
    case GadgetKind::Column:
      return "COLUMN";
    case GadgetKind::FourRotation:
      return "FOUR_ROTATION";
    case GadgetKind::UeSpace:
      return "UE_SPACE";
    case GadgetKind::MPlus:
      return "M_PLUS";
    case GadgetKind::MMinus:
      return "M_MINUS";
    case GadgetKind::MultRow:
      return "MULT_ROW";
    case GadgetKind::AdjointBlock:
      return "ADJOINT_BLOCK";
  }
  return "UNKNOWN";
}

namespace gadgets {

namespace {

void require_embedded(const SpaceRep& space, const char* who) {
  if (!space.embedded()) throw UnsupportedLevel(std::string(who) + ": needs an embedded space");
}

void require_square_grid(const LevelElement& x, const char* who) {
  if (!x.is_square()) throw ShapeError(std::string(who) + ": x must be a square grid");
}

LevelElement two_by_two(const CVec& v, const LevelElement& x, const LevelElement* lower, double lower_sign) {
  const int n = x.level();
  LevelElement out(2 * n, 2 * n, x.dim());
  for (int i = 0; i < n; ++i) {
    out.cell(i, i) = v;
    out.cell(n + i, n + i) = v;
    for (int j = 0; j < n; ++j) {
      out.cell(i, n + j) = x.cell(i, j);
      if (lower) out.cell(n + i, j) = lower_sign * lower->cell(i, j);
    }
  }
  return out;
}

void require_same_square(const CMat& a, const CMat& b, const char* who) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(who) + ": operands must be square of equal size");
  }
}

}  // namespace

LevelElement t_grid(const SpaceRep& /*space*/, const CVec& v, const LevelElement& x) {
  require_square_grid(x, "t_grid");
  return two_by_two(v, x, nullptr, 0.0);
}

LevelElement s_grid(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  require_square_grid(x, "s_grid");
  const LevelElement xs = space.apply_involution(x);
  return two_by_two(v, x, &xs, 1.0);
}

LevelElement r_grid(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  require_square_grid(x, "r_grid");
  const LevelElement xs = space.apply_involution(x);
  return two_by_two(v, x, &xs, -1.0);
}

LevelElement row_grid(const CVec& u, const LevelElement& x) {
  const int k = x.rows();
  LevelElement out(k, k + x.cols(), x.dim());
  for (int i = 0; i < k; ++i) {
    out.cell(i, i) = u;
    for (int j = 0; j < x.cols(); ++j) out.cell(i, k + j) = x.cell(i, j);
  }
  return out;
}

LevelElement column_grid(const CVec& u, const LevelElement& x) {
  const int k = x.cols();
  LevelElement out(k + x.rows(), k, x.dim());
  for (int j = 0; j < k; ++j) {
    out.cell(j, j) = u;
    for (int i = 0; i < x.rows(); ++i) out.cell(k + i, j) = x.cell(i, j);
  }
  return out;
}

CMat build_t(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  require_embedded(space, "build_t");
  return space.realize(t_grid(space, v, x));
}

CMat build_s(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  require_embedded(space, "build_s");
  return space.realize(s_grid(space, v, x));
}

CMat build_r(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  require_embedded(space, "build_r");
  return space.realize(r_grid(space, v, x));
}

CMat build_row(const SpaceRep& space, const CVec& u, const LevelElement& x) {
  require_embedded(space, "build_row");
  return space.realize(row_grid(u, x));
}

CMat build_column(const SpaceRep& space, const CVec& u, const LevelElement& x) {
  require_embedded(space, "build_column");
  return space.realize(column_grid(u, x));
}

LevelElement build_four_rotation(const SpaceRep& space, const CVec& v, const LevelElement& x, int k) {
  require_square_grid(x, "build_four_rotation");
  if (!space.embedded() && x.level() != 1) {
    throw UnsupportedLevel("build_four_rotation: level1-oracle space only supports level 1");
  }
  static const cplx kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  LevelElement out = space.amplify(v, x.level());
  out.coeffs() += kPowers[((k % 4) + 4) % 4] * x.coeffs();
  return out;
}

SpaceRep build_Ue(const SpaceRep& space, const CVec& e) {
  require_embedded(space, "build_Ue");
  const CMat em = space.realize(e);
  const CMat zero = CMat::Zero(space.p(), space.q());
  SpaceDefinition def;
  def.p = 2 * space.p();
  def.q = 2 * space.q();
  def.basis.push_back(block({{em, zero}, {zero, em}}));
  for (const CMat& b : space.basis()) def.basis.push_back(block({{zero, b}, {zero, zero}}));
  CVec unit = CVec::Zero(space.dim() + 1);
  unit(0) = 1.0;
  def.unit = unit;
  return SpaceRep::create(std::move(def));
}

CMat build_M_pm(const CMat& x, const CMat& y, const CMat& z, const CMat& b, Sign sign) {
  return build_M_pm(x, y, z, b, CMat::Identity(x.rows(), x.cols()), sign);
}

CMat build_M_pm(const CMat& x, const CMat& y, const CMat& z, const CMat& b, const CMat& one, Sign sign) {
  for (const CMat* m : {&y, &z, &b, &one}) {
    if (m->rows() != x.rows() || m->cols() != x.cols()) throw ShapeError("build_M_pm: operand shapes differ");
  }
  const CMat zero = CMat::Zero(x.rows(), x.cols());
  const double s = sign == Sign::Plus ? 1.0 : -1.0;
  const CMat raw = block({{y, zero, one, x, b, z}, {x, b, z, s * y, zero, s * one}});
  const double n = op_norm(raw);
  if (n == 0.0) throw NumericalError("build_M_pm: zero denominator");
  return raw / n;
}

MultRow build_mult_row(const CMat& x, const CMat& y, const CMat& z, const CMat& b) {
  for (const CMat* m : {&y, &z, &b}) {
    if (m->rows() != x.rows() || m->cols() != x.cols()) throw ShapeError("build_mult_row: operand shapes differ");
  }
  if (x.rows() != x.cols()) throw ShapeError("build_mult_row: operands must be square");
  const CMat one = CMat::Identity(x.rows(), x.cols());
  const CMat zero = CMat::Zero(x.rows(), x.cols());
  MultRow out;
  out.row = block({{2.0 * one, x, z, b}});
  out.full = block({{zero, y, one, zero}, {2.0 * one, x, z, b}});
  return out;
}

CMat build_adjoint_block(const CMat& x, const CMat& z, double t) {
  require_same_square(x, z, "build_adjoint_block");
  const CMat ti = t * CMat::Identity(x.rows(), x.cols());
  return block({{ti, x}, {-z, ti}});
}

}  // namespace gadgets
}  // namespace opmetric
