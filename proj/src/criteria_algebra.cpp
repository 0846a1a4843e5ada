#include <algorithm>
#include <cmath>

#include "criteria_internal.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/gadgets.hpp"

namespace opmetric::criteria {

using namespace detail;

std::string to_string(MultiplierSide side) {
  switch (side) {
    case MultiplierSide::Left: return "left";
    case MultiplierSide::Right: return "right";
    case MultiplierSide::Quasi: return "quasi";
  }
  return "left";
}

MultiplierSide multiplier_side_from_string(const std::string& s) {
  if (s == "left") return MultiplierSide::Left;
  if (s == "right") return MultiplierSide::Right;
  if (s == "quasi") return MultiplierSide::Quasi;
  throw InvalidInput("unknown multiplier side '" + s + "' (expected left, right or quasi)");
}

double left_multiplier_excess(const SpaceRep& space, const CMat& map, const LevelElement& stacked) {
  const int k = space.dim();
  if (map.rows() != k || map.cols() != k) throw ShapeError("left multiplier map must be k×k");
  if (stacked.rows() % 2 != 0) throw ShapeError("stacked element must have an even number of block rows");
  LevelElement mapped = stacked;
  const int top = stacked.rows() / 2;
  for (int i = 0; i < top; ++i)
    for (int j = 0; j < stacked.cols(); ++j) mapped.cell(i, j) = map * stacked.cell(i, j);
  return space.norm(mapped) - space.norm(stacked);
}

namespace {

void require_square_embedded(const SpaceRep& a, const char* who) {
  if (!a.embedded()) throw InvalidInput(std::string(who) + ": needs an embedded space");
  if (a.p() != a.q()) throw ShapeError(std::string(who) + ": ambient must be square");
}

CVec basis_vector(int k, int i) {
  CVec e = CVec::Zero(k);
  e(i) = 1.0;
  return e;
}

// b = √(N·1 − xxᴴ − zzᴴ) with N = ‖xxᴴ + zzᴴ‖, the choice made in the equality proof.
CMat proof_b(const CMat& x, const CMat& z) {
  const CMat h = x * x.adjoint() + z * z.adjoint();
  const double n = op_norm(h);
  return psd_sqrt(n * CMat::Identity(h.rows(), h.cols()) - h);
}

// ‖[[0, y, 1, 0], [2, x, z, b]]‖ − ‖[2, x, z, b]‖ maximized over the proof's b and
// `samples` random contractions b.
double mult_gap(const CMat& x, const CMat& y, const CMat& z, int samples, RngStream& rng) {
  auto gap = [&](const CMat& b) {
    const gadgets::MultRow m = gadgets::build_mult_row(x, y, z, b);
    return op_norm(m.full) - op_norm(m.row);
  };
  double worst = gap(proof_b(x, z));
  const int d = static_cast<int>(x.rows());
  for (int s = 0; s < samples; ++s) {
    worst = std::max(worst, gap(rand_cmat_with_norm(d, d, rng.uniform(), rng)));
  }
  return worst;
}

CMat normalized(const CMat& m) {
  const double n = op_norm(m);
  return n > 0.0 ? CMat(m / n) : m;
}

CMat random_element(const SpaceRep& a, RngStream& rng) {
  CVec c(a.dim());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.complex_normal();
  return normalized(a.realize(c));
}

constexpr int kRandomPairs = 8;

}  // namespace

CheckReport check_mult_closed(const SpaceRep& algebra, const SearchConfig& cfg) {
  require_square_embedded(algebra, "mult-closed");
  cfg.validate(algebra.p(), algebra.q());
  const int k = algebra.dim();
  const auto& basis = algebra.basis();
  CheckReport report;
  report.criterion = "mult-closed";
  report.config = cfg;
  report.levels_checked = {1};

  // Algebraic path: residual of Bᵢ·Bⱼ.
  double alg_worst = 0.0;
  int alg_i = 0, alg_j = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double r = algebra.membership_residual(normalized(basis[i]) * normalized(basis[j]));
      ++report.samples;
      if (r > alg_worst) {
        alg_worst = r;
        alg_i = i;
        alg_j = j;
      }
    }
  }

  // Metric path: x ∈ A, y ∈ A* so x·yᴴ ∈ A·A, with z = −P_A(x·yᴴ).
  RngStream rng(derive_seed(cfg.seed, salt_of("mult-closed")), 0);
  double met_worst = -std::numeric_limits<double>::infinity();
  int met_pair = -1;
  auto metric_pair = [&](const CMat& x, const CMat& yh, int index) {
    const CMat z = -algebra.project(x * yh);
    const double g = mult_gap(x, yh.adjoint(), z, cfg.b_samples, rng);
    report.samples += 1 + cfg.b_samples;
    if (g > met_worst) {
      met_worst = g;
      met_pair = index;
    }
  };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) metric_pair(normalized(basis[i]), normalized(basis[j]), i * k + j);
  for (int r = 0; r < kRandomPairs; ++r) {
    const CMat x = random_element(algebra, rng);
    const CMat yh = random_element(algebra, rng);
    metric_pair(x, yh, k * k + r);
  }

  const Verdict alg_verdict = verdict_for(alg_worst, cfg.tolerance, 1);
  const Verdict met_verdict = verdict_for(met_worst, cfg.tolerance, 1);
  report.subchecks = {{"algebraic", alg_verdict, -alg_worst}, {"metric", met_verdict, -met_worst}};
  report.cross_validation_agree = alg_verdict == met_verdict;

  Witness w;
  if (alg_verdict == Verdict::Violated || met_verdict != Verdict::Violated) {
    report.margin = -alg_worst;
    w.operands["x"] = basis_vector(k, alg_i);
    w.operands["y_adjoint"] = basis_vector(k, alg_j);
    w.aux["i"] = alg_i;
    w.aux["j"] = alg_j;
    w.aux["residual"] = alg_worst;
  } else {
    report.margin = -met_worst;
    w.aux["pair"] = met_pair;
    w.aux["gap"] = met_worst;
  }
  report.verdict = (alg_verdict == Verdict::Violated || met_verdict == Verdict::Violated)
                       ? Verdict::Violated
                       : Verdict::HoldsWithinBudget;
  if (report.verdict == Verdict::Violated) report.witness = std::move(w);
  return report;
}

namespace {

// Right multipliers of A inside the ambient: {b : A·b ⊆ A}, as an orthonormal
// basis of vec(b).
CMat right_multiplier_basis(const SpaceRep& a) {
  const int d = a.p();
  const int dd = d * d;
  CMat constraint(static_cast<Eigen::Index>(a.dim()) * dd, dd);
  for (int col = 0; col < dd; ++col) {
    CMat e = CMat::Zero(d, d);
    e(col / d, col % d) = 1.0;
    for (int i = 0; i < a.dim(); ++i) {
      const CMat prod = a.basis()[i] * e;
      const CMat off = prod - a.project(prod);
      for (int r = 0; r < dd; ++r) constraint(static_cast<Eigen::Index>(i) * dd + r, col) = off(r / d, r % d);
    }
  }
  Eigen::JacobiSVD<CMat> svd(constraint, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  const double cut = kStructureTolerance * std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(dd - rank);
}

CMat project_onto(const CMat& orthonormal_vecs, const CMat& m) {
  const int d = static_cast<int>(m.rows());
  CVec v(m.size());
  for (int r = 0; r < m.size(); ++r) v(r) = m(r / d, r % d);
  const CVec pv = orthonormal_vecs * (orthonormal_vecs.adjoint() * v);
  CMat out(d, d);
  for (int r = 0; r < m.size(); ++r) out(r / d, r % d) = pv(r);
  return out;
}

}  // namespace

CheckReport check_multiplier(const SpaceRep& algebra, const CMat& w, MultiplierSide side, const SearchConfig& cfg) {
  if (!algebra.embedded()) throw InvalidInput("multiplier: needs an embedded space");
  cfg.validate(algebra.p(), algebra.q());
  const int p = algebra.p(), q = algebra.q(), k = algebra.dim();
  const bool shape_ok = side == MultiplierSide::Left    ? (w.rows() == p && w.cols() == p)
                        : side == MultiplierSide::Right ? (w.rows() == q && w.cols() == q)
                                                        : (w.rows() == q && w.cols() == p);
  if (!shape_ok) throw ShapeError("multiplier: w has the wrong shape for side " + to_string(side));
  if (!all_finite(w)) throw InvalidInput("multiplier: w is not finite");

  CheckReport report;
  report.criterion = "multiplier";
  report.config = cfg;
  report.levels_checked = {1};
  const auto& basis = algebra.basis();

  double alg_worst = 0.0;
  int wi = 0, wj = 0;
  auto consider = [&](const CMat& m, int i, int j) {
    const double r = algebra.membership_residual(m);
    ++report.samples;
    if (r > alg_worst) {
      alg_worst = r;
      wi = i;
      wj = j;
    }
  };
  for (int i = 0; i < k; ++i) {
    const CMat bi = normalized(basis[i]);
    if (side == MultiplierSide::Left) consider(w * bi, i, -1);
    if (side == MultiplierSide::Right) consider(bi * w, i, -1);
    if (side == MultiplierSide::Quasi)
      for (int j = 0; j < k; ++j) consider(bi * w * normalized(basis[j]), i, j);
  }
  const Verdict alg_verdict = verdict_for(alg_worst, cfg.tolerance, 1);
  report.subchecks.push_back({"algebraic", alg_verdict, -alg_worst});

  // Metric cross-check through the four-block equality; needs a square ambient.
  if (p == q) {
    RngStream rng(derive_seed(cfg.seed, salt_of("multiplier", static_cast<std::uint64_t>(side))), 0);
    double met_worst = -std::numeric_limits<double>::infinity();
    const CMat r_basis = side == MultiplierSide::Quasi ? right_multiplier_basis(algebra) : CMat();
    for (int j = 0; j < k; ++j) {
      const CMat bj = normalized(basis[j]);
      CMat x, yh, z;
      if (side == MultiplierSide::Left) {
        x = w;
        yh = bj;
        z = -algebra.project(x * yh);
      } else if (side == MultiplierSide::Right) {
        x = bj;
        yh = w / std::max(1.0, op_norm(w));
        z = -algebra.project(x * yh);
      } else {
        x = w;
        yh = bj;
        z = -project_onto(r_basis, x * yh);
      }
      met_worst = std::max(met_worst, mult_gap(x, yh.adjoint(), z, cfg.b_samples, rng));
      report.samples += 1 + cfg.b_samples;
    }
    const Verdict met_verdict = verdict_for(met_worst, cfg.tolerance, 1);
    report.subchecks.push_back({"metric", met_verdict, -met_worst});
    report.cross_validation_agree = met_verdict == alg_verdict;
  }

  report.verdict = alg_verdict;
  report.margin = -alg_worst;
  if (alg_verdict == Verdict::Violated) {
    Witness wit;
    wit.operands["x"] = basis_vector(k, wi);
    wit.aux["i"] = wi;
    if (wj >= 0) {
      wit.operands["y"] = basis_vector(k, wj);
      wit.aux["j"] = wj;
    }
    wit.aux["residual"] = alg_worst;
    report.witness = std::move(wit);
  }
  return report;
}

CheckReport check_left_multiplier_map(const SpaceRep& space, const CMat& map, const SearchConfig& cfg) {
  const int k = space.dim();
  if (map.rows() != k || map.cols() != k) throw ShapeError("left-multiplier-map: map must be k×k");
  if (!all_finite(map)) throw InvalidInput("left-multiplier-map: map is not finite");
  if (!space.embedded()) {
    return unsupported("left-multiplier-map", cfg, "stacked columns need matrix-level norms; the space only has a level-1 oracle");
  }
  cfg.validate(space.p(), space.q());
  CheckReport report;
  report.criterion = "left-multiplier-map";
  report.config = cfg;

  // The inequality is homogeneous, so the unit ball is enough.
  const Objective objective = [&](const LevelElement& s) { return left_multiplier_excess(space, map, s); };
  double best = -std::numeric_limits<double>::infinity();
  LevelElement best_point;
  for (int n = 1; n <= cfg.max_level; ++n) {
    report.levels_checked.push_back(n);
    if (cfg.restarts == 0) continue;
    const SearchResult r =
        maximize_violation(objective, space, SearchDomain{2 * n, n, 1.0, salt_of("left-multiplier-map", n)}, cfg);
    report.samples += r.evaluations;
    if (r.found() && r.best_value > best) {
      best = r.best_value;
      best_point = r.best_point;
    }
  }
  if (best_point.dim() > 0 && best > cfg.tolerance) {
    const SearchResult polished = refine_witness(objective, space, best_point, 1.0, cfg);
    report.samples += polished.evaluations;
    if (polished.found() && polished.best_value > best) {
      best = polished.best_value;
      best_point = polished.best_point;
    }
  }
  const bool searched = best_point.dim() > 0;
  report.verdict = verdict_for(best, cfg.tolerance, searched ? report.samples : 0);
  report.margin = searched ? -best : 0.0;
  if (report.verdict == Verdict::Violated) {
    Witness w;
    w.point = best_point;
    w.aux["value"] = best;
    report.witness = std::move(w);
  }
  return report;
}

StructureTensor ambient_product_tensor(const SpaceRep& space) {
  require_square_embedded(space, "ambient_product_tensor");
  const int k = space.dim();
  StructureTensor t(k, CMat::Zero(k, k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) t[i].col(j) = space.coefficients_of(space.basis()[i] * space.basis()[j]);
  return t;
}

namespace {

CMat left_map(const StructureTensor& t, const CVec& x) {
  CMat m = CMat::Zero(t[0].rows(), t[0].cols());
  for (std::size_t i = 0; i < t.size(); ++i) m += x(static_cast<Eigen::Index>(i)) * t[i];
  return m;
}

constexpr int kRandomProductSamples = 2;

}  // namespace

CheckReport check_algebra_product(const SpaceRep& space, const CVec& u, const StructureTensor& tensor,
                                  const SearchConfig& cfg) {
  const int k = space.dim();
  if (static_cast<int>(tensor.size()) != k) throw ShapeError("algebra-product: tensor must have k slices");
  for (const CMat& s : tensor) {
    if (s.rows() != k || s.cols() != k) throw ShapeError("algebra-product: tensor slices must be k×k");
    if (!all_finite(s)) throw InvalidInput("algebra-product: tensor is not finite");
  }
  require_unit_vector(space, u, "algebra-product");
  if (!space.embedded()) {
    return unsupported("algebra-product", cfg, "multiplier checks need matrix-level norms; the space only has a level-1 oracle");
  }
  cfg.validate(space.p(), space.q());

  CheckReport report;
  report.criterion = "algebra-product";
  report.config = cfg;

  // (i) u is a coisometry.
  const CheckReport co = check_coisometry(space, u, cfg);
  report.samples += co.samples;
  report.levels_checked = co.levels_checked;
  report.subchecks.push_back({"coisometry", co.verdict, co.margin});

  // (ii) y ↦ m(x, y) is a contractive left multiplier once scaled by 1/‖m(x, u)‖.
  SearchConfig sub = cfg;
  sub.restarts = cfg.restarts == 0 ? 0 : std::max(4, cfg.restarts / 8);
  std::vector<CVec> xs;
  for (int i = 0; i < k; ++i) xs.push_back(basis_vector(k, i));
  RngStream rng(derive_seed(cfg.seed, salt_of("algebra-product")), 0);
  for (int r = 0; r < kRandomProductSamples; ++r) {
    CVec c(k);
    for (int i = 0; i < k; ++i) c(i) = rng.complex_normal();
    xs.push_back(c);
  }
  double lm_margin = std::numeric_limits<double>::infinity();
  Verdict lm_verdict = Verdict::HoldsWithinBudget;
  std::optional<Witness> lm_witness;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    const CMat t = left_map(tensor, xs[s]);
    const double scale = space.norm(CVec(t * u));
    if (!(scale > kStructureTolerance)) continue;
    sub.seed = derive_seed(cfg.seed, s);
    const CheckReport lm = check_left_multiplier_map(space, t / scale, sub);
    report.samples += lm.samples;
    if (lm.margin < lm_margin) lm_margin = lm.margin;
    if (lm.verdict == Verdict::Violated && lm_verdict != Verdict::Violated) {
      lm_verdict = Verdict::Violated;
      lm_witness = lm.witness;
      if (lm_witness) lm_witness->operands["x"] = xs[s];
    } else if (lm.verdict == Verdict::Inconclusive && lm_verdict == Verdict::HoldsWithinBudget) {
      lm_verdict = Verdict::Inconclusive;
    }
  }
  if (!std::isfinite(lm_margin)) lm_margin = 0.0;
  report.subchecks.push_back({"left-multiplier", lm_verdict, lm_margin});

  // (iii) m(Bᵢ, u) = Bᵢ.
  double unit_resid = 0.0;
  int unit_i = 0;
  for (int i = 0; i < k; ++i) {
    const double bn = op_norm(space.basis()[i]);
    const double r = op_norm(space.realize(CVec(tensor[i] * u)) - space.basis()[i]) / bn;
    if (r > unit_resid) {
      unit_resid = r;
      unit_i = i;
    }
  }
  report.samples += k;
  const Verdict unit_verdict = verdict_for(unit_resid, cfg.tolerance, 1);
  report.subchecks.push_back({"unit-action", unit_verdict, -unit_resid});

  report.margin = std::min({co.margin, lm_margin, -unit_resid});
  if (co.verdict == Verdict::Violated) {
    report.verdict = Verdict::Violated;
    report.witness = co.witness;
    report.qualifier = "failing sub-check: coisometry";
  } else if (lm_verdict == Verdict::Violated) {
    report.verdict = Verdict::Violated;
    report.witness = lm_witness;
    report.qualifier = "failing sub-check: left-multiplier";
  } else if (unit_verdict == Verdict::Violated) {
    report.verdict = Verdict::Violated;
    Witness w;
    w.operands["x"] = basis_vector(k, unit_i);
    w.aux["i"] = unit_i;
    w.aux["residual"] = unit_resid;
    report.witness = std::move(w);
    report.qualifier = "failing sub-check: unit-action";
  } else if (co.verdict == Verdict::HoldsWithinBudget && lm_verdict == Verdict::HoldsWithinBudget) {
    report.verdict = Verdict::HoldsWithinBudget;
  } else {
    report.verdict = Verdict::Inconclusive;
  }
  return report;
}

CheckReport check_cstar_among_systems(const SpaceRep& algebra, const SearchConfig& cfg, const CstarSampling& sampling) {
  require_square_embedded(algebra, "cstar-among-systems");
  if (!algebra.involution()) throw InvalidInput("cstar-among-systems: the space has no involution");
  if (!algebra.unit()) throw InvalidInput("cstar-among-systems: the space has no unit");
  cfg.validate(algebra.p(), algebra.q());
  if (sampling.pairs < 0 || sampling.w_samples < 0) throw InvalidInput("cstar-among-systems: negative sample counts");
  const int d = algebra.p();
  if (sampling.z_shift && (sampling.z_shift->rows() != d || sampling.z_shift->cols() != d)) {
    throw ShapeError("cstar-among-systems: z shift must be d×d");
  }
  const CMat one = algebra.realize(*algebra.unit());
  if ((one - one.adjoint()).norm() > kStructureTolerance) {
    throw InvalidInput("cstar-among-systems: unit is not self-adjoint");
  }

  CheckReport report;
  report.criterion = "cstar-among-systems";
  report.config = cfg;
  for (int m = 1; m <= cfg.max_level; ++m) report.levels_checked.push_back(m);

  RngStream rng(derive_seed(cfg.seed, salt_of("cstar-among-systems")), 0);
  const double root2 = std::sqrt(2.0);
  double worst = -std::numeric_limits<double>::infinity();
  Witness worst_w;
  for (int pair = 0; pair < sampling.pairs; ++pair) {
    const CMat x = random_element(algebra, rng) * rng.uniform();
    const CMat y = random_element(algebra, rng) * rng.uniform();
    CMat z = -algebra.project(x * y.adjoint());
    if (sampling.z_shift) z += *sampling.z_shift;
    const CMat h = x * x.adjoint() + y * y.adjoint() + z * z.adjoint();
    const double n = op_norm(h);
    const CMat b = psd_sqrt(n * one - h);
    for (gadgets::Sign sign : {gadgets::Sign::Plus, gadgets::Sign::Minus}) {
      const CMat mpm = gadgets::build_M_pm(x, y, z, b, one, sign);
      for (int m = 1; m <= cfg.max_level; ++m) {
        const CMat amp = scalar_amplify(mpm, m);
        for (int s = 0; s < sampling.w_samples; ++s) {
          LevelElement w(2 * m, 2 * m, algebra.dim());
          for (Eigen::Index i = 0; i < w.coeffs().size(); ++i) w.coeffs()(i) = rng.complex_normal();
          w = w.scaled(1.0 / algebra.norm(w));
          CMat joined(amp.rows(), amp.cols() + static_cast<Eigen::Index>(d) * 2 * m);
          joined << amp, algebra.realize(w);
          const double dev = std::abs(op_norm(joined) - root2);
          ++report.samples;
          if (dev > worst) {
            worst = dev;
            worst_w = Witness{};
            worst_w.point = w;
            worst_w.operands["x"] = algebra.coefficients_of(x);
            worst_w.operands["y"] = algebra.coefficients_of(y);
            worst_w.aux["pair"] = pair;
            worst_w.aux["sign"] = sign == gadgets::Sign::Plus ? 1.0 : -1.0;
            worst_w.aux["m"] = m;
            worst_w.aux["deviation"] = dev;
          }
        }
      }
    }
  }
  report.verdict = verdict_for(worst, cfg.tolerance, report.samples);
  report.margin = report.samples ? -worst : 0.0;
  if (report.verdict == Verdict::Violated) report.witness = std::move(worst_w);
  return report;
}

}  // namespace opmetric::criteria
