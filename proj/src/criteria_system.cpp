#include <algorithm>
#include <cmath>
#include <numbers>

#include "criteria_internal.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/gadgets.hpp"

namespace opmetric::criteria {

using namespace detail;

double operator_system_deviation(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  const double nx = space.norm(x);
  return std::abs(space.norm(gadgets::r_grid(space, v, x)) - std::sqrt(1.0 + nx * nx));
}

double s_gadget_deviation(const SpaceRep& space, const CVec& v, const LevelElement& x) {
  return std::abs(space.norm(gadgets::s_grid(space, v, x)) - (1.0 + space.norm(x)));
}

double adjoint_excess(const CMat& x, const CMat& z, double t) {
  return op_norm(gadgets::build_adjoint_block(x, z, t)) - std::sqrt(1.0 + t * t);
}

namespace {

void require_selfadjoint_unit(const SpaceRep& space, const CVec& v, const char* who) {
  if (!space.involution()) throw InvalidInput(std::string(who) + ": the space has no involution");
  require_unit_vector(space, v, who);
  const double asym = (space.apply_involution(v) - v).norm();
  if (asym > kStructureTolerance * std::max(1.0, v.norm())) {
    throw InvalidInput(std::string(who) + ": distinguished element is not self-adjoint");
  }
}

}  // namespace

CheckReport check_operator_system(const SpaceRep& space, const CVec& v, const SearchConfig& cfg) {
  if (!space.embedded()) {
    return unsupported("operator-system", cfg, "r-gadget needs level-2 norms; the space only has a level-1 oracle");
  }
  require_selfadjoint_unit(space, v, "operator-system");
  return run_search("operator-system", space, cfg, search_levels(space, cfg), small_norm_sweep(cfg),
                    [&](int) -> Objective {
                      return [&](const LevelElement& x) { return operator_system_deviation(space, v, x); };
                    });
}

CheckReport check_s_gadget(const SpaceRep& space, const CVec& v, const SearchConfig& cfg) {
  if (!space.embedded()) {
    return unsupported("s-gadget", cfg, "s-gadget needs level-2 norms; the space only has a level-1 oracle");
  }
  require_selfadjoint_unit(space, v, "s-gadget");
  CheckReport r = run_search("s-gadget", space, cfg, search_levels(space, cfg), small_norm_sweep(cfg),
                             [&](int) -> Objective {
                               return [&](const LevelElement& x) { return s_gadget_deviation(space, v, x); };
                             });
  r.verdict = Verdict::Inconclusive;
  r.qualifier = "exploratory: equality is only known to be necessary";
  return r;
}

namespace {

// Shared circle scan: max over θ of f(1 + e^{iθ}), then golden refinement in the
// bracket around the best sample.
CheckReport positive_scan(const std::function<double(cplx)>& norm_of, const CVec& x, const SearchConfig& cfg) {
  cfg.validate();
  CheckReport report;
  report.criterion = "positive";
  report.config = cfg;
  report.levels_checked = {1};

  const int samples = cfg.circle_samples;
  const double h = 2.0 * std::numbers::pi / samples;
  auto f = [&](double theta) { return norm_of(1.0 + std::polar(1.0, theta)); };
  double best_theta = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double theta = s * h;
    const double value = f(theta);
    if (value > best) {
      best = value;
      best_theta = theta;
    }
  }
  report.samples = samples;
  const GoldenMax refined = golden_max(f, best_theta - h, best_theta + h);
  report.samples += refined.evaluations;
  if (refined.value > best) {
    best = refined.value;
    best_theta = refined.arg;
  }
  const double excess = best - 1.0;
  report.verdict = verdict_for(excess, cfg.tolerance, report.samples);
  report.margin = -excess;
  if (report.verdict == Verdict::Violated) {
    const cplx z = 1.0 + std::polar(1.0, best_theta);
    Witness w;
    w.point = LevelElement::single(x);
    w.aux["theta"] = best_theta;
    w.aux["z_re"] = z.real();
    w.aux["z_im"] = z.imag();
    w.aux["value"] = best;
    report.witness = std::move(w);
  }
  return report;
}

}  // namespace

CheckReport check_positive(const SpaceRep& space, const CVec& x, const SearchConfig& cfg) {
  if (x.size() != space.dim()) throw ShapeError("positive: operand has wrong length");
  if (!x.allFinite()) throw InvalidInput("positive: operand is not finite");
  if (space.norm(x) > 1.0 + kStructureTolerance) throw InvalidInput("positive: operand must be contractive");
  std::function<double(cplx)> norm_of;
  if (space.unit()) {
    const CVec one = *space.unit();
    norm_of = [&space, one, x](cplx z) { return space.norm(CVec(one - z * x)); };
  } else if (space.embedded() && space.p() == space.q()) {
    const CMat xm = space.realize(x);
    const CMat id = CMat::Identity(space.p(), space.p());
    norm_of = [xm, id](cplx z) { return op_norm(id - z * xm); };
  } else {
    throw InvalidInput("positive: the space has no unit and no square ambient identity");
  }
  CheckReport r = positive_scan(norm_of, x, cfg);
  if (!space.embedded()) r.qualifier = kLevelOneQualifier;
  return r;
}

CheckReport check_positive(const CMat& x, const SearchConfig& cfg) {
  if (x.rows() != x.cols() || x.size() == 0) throw ShapeError("positive: operand must be square");
  if (!all_finite(x)) throw InvalidInput("positive: operand is not finite");
  if (op_norm(x) > 1.0 + kStructureTolerance) throw InvalidInput("positive: operand must be contractive");
  const CMat id = CMat::Identity(x.rows(), x.cols());
  CVec flat(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) flat(i * x.cols() + j) = x(i, j);
  return positive_scan([&](cplx z) { return op_norm(id - z * x); }, flat, cfg);
}

CheckReport check_adjoint(const CMat& x, const CMat& z, const SearchConfig& cfg) {
  cfg.validate();
  if (x.rows() != x.cols() || x.rows() != z.rows() || x.cols() != z.cols() || x.size() == 0) {
    throw ShapeError("adjoint: x and z must be square of the same size");
  }
  if (!all_finite(x) || !all_finite(z)) throw InvalidInput("adjoint: operands are not finite");
  if (op_norm(x) > 1.0 + kStructureTolerance || op_norm(z) > 1.0 + kStructureTolerance) {
    throw InvalidInput("adjoint: operands must be contractive");
  }
  CheckReport report;
  report.criterion = "adjoint";
  report.config = cfg;
  report.levels_checked = {1};

  const int half = static_cast<int>(std::ceil(cfg.t_max / 0.01));
  const double h = cfg.t_max / half;
  auto f = [&](double t) { return adjoint_excess(x, z, t); };
  double best = -std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  for (int s = -half; s <= half; ++s) {
    const double t = s * h;
    const double value = f(t);
    if (value > best) {
      best = value;
      best_t = t;
    }
  }
  report.samples = 2 * half + 1;
  const GoldenMax refined =
      golden_max(f, std::max(-cfg.t_max, best_t - h), std::min(cfg.t_max, best_t + h));
  report.samples += refined.evaluations;
  if (refined.value > best) {
    best = refined.value;
    best_t = refined.arg;
  }
  report.verdict = verdict_for(best, cfg.tolerance, report.samples);
  report.margin = -best;
  if (report.verdict == Verdict::Violated) {
    Witness w;
    w.aux["t"] = best_t;
    w.aux["value"] = best;
    report.witness = std::move(w);
  }
  return report;
}

}  // namespace opmetric::criteria
