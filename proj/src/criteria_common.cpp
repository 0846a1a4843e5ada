#include <algorithm>
#include <cmath>

#include "criteria_internal.hpp"
#include "opmetric/errors.hpp"

namespace opmetric::criteria::detail {

std::uint64_t salt_of(const std::string& name, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(derive_seed(h, a), b);
}

Verdict verdict_for(double worst_violation, double tolerance, long long samples) {
  if (samples == 0 || !std::isfinite(worst_violation)) return Verdict::Inconclusive;
  return worst_violation > tolerance ? Verdict::Violated : Verdict::HoldsWithinBudget;
}

std::vector<int> search_levels(const SpaceRep& space, const SearchConfig& cfg) {
  if (!space.embedded()) return {1};
  std::vector<int> levels;
  for (int n = 1; n <= cfg.max_level; ++n) levels.push_back(n);
  return levels;
}

std::vector<double> small_norm_sweep(const SearchConfig& cfg) {
  return {0.2 * cfg.radius, 0.5 * cfg.radius, cfg.radius, 2.0 * cfg.radius};
}

void require_unit_vector(const SpaceRep& space, const CVec& u, const char* who) {
  if (u.size() != space.dim()) throw ShapeError(std::string(who) + ": distinguished element has wrong length");
  if (!u.allFinite()) throw InvalidInput(std::string(who) + ": distinguished element is not finite");
  const double n = space.norm(u);
  if (n > 1.0 + kStructureTolerance) {
    throw InvalidInput(std::string(who) + ": distinguished element has norm " + std::to_string(n) + " > 1");
  }
}

CheckReport unsupported(const std::string& criterion, const SearchConfig& cfg, const std::string& why) {
  CheckReport r;
  r.criterion = criterion;
  r.verdict = Verdict::UnsupportedLevel;
  r.config = cfg;
  r.qualifier = why;
  return r;
}

CheckReport run_search(const std::string& criterion, const SpaceRep& space, const SearchConfig& cfg,
                       const std::vector<int>& levels, const std::vector<double>& radii,
                       const std::function<Objective(int level)>& objective_for) {
  cfg.validate(space.p(), space.q());
  CheckReport report;
  report.criterion = criterion;
  report.config = cfg;
  if (!space.embedded()) report.qualifier = kLevelOneQualifier;

  double best = -std::numeric_limits<double>::infinity();
  LevelElement best_point;
  double best_radius = 0.0;
  int best_level = 0;
  const int shares = static_cast<int>(radii.size());

  for (int n : levels) {
    report.levels_checked.push_back(n);
    const Objective objective = objective_for(n);
    for (int s = 0; s < shares; ++s) {
      SearchConfig part = cfg;
      part.restarts = cfg.restarts / shares + (s < cfg.restarts % shares ? 1 : 0);
      if (part.restarts == 0) continue;
      const SearchResult result = maximize_violation(
          objective, space, SearchDomain::level(n, radii[s], salt_of(criterion, n, s)), part);
      report.samples += result.evaluations;
      if (cfg.record_trace) report.trace.insert(report.trace.end(), result.trace.begin(), result.trace.end());
      if (result.found() && result.best_value > best) {
        best = result.best_value;
        best_point = result.best_point;
        best_radius = radii[s];
        best_level = n;
      }
    }
  }

  if (best_level > 0 && best > cfg.tolerance) {
    const SearchResult polished =
        refine_witness(objective_for(best_level), space, best_point, best_radius, cfg);
    report.samples += polished.evaluations;
    if (polished.found() && polished.best_value > best) {
      best = polished.best_value;
      best_point = polished.best_point;
    }
  }

  report.verdict = verdict_for(best, cfg.tolerance, best_level > 0 ? report.samples : 0);
  report.margin = best_level > 0 ? -best : 0.0;
  if (report.verdict == Verdict::Violated) {
    Witness w;
    w.point = best_point;
    w.aux["value"] = best;
    w.aux["norm"] = space.norm(best_point);
    w.aux["radius"] = best_radius;
    report.witness = std::move(w);
  }
  return report;
}

CMat psd_sqrt(const CMat& h) {
  const CMat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(herm);
  Eigen::VectorXd values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < -kStructureTolerance * scale) {
      throw NumericalError("psd_sqrt: operand has negative eigenvalue " + std::to_string(values(i)));
    }
    values(i) = std::sqrt(std::max(values(i), 0.0));
  }
  return eig.eigenvectors() * values.cast<cplx>().asDiagonal() * eig.eigenvectors().adjoint();
}

GoldenMax golden_max(const std::function<double(double)>& f, double a, double b, int iterations) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  GoldenMax out;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  out.evaluations = 2;
  for (int i = 0; i < iterations && std::abs(b - a) > 1e-13; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++out.evaluations;
  }
  if (fc >= fd) {
    out.arg = c;
    out.value = fc;
  } else {
    out.arg = d;
    out.value = fd;
  }
  return out;
}

}  // namespace opmetric::criteria::detail
