#include "opmetric/witness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>

#include "opmetric/errors.hpp"

namespace opmetric {

namespace {

constexpr int kMaxAmbient = 512;
constexpr double kRelativeFdStep = 1e-5;
constexpr double kMinRelativeStep = 1e-9;
constexpr double kSmallestStartFraction = 0.01;
// A restart stops once kStallWindow consecutive iterations gain less than
// kStallFraction·tolerance in total, or less than a fraction of |f| (larger
// below zero, where the point is not a violation yet). Refinement uses only
// the absolute rule.
constexpr int kStallWindow = 8;
constexpr double kStallFraction = 0.01;
constexpr double kRelativeStallBelowZero = 1e-3;
constexpr double kRelativeStallAboveZero = 1e-6;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string("search config: ") + name + " must be positive");
}

}  // namespace

void SearchConfig::validate() const {
  require_positive(tolerance, "tolerance");
  require_positive(radius, "radius");
  require_positive(step_size, "step_size");
  require_positive(t_max, "t_max");
  if (max_level < 1) throw InvalidInput("search config: max_level must be positive");
  if (restarts < 0) throw InvalidInput("search config: restarts must be non-negative");
  if (ascent_steps < 1) throw InvalidInput("search config: ascent_steps must be positive");
  if (circle_samples < 1) throw InvalidInput("search config: circle_samples must be positive");
  if (b_samples < 0) throw InvalidInput("search config: b_samples must be non-negative");
  if (threads < 0) throw InvalidInput("search config: threads must be non-negative");
}

void SearchConfig::validate(int p, int q) const {
  validate();
  if (static_cast<long long>(max_level) * std::max(p, q) > kMaxAmbient) {
    throw InvalidInput("search config: max_level·max(p,q) exceeds " + std::to_string(kMaxAmbient));
  }
}

bool SearchConfig::operator==(const SearchConfig& o) const {
  return tolerance == o.tolerance && max_level == o.max_level && radius == o.radius && restarts == o.restarts &&
         ascent_steps == o.ascent_steps && step_size == o.step_size && circle_samples == o.circle_samples &&
         t_max == o.t_max && b_samples == o.b_samples && seed == o.seed;
}

namespace {

struct RestartOutcome {
  double best = -std::numeric_limits<double>::infinity();
  LevelElement point;
  long long evaluations = 0;
  bool aborted = false;
  std::vector<double> trace;
};

// One projected-ascent run. Keeps the current point inside the ball and only
// ever moves to strictly better points.
class Climber {
 public:
  Climber(const Objective& objective, const SpaceRep& space, double radius, double stall_gain, bool relative_stall,
          bool record)
      : objective_(objective),
        space_(space),
        radius_(radius),
        stall_gain_(stall_gain),
        relative_stall_(relative_stall),
        record_(record) {
    for (const CMat& b : space.basis()) max_basis_norm_ = std::max(max_basis_norm_, op_norm(b));
  }

  RestartOutcome run(LevelElement start, double initial_step, double coeff_scale, int steps) {
    RestartOutcome out;
    LevelElement x = space_.project_to_ball(start, radius_);
    double norm_x = space_.norm(x);
    double fx = eval(x, out);
    if (out.aborted) return out;
    record(out, fx);

    const double min_step = kMinRelativeStep * radius_ * coeff_scale;
    double step = initial_step;
    CVec direction;
    bool need_gradient = true;
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(steps) + 1);
    history.push_back(fx);
    for (int it = 0; it < steps; ++it) {
      if (need_gradient) {
        direction = gradient(x, norm_x, coeff_scale, out);
        if (out.aborted) return finish(out, x, fx);
        const double gnorm = direction.norm();
        if (!(gnorm > 0.0) || !std::isfinite(gnorm)) break;
        direction /= gnorm;
        need_gradient = false;
      }
      LevelElement candidate(x.rows(), x.cols(), x.dim(), x.coeffs() + step * direction);
      candidate = space_.project_to_ball(candidate, radius_);
      const double fc = eval(candidate, out);
      if (out.aborted) return finish(out, x, fx);
      if (fc > fx) {
        x = std::move(candidate);
        fx = fc;
        norm_x = space_.norm(x);
        need_gradient = true;
        step = std::min(2.0 * step, initial_step);
        record(out, fx);
      } else {
        step *= 0.5;
        if (step < min_step) break;
      }
      history.push_back(fx);
      if (history.size() > kStallWindow && fx - history[history.size() - 1 - kStallWindow] < stall_threshold(fx)) break;
    }
    return finish(out, x, fx);
  }

 private:
  double stall_threshold(double fx) const {
    if (!relative_stall_) return stall_gain_;
    return std::max(stall_gain_, std::abs(fx) * (fx < 0.0 ? kRelativeStallBelowZero : kRelativeStallAboveZero));
  }

  double eval(const LevelElement& x, RestartOutcome& out) {
    ++out.evaluations;
    const double v = objective_(x);
    if (!std::isfinite(v)) out.aborted = true;
    return v;
  }

  void record(RestartOutcome& out, double v) const {
    if (record_) out.trace.push_back(v);
  }

  static RestartOutcome finish(RestartOutcome& out, const LevelElement& x, double fx) {
    if (!out.aborted) {
      out.best = fx;
      out.point = x;
    }
    return std::move(out);
  }

  // Central differences over (Re c, Im c). Probes are projected back to the ball
  // only when the triangle inequality cannot rule out leaving it.
  CVec gradient(const LevelElement& x, double norm_x, double coeff_scale, RestartOutcome& out) {
    const Eigen::Index d = x.coeffs().size();
    const double h = kRelativeFdStep * std::max(x.coeffs().norm(), 1e-3 * radius_ * coeff_scale);
    const bool probes_inside = norm_x + h * max_basis_norm_ <= radius_;
    CVec g(d);
    LevelElement probe = x;
    for (Eigen::Index j = 0; j < 2 * d; ++j) {
      const Eigen::Index idx = j % d;
      const cplx delta = j < d ? cplx(h, 0.0) : cplx(0.0, h);
      const cplx saved = probe.coeffs()(idx);
      probe.coeffs()(idx) = saved + delta;
      const double fp = eval(probes_inside ? probe : space_.project_to_ball(probe, radius_), out);
      probe.coeffs()(idx) = saved - delta;
      const double fm = eval(probes_inside ? probe : space_.project_to_ball(probe, radius_), out);
      probe.coeffs()(idx) = saved;
      if (out.aborted) return g;
      const double slope = (fp - fm) / (2.0 * h);
      if (j < d) {
        g(idx) = cplx(slope, 0.0);
      } else {
        g(idx) += cplx(0.0, slope);
      }
    }
    return g;
  }

  const Objective& objective_;
  const SpaceRep& space_;
  double radius_;
  double stall_gain_;
  bool relative_stall_;
  bool record_;
  double max_basis_norm_ = 0.0;
};

int worker_count(const SearchConfig& cfg, int jobs) {
  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(jobs, 1));
}

SearchResult merge(std::vector<RestartOutcome>& outcomes) {
  SearchResult result;
  result.restart_best.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    RestartOutcome& o = outcomes[i];
    result.evaluations += o.evaluations;
    result.restart_best.push_back(o.best);
    if (o.aborted) ++result.aborted_restarts;
    if (!o.aborted && o.best > result.best_value) {
      result.best_value = o.best;
      result.best_point = o.point;
    }
    result.trace.push_back(std::move(o.trace));
  }
  return result;
}

}  // namespace

SearchResult maximize_violation(const Objective& objective, const SpaceRep& space, const SearchDomain& domain,
                                const SearchConfig& cfg) {
  cfg.validate();
  if (!(domain.radius > 0.0)) throw InvalidInput("maximize_violation: radius must be positive");
  const int restarts = cfg.restarts;
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  const std::uint64_t family = derive_seed(cfg.seed, domain.salt);

  auto run_restart = [&](int i) {
    RngStream rng(family, static_cast<std::uint64_t>(i));
    LevelElement start(domain.rows, domain.cols, space.dim());
    for (Eigen::Index j = 0; j < start.coeffs().size(); ++j) start.coeffs()(j) = rng.complex_normal();
    const double fraction =
        restarts > 1 ? std::pow(kSmallestStartFraction, static_cast<double>(restarts - 1 - i) / (restarts - 1)) : 1.0;
    const double target = domain.radius * fraction;
    const double n0 = space.norm(start);
    if (!(n0 > 0.0)) {
      outcomes[i].aborted = true;
      return;
    }
    start.coeffs() *= target / n0;
    const double coeff_scale = start.coeffs().norm() / target;
    Climber climber(objective, space, domain.radius, kStallFraction * cfg.tolerance, true, cfg.record_trace);
    outcomes[i] = climber.run(std::move(start), cfg.step_size * domain.radius * coeff_scale, coeff_scale,
                              cfg.ascent_steps);
    if (outcomes[i].aborted) {
      std::clog << "opmetric: restart " << i << " aborted on a non-finite objective value\n";
    }
  };

  const int workers = worker_count(cfg, restarts);
  if (workers <= 1) {
    for (int i = 0; i < restarts; ++i) run_restart(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < restarts; i = next.fetch_add(1)) {
          try {
            run_restart(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  return merge(outcomes);
}

SearchResult refine_witness(const Objective& objective, const SpaceRep& space, const LevelElement& point,
                            double radius, const SearchConfig& cfg) {
  cfg.validate();
  const double n = space.norm(point);
  if (n > radius + 1e-9) throw InvalidInput("refine_witness: point lies outside the ball");
  double coeff_scale = 1.0;
  if (n > 0.0) {
    coeff_scale = point.coeffs().norm() / n;
  } else {
    double max_basis = 0.0;
    for (const CMat& b : space.basis()) max_basis = std::max(max_basis, op_norm(b));
    coeff_scale = max_basis > 0.0 ? 1.0 / max_basis : 1.0;
  }
  Climber climber(objective, space, radius, kStallFraction * cfg.tolerance, false, cfg.record_trace);
  std::vector<RestartOutcome> outcomes;
  outcomes.push_back(climber.run(point, 0.1 * cfg.step_size * radius * coeff_scale, coeff_scale, 4 * cfg.ascent_steps));
  return merge(outcomes);
}

}  // namespace opmetric
