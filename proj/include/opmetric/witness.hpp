#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "opmetric/opspace.hpp"

namespace opmetric {

inline constexpr std::uint64_t kDefaultSeed = 20120223;

/// Tolerances and budgets shared by every criterion.
struct SearchConfig {
  double tolerance = 1e-6;
  int max_level = 2;
  double radius = 0.5;
  int restarts = 64;
  int ascent_steps = 200;
  double step_size = 0.05;
  int circle_samples = 720;
  double t_max = 4.0;
  int b_samples = 64;
  std::uint64_t seed = kDefaultSeed;

  /// Worker threads for restarts; 0 means one per hardware thread.
  /// Results do not depend on this value, so it is not part of report echoes.
  int threads = 0;
  /// Keep the accepted-value history of every restart (used by `search` dumps).
  bool record_trace = false;

  /// Throws InvalidInput on non-positive fields or when max_level·max(p,q) > 512.
  void validate(int p, int q) const;
  /// Validates only the scalar fields.
  void validate() const;

  bool operator==(const SearchConfig& other) const;
};

/// Shape and radius of the ball a search lives in.
struct SearchDomain {
  int rows = 1;
  int cols = 1;
  double radius = 1.0;
  /// Mixed into the master seed so each (criterion, level, radius) draws its own starts.
  std::uint64_t salt = 0;

  static SearchDomain level(int n, double radius, std::uint64_t salt = 0) { return {n, n, radius, salt}; }
};

using Objective = std::function<double(const LevelElement&)>;

struct SearchResult {
  double best_value = -std::numeric_limits<double>::infinity();
  LevelElement best_point;
  long long evaluations = 0;
  /// Best value of each restart in restart order; -inf marks an aborted restart.
  std::vector<double> restart_best;
  int aborted_restarts = 0;
  /// Accepted objective values per restart, when SearchConfig::record_trace is set.
  std::vector<std::vector<double>> trace;

  bool found() const { return best_point.dim() > 0; }
};

/// Maximizes `objective` over {x : ‖x‖ ≤ domain.radius} by multi-start projected ascent.
///
/// Restart i starts from a random direction scaled to radius·100^{-(R-1-i)/(R-1)},
/// so starting norms are spread log-uniformly over [0.01·radius, radius].
/// Each restart climbs along central finite-difference gradients over the real
/// and imaginary parts of the coefficients, halving its step whenever a move does
/// not improve. Restarts run in parallel with independent RNG streams and are
/// merged by value with the lower index winning ties.
SearchResult maximize_violation(const Objective& objective, const SpaceRep& space, const SearchDomain& domain,
                                const SearchConfig& cfg);

/// Local ascent from `point` with step_size/10 and 4× the steps; never returns a
/// value below objective(point).
SearchResult refine_witness(const Objective& objective, const SpaceRep& space, const LevelElement& point,
                            double radius, const SearchConfig& cfg);

}  // namespace opmetric
