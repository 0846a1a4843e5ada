#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "opmetric/criteria.hpp"

namespace opmetric::criteria::detail {

inline constexpr double kStructureTolerance = 1e-10;

/// Stable 64-bit FNV-1a, used to salt RNG streams by criterion name.
std::uint64_t salt_of(const std::string& name, std::uint64_t a = 0, std::uint64_t b = 0);

Verdict verdict_for(double worst_violation, double tolerance, long long samples);

/// Levels searched: 1..max_level for embedded spaces, {1} for level1-oracle spaces.
std::vector<int> search_levels(const SpaceRep& space, const SearchConfig& cfg);

/// Ball radii for the small-norm criteria: {0.2, 0.5, 1, 2} × cfg.radius.
std::vector<double> small_norm_sweep(const SearchConfig& cfg);

void require_unit_vector(const SpaceRep& space, const CVec& u, const char* who);

/// Searches every level and radius for the largest value of objective_for(level)
/// and packages a report. The best point is polished with refine_witness when it
/// is a violation.
CheckReport run_search(const std::string& criterion, const SpaceRep& space, const SearchConfig& cfg,
                       const std::vector<int>& levels, const std::vector<double>& radii,
                       const std::function<Objective(int level)>& objective_for);

CheckReport unsupported(const std::string& criterion, const SearchConfig& cfg, const std::string& why);

/// Positive square root of a Hermitian matrix that may carry rounding-level
/// negative eigenvalues. Throws NumericalError for genuinely negative operands.
CMat psd_sqrt(const CMat& h);

struct GoldenMax {
  double arg = 0.0;
  double value = 0.0;
  long long evaluations = 0;
};

/// Golden-section search for a maximum of f on [a, b].
GoldenMax golden_max(const std::function<double(double)>& f, double a, double b, int iterations = 80);

}  // namespace opmetric::criteria::detail
