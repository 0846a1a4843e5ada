#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opmetric/witness.hpp"

namespace opmetric::formulas {

/// Outcome of one randomized norm-identity suite.
struct SuiteResult {
  std::string name;
  std::string identity;
  int trials = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_deviation <= tolerance; }
};

struct Options {
  /// Overrides every suite's default trial count when set.
  std::optional<int> trials;
  std::uint64_t seed = kDefaultSeed;
  /// Test hook: flips the sign of one block in the rotation suite.
  bool inject_sign_bug = false;
};

/// ‖[[a, b], [b, a]]‖ = max(‖a+b‖, ‖a−b‖) on random M₃ pairs (default 200).
SuiteResult block_symmetric(const Options& opt);
/// ‖[[a, −b], [b, a]]‖ = max(‖a+ib‖, ‖a−ib‖) on random M₃ pairs (default 200).
SuiteResult block_rotation(const Options& opt);
/// ‖t_x‖² = ½(2 + ‖x‖² + ‖x‖√(‖x‖²+4)) with v = I on M₂, M₃ and upper-triangular M₂,
/// levels 1 and 2 (default 100 per space per level), plus the ‖x‖ = 1 spot value.
SuiteResult t_gadget_closed_form(const Options& opt);
/// ‖s_x‖ = 1 + ‖x‖ on M₂ and M₃ with the adjoint involution, levels 1 and 2.
SuiteResult s_gadget_norm(const Options& opt);
/// ‖r_x‖ = √(1+‖x‖²) on M₂ and M₃, levels 1 and 2.
SuiteResult r_gadget_norm(const Options& opt);
/// ‖[I_n x]‖² = 2 for norm-one x in M_n(M₂), n ∈ {1, 2} (default 200 per level).
SuiteResult row_norm_one(const Options& opt);

std::vector<SuiteResult> run_all(const Options& opt);

nlohmann::json to_json(const std::vector<SuiteResult>& results, const Options& opt);
std::string to_text(const std::vector<SuiteResult>& results);

}  // namespace opmetric::formulas
