#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opmetric/opspace.hpp"
#include "opmetric/witness.hpp"

namespace opmetric {

enum class Verdict { HoldsWithinBudget, Violated, Inconclusive, UnsupportedLevel };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Where a criterion failed: the grid element plus whatever scalars or extra
/// operands are needed to re-evaluate it.
struct Witness {
  std::optional<LevelElement> point;
  /// Scalars such as z (as z_re/z_im), t, k, residuals, indices.
  std::map<std::string, double> aux;
  /// Additional coefficient vectors (x, y, ...) for multi-operand criteria.
  std::map<std::string, CVec> operands;

  bool operator==(const Witness&) const = default;
};

struct SubCheck {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;

  bool operator==(const SubCheck&) const = default;
};

/// Outcome of one criterion run.
///
/// margin is the negated worst violation found: VIOLATED exactly when
/// margin < -tolerance.
struct CheckReport {
  std::string criterion;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Witness> witness;
  double margin = 0.0;
  std::vector<int> levels_checked;
  long long samples = 0;
  SearchConfig config;
  /// E.g. "level-1 necessary condition" for level1-oracle spaces.
  std::string qualifier;
  std::vector<SubCheck> subchecks;
  /// Set by dual-path criteria: whether the metric and algebraic routes agree.
  std::optional<bool> cross_validation_agree;
  /// Accepted objective values per restart; filled only when SearchConfig::record_trace is set.
  std::vector<std::vector<double>> trace;

  bool operator==(const CheckReport&) const = default;
};

inline constexpr const char* kToolVersion = "0.3.0";

nlohmann::json config_to_json(const SearchConfig& cfg);
SearchConfig config_from_json(const nlohmann::json& j);

nlohmann::json level_element_to_json(const LevelElement& x);
LevelElement level_element_from_json(const nlohmann::json& j);

/// Report schema: {criterion, verdict, margin, witness: {level, rows, cols, coeffs,
/// aux, operands}, samples, levels_checked, config, qualifier, subchecks,
/// cross_validation, tool_version}.
nlohmann::json report_to_json(const CheckReport& report);
CheckReport report_from_json(const nlohmann::json& j);

/// Human-readable rendering with the evaluated inequality.
std::string report_to_text(const CheckReport& report);

}  // namespace opmetric
