#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "opmetric/criteria.hpp"

namespace opmetric::corpus {

/// A fixed point at which a violation functional is evaluated and reported
/// alongside the searched verdicts (e.g. a known witness).
struct Probe {
  std::string name;
  std::string criterion;
  LevelElement point;
};

struct CorpusEntry {
  std::string name;
  SpaceRep space;
  /// Criterion id → verdict expected under the pinned seed.
  std::map<std::string, Verdict> expected;
  /// What the example illustrates, in a sentence.
  std::string locus;
  /// Extra operands (w, side, map, ...); the distinguished element lives in space.unit().
  criteria::Operands operands;
  /// Entry-local tolerance override.
  std::optional<double> tolerance;
  std::vector<Probe> probes;
};

// Matrix units and plain spaces, shared with the formula suites and tests.
CMat matrix_unit(int rows, int cols, int i, int j);
/// M_d with the adjoint involution and unit I.
SpaceRep full_matrix_space(int d);
/// Upper-triangular d×d matrices with unit I, no involution.
SpaceRep upper_triangular_space(int d);

/// Diagonal subspace of M_n (sup-norm). unit_e1 = false gives the all-ones unit.
CorpusEntry build_linf(int n, bool unit_e1 = false);
/// M₂ with the trace norm (level-1 oracle), u = diag(α, 1−α).
CorpusEntry build_trace_class_2(double alpha = 0.6);
/// Lower-triangular 2×2 matrices with the trace norm, u = diag(0.6, 0.4).
CorpusEntry build_lower_triangular_L12();
/// Diagonal 2×2 matrices with the trace norm (a copy of ℓ¹₂), u = E₁₁.
CorpusEntry build_diagonal_l1_2();
/// span{I, diag(ω⁰, …, ω^{M−1})} in M_M, ω = exp(2πi/M); level-1 norm tends to |a|+|b|.
CorpusEntry build_l1_2_model(int roots);
/// First column of M₂, u = e₁.
CorpusEntry build_column_H2();
/// First row of M₂, u = E₁₁ (a left identity that is not an isometry).
CorpusEntry build_row_H2();
/// {x ∈ M₂ : x₁₁ = 0, x₁₂ = x₂₁} with u = E₁₂ + E₂₁ and the adjoint involution.
CorpusEntry build_twisted_selfadjoint();
CorpusEntry build_upper_triangular(int d);
CorpusEntry build_full_matrix(int d);
/// span{E₁₂, E₂₁} with u = E₁₂ + E₂₁.
CorpusEntry build_non_algebra_span();
/// (U_e(X), e ⊗ I₂) built from an entry's space and unit; expects the base's unitality verdict.
CorpusEntry build_Ue_entry(const CorpusEntry& base);

std::vector<CorpusEntry> default_corpus();

/// Value of a violation functional at a probe point.
double probe_value(const CorpusEntry& entry, const Probe& probe);

struct CriterionOutcome {
  CheckReport report;
  Verdict expected = Verdict::Inconclusive;
  bool matched() const { return report.verdict == expected; }
};

struct EntryOutcome {
  std::string name;
  std::string locus;
  std::optional<double> tolerance;
  std::vector<CriterionOutcome> results;
  std::vector<std::pair<std::string, double>> probes;
  bool matched() const;
};

struct CorpusRun {
  std::vector<EntryOutcome> entries;
  bool all_matched() const;
};

/// Runs every (entry, expected criterion) pair. `only` restricts to entry names.
/// Jobs are spread over cfg.threads workers; results do not depend on the count.
CorpusRun run_corpus(const std::vector<CorpusEntry>& entries, const SearchConfig& cfg,
                     const std::vector<std::string>& only = {});

/// Deterministic JSON (no timestamp); callers add one under "timestamp" if wanted.
nlohmann::json run_to_json(const CorpusRun& run, const SearchConfig& cfg);
std::string run_to_text(const CorpusRun& run);

/// Writes <dir>/<name>.json space definitions; returns the paths written.
std::vector<std::string> emit_spaces(const std::vector<CorpusEntry>& entries, const std::string& dir);

}  // namespace opmetric::corpus
