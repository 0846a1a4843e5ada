#include "opmetric/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "opmetric/errors.hpp"
#include "opmetric/gadgets.hpp"
#include "opmetric/space_io.hpp"

namespace opmetric::corpus {

using V = Verdict;

CMat matrix_unit(int rows, int cols, int i, int j) {
  CMat m = CMat::Zero(rows, cols);
  m(i, j) = 1.0;
  return m;
}

namespace {

CVec coeffs(std::initializer_list<cplx> values) {
  CVec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (cplx c : values) v(i++) = c;
  return v;
}

// Involution matrix for a basis closed under adjoints: column i holds the
// coefficients of Bᵢᴴ.
CMat adjoint_permutation(const std::vector<CMat>& basis) {
  const int k = static_cast<int>(basis.size());
  CMat s = CMat::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if ((basis[j] - basis[i].adjoint()).norm() == 0.0) s(j, i) = 1.0;
  return s;
}

SpaceRep oracle_space(std::vector<CMat> basis, CVec unit) {
  SpaceDefinition def;
  def.p = 2;
  def.q = 2;
  def.basis = std::move(basis);
  def.unit = std::move(unit);
  def.norm_mode = NormMode::Level1Oracle;
  def.level1_oracle = Level1Oracle::TraceNorm;
  return SpaceRep::create(std::move(def));
}

// The four unitality criteria, all expected to agree.
void expect_unital(CorpusEntry& e, Verdict v) {
  for (const char* id : {"unitary-four-rotation", "unitary-t-gadget", "isometry", "coisometry"}) e.expected[id] = v;
}

CorpusEntry make_entry(std::string name, SpaceRep space, std::string locus) {
  return CorpusEntry{std::move(name), std::move(space), {}, std::move(locus), {}, {}, {}};
}

}  // namespace

SpaceRep full_matrix_space(int d) {
  if (d < 1) throw InvalidInput("full_matrix_space: d must be positive");
  SpaceDefinition def;
  def.p = d;
  def.q = d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) def.basis.push_back(matrix_unit(d, d, i, j));
  CVec unit = CVec::Zero(d * d);
  for (int i = 0; i < d; ++i) unit(i * d + i) = 1.0;
  def.unit = unit;
  def.involution = adjoint_permutation(def.basis);
  return SpaceRep::create(std::move(def));
}

SpaceRep upper_triangular_space(int d) {
  if (d < 1) throw InvalidInput("upper_triangular_space: d must be positive");
  SpaceDefinition def;
  def.p = d;
  def.q = d;
  std::vector<cplx> unit;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      def.basis.push_back(matrix_unit(d, d, i, j));
      unit.push_back(i == j ? 1.0 : 0.0);
    }
  }
  def.unit = Eigen::Map<CVec>(unit.data(), static_cast<Eigen::Index>(unit.size()));
  return SpaceRep::create(std::move(def));
}

CorpusEntry build_linf(int n, bool unit_e1) {
  if (n < 1) throw InvalidInput("build_linf: n must be positive");
  SpaceDefinition def;
  def.p = n;
  def.q = n;
  for (int i = 0; i < n; ++i) def.basis.push_back(matrix_unit(n, n, i, i));
  CVec unit = unit_e1 ? CVec(CVec::Unit(n, 0)) : CVec(CVec::Ones(n));
  def.unit = unit;
  def.involution = CMat::Identity(n, n);
  CorpusEntry e{unit_e1 ? "linf" + std::to_string(n) + "_e1" : "linf" + std::to_string(n),
                SpaceRep::create(std::move(def)),
                {},
                unit_e1 ? "sup-norm diagonal space with a non-unitary norm-one element" : "sup-norm diagonal space",
                {},
                {},
                {}};
  if (unit_e1) {
    expect_unital(e, V::Violated);
    if (n >= 2) {
      LevelElement x = LevelElement::single(CVec::Unit(n, 1));
      e.probes.push_back({"x = e2", "unitary-four-rotation", x});
      e.probes.push_back({"x = e2", "coisometry", x});
    }
  } else {
    expect_unital(e, V::HoldsWithinBudget);
    e.expected["operator-system"] = V::HoldsWithinBudget;
    e.expected["mult-closed"] = V::HoldsWithinBudget;
    e.expected["algebra-product"] = V::HoldsWithinBudget;
    e.expected["cstar-among-systems"] = V::HoldsWithinBudget;
  }
  return e;
}

CorpusEntry build_trace_class_2(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("build_trace_class_2: alpha must lie in (0, 1)");
  std::vector<CMat> basis;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) basis.push_back(matrix_unit(2, 2, i, j));
  const std::string name =
      alpha == 0.6 ? "trace_class_2" : "trace_class_2_alpha" + std::to_string(std::lround(alpha * 100));
  CorpusEntry e = make_entry(name, oracle_space(std::move(basis), coeffs({alpha, 0.0, 0.0, 1.0 - alpha})),
                             "2x2 matrices with the trace norm and a diagonal norm-one element");
  e.expected["unitary-four-rotation"] = V::Violated;
  e.expected["unitary-t-gadget"] = V::UnsupportedLevel;
  e.probes.push_back({"x = 0.25 e21", "unitary-four-rotation", LevelElement::single(coeffs({0.0, 0.0, 0.25, 0.0}))});
  return e;
}

CorpusEntry build_lower_triangular_L12() {
  std::vector<CMat> basis = {matrix_unit(2, 2, 0, 0), matrix_unit(2, 2, 1, 0), matrix_unit(2, 2, 1, 1)};
  CorpusEntry e = make_entry("lower_triangular_L12", oracle_space(std::move(basis), coeffs({0.6, 0.0, 0.4})),
                             "lower-triangular 2x2 matrices with the trace norm");
  e.expected["unitary-four-rotation"] = V::Violated;
  e.expected["unitary-t-gadget"] = V::UnsupportedLevel;
  e.probes.push_back({"x = 0.25 e21", "unitary-four-rotation", LevelElement::single(coeffs({0.0, 0.25, 0.0}))});
  return e;
}

CorpusEntry build_diagonal_l1_2() {
  std::vector<CMat> basis = {matrix_unit(2, 2, 0, 0), matrix_unit(2, 2, 1, 1)};
  CorpusEntry e = make_entry("diagonal_l1_2", oracle_space(std::move(basis), coeffs({1.0, 0.0})),
                             "diagonal 2x2 matrices with the trace norm, a copy of l1 in two dimensions");
  e.expected["unitary-four-rotation"] = V::HoldsWithinBudget;
  return e;
}

CorpusEntry build_l1_2_model(int roots) {
  if (roots < 2) throw InvalidInput("build_l1_2_model: need at least two roots");
  SpaceDefinition def;
  def.p = roots;
  def.q = roots;
  CMat d = CMat::Zero(roots, roots);
  for (int j = 0; j < roots; ++j) d(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / roots);
  def.basis = {CMat::Identity(roots, roots), d};
  def.unit = coeffs({1.0, 0.0});
  CorpusEntry e = make_entry("l1_2_model_" + std::to_string(roots), SpaceRep::create(std::move(def)),
                             "roots-of-unity diagonal model of l1 in two dimensions");
  e.tolerance = 1e-3;
  expect_unital(e, V::HoldsWithinBudget);
  return e;
}

CorpusEntry build_column_H2() {
  SpaceDefinition def;
  def.p = 2;
  def.q = 1;
  def.basis = {matrix_unit(2, 1, 0, 0), matrix_unit(2, 1, 1, 0)};
  def.unit = coeffs({1.0, 0.0});
  CorpusEntry e = make_entry("column_H2", SpaceRep::create(std::move(def)),
                             "two-dimensional column Hilbert space; e1 is an isometry but not a coisometry");
  e.expected["unitary-four-rotation"] = V::Violated;
  e.expected["unitary-t-gadget"] = V::Violated;
  e.expected["isometry"] = V::HoldsWithinBudget;
  e.expected["coisometry"] = V::Violated;
  e.probes.push_back({"x = e2", "coisometry", LevelElement::single(coeffs({0.0, 1.0}))});
  return e;
}

CorpusEntry build_row_H2() {
  SpaceDefinition def;
  def.p = 1;
  def.q = 2;
  def.basis = {matrix_unit(1, 2, 0, 0), matrix_unit(1, 2, 0, 1)};
  def.unit = coeffs({1.0, 0.0});
  CorpusEntry e = make_entry("row_H2", SpaceRep::create(std::move(def)),
                             "two-dimensional row Hilbert space; a norm-one left identity is a coisometry");
  e.expected["unitary-four-rotation"] = V::Violated;
  e.expected["unitary-t-gadget"] = V::Violated;
  e.expected["isometry"] = V::Violated;
  e.expected["coisometry"] = V::HoldsWithinBudget;
  return e;
}

CorpusEntry build_twisted_selfadjoint() {
  SpaceDefinition def;
  def.p = 2;
  def.q = 2;
  def.basis = {matrix_unit(2, 2, 1, 1), CMat(matrix_unit(2, 2, 0, 1) + matrix_unit(2, 2, 1, 0))};
  def.unit = coeffs({0.0, 1.0});
  def.involution = CMat::Identity(2, 2);
  CorpusEntry e = make_entry("twisted_selfadjoint", SpaceRep::create(std::move(def)),
                             "selfadjoint unital space whose unit is not the identity, so it is no operator system");
  expect_unital(e, V::HoldsWithinBudget);
  e.expected["operator-system"] = V::Violated;
  return e;
}

CorpusEntry build_upper_triangular(int d) {
  CorpusEntry e = make_entry("upper_triangular_" + std::to_string(d), upper_triangular_space(d),
                             "unital operator algebra of upper-triangular matrices");
  expect_unital(e, V::HoldsWithinBudget);
  e.expected["mult-closed"] = V::HoldsWithinBudget;
  e.expected["algebra-product"] = V::HoldsWithinBudget;
  e.expected["multiplier"] = V::HoldsWithinBudget;
  e.operands.w = matrix_unit(d, d, 0, 0);
  e.operands.side = criteria::MultiplierSide::Left;
  return e;
}

CorpusEntry build_full_matrix(int d) {
  CorpusEntry e = make_entry("full_matrix_" + std::to_string(d), full_matrix_space(d),
                             "the full matrix algebra");
  expect_unital(e, V::HoldsWithinBudget);
  e.expected["operator-system"] = V::HoldsWithinBudget;
  e.expected["s-gadget"] = V::Inconclusive;
  e.expected["mult-closed"] = V::HoldsWithinBudget;
  e.expected["algebra-product"] = V::HoldsWithinBudget;
  e.expected["cstar-among-systems"] = V::HoldsWithinBudget;
  return e;
}

CorpusEntry build_non_algebra_span() {
  SpaceDefinition def;
  def.p = 2;
  def.q = 2;
  def.basis = {matrix_unit(2, 2, 0, 1), matrix_unit(2, 2, 1, 0)};
  def.unit = coeffs({1.0, 1.0});
  def.involution = adjoint_permutation(def.basis);
  CorpusEntry e = make_entry("non_algebra_span", SpaceRep::create(std::move(def)),
                             "selfadjoint span of the off-diagonal matrix units, not closed under products");
  expect_unital(e, V::HoldsWithinBudget);
  e.expected["mult-closed"] = V::Violated;
  e.expected["multiplier"] = V::Violated;
  e.operands.w = CMat::Identity(2, 2);
  e.operands.side = criteria::MultiplierSide::Quasi;
  return e;
}

CorpusEntry build_Ue_entry(const CorpusEntry& base) {
  if (!base.space.unit()) throw InvalidInput("build_Ue_entry: base entry has no distinguished element");
  const auto it = base.expected.find("unitary-four-rotation");
  if (it == base.expected.end()) throw InvalidInput("build_Ue_entry: base entry has no unitality expectation");
  CorpusEntry e = make_entry("Ue_" + base.name, gadgets::build_Ue(base.space, *base.space.unit()),
                             "upper-triangular doubling of " + base.name + "; unital exactly when the base is");
  e.tolerance = base.tolerance;
  e.expected["unitary-four-rotation"] = it->second;
  e.expected["unitary-t-gadget"] = it->second;
  return e;
}

std::vector<CorpusEntry> default_corpus() {
  std::vector<CorpusEntry> c;
  c.push_back(build_linf(1));
  c.push_back(build_linf(3));
  c.push_back(build_linf(3, true));
  c.push_back(build_trace_class_2(0.6));
  c.push_back(build_trace_class_2(0.5));
  c.push_back(build_lower_triangular_L12());
  c.push_back(build_diagonal_l1_2());
  c.push_back(build_l1_2_model(64));
  c.push_back(build_column_H2());
  c.push_back(build_row_H2());
  c.push_back(build_twisted_selfadjoint());
  c.push_back(build_upper_triangular(2));
  c.push_back(build_full_matrix(2));
  c.push_back(build_non_algebra_span());
  c.push_back(build_Ue_entry(c[12]));
  c.push_back(build_Ue_entry(c[2]));
  return c;
}

double probe_value(const CorpusEntry& entry, const Probe& probe) {
  const SpaceRep& s = entry.space;
  if (!s.unit()) throw InvalidInput("probe: entry has no distinguished element");
  const CVec& u = *s.unit();
  if (probe.criterion == "unitary-four-rotation") return criteria::four_rotation_violation(s, u, probe.point);
  if (probe.criterion == "unitary-t-gadget") return criteria::t_gadget_violation(s, u, probe.point);
  if (probe.criterion == "coisometry") return criteria::row_deviation(s, u, probe.point);
  if (probe.criterion == "isometry") return criteria::column_deviation(s, u, probe.point);
  if (probe.criterion == "operator-system") return criteria::operator_system_deviation(s, u, probe.point);
  throw InvalidInput("probe: no functional for criterion '" + probe.criterion + "'");
}

bool EntryOutcome::matched() const {
  return std::all_of(results.begin(), results.end(), [](const CriterionOutcome& o) { return o.matched(); });
}

bool CorpusRun::all_matched() const {
  return std::all_of(entries.begin(), entries.end(), [](const EntryOutcome& e) { return e.matched(); });
}

CorpusRun run_corpus(const std::vector<CorpusEntry>& entries, const SearchConfig& cfg,
                     const std::vector<std::string>& only) {
  cfg.validate();
  for (const std::string& name : only) {
    if (std::none_of(entries.begin(), entries.end(), [&](const CorpusEntry& e) { return e.name == name; })) {
      throw InvalidInput("corpus: no entry named '" + name + "'");
    }
  }
  std::vector<const CorpusEntry*> selected;
  for (const CorpusEntry& e : entries) {
    if (only.empty() || std::find(only.begin(), only.end(), e.name) != only.end()) selected.push_back(&e);
  }

  CorpusRun run;
  struct Job {
    std::size_t entry;
    std::string criterion;
    std::size_t slot;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const CorpusEntry& e = *selected[i];
    EntryOutcome out{e.name, e.locus, e.tolerance, {}, {}};
    for (const auto& [id, expected] : e.expected) {
      jobs.push_back({i, id, out.results.size()});
      out.results.push_back({CheckReport{}, expected});
    }
    for (const Probe& p : e.probes) out.probes.emplace_back(p.criterion + " at " + p.name, probe_value(e, p));
    run.entries.push_back(std::move(out));
  }

  // Parallelism is across jobs; each criterion then runs single-threaded.
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::clamp(cfg.threads > 0 ? cfg.threads : hw, 1, std::max<int>(1, jobs.size()));
  auto run_job = [&](const Job& job) {
    const CorpusEntry& e = *selected[job.entry];
    SearchConfig local = cfg;
    local.threads = 1;
    if (e.tolerance) local.tolerance = *e.tolerance;
    run.entries[job.entry].results[job.slot].report =
        criteria::run_criterion(job.criterion, e.space, e.operands, local);
  };
  if (workers == 1) {
    for (const Job& j : jobs) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
          try {
            run_job(jobs[i]);
          } catch (...) {
            std::lock_guard lock(m);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  return run;
}

nlohmann::json run_to_json(const CorpusRun& run, const SearchConfig& cfg) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["config"] = config_to_json(cfg);
  j["all_matched"] = run.all_matched();
  j["entries"] = nlohmann::json::array();
  for (const EntryOutcome& e : run.entries) {
    nlohmann::json je;
    je["name"] = e.name;
    je["locus"] = e.locus;
    je["tolerance_override"] = e.tolerance ? nlohmann::json(*e.tolerance) : nlohmann::json(nullptr);
    je["matched"] = e.matched();
    je["results"] = nlohmann::json::array();
    for (const CriterionOutcome& o : e.results) {
      je["results"].push_back(
          {{"expected", to_string(o.expected)}, {"matched", o.matched()}, {"report", report_to_json(o.report)}});
    }
    je["probes"] = nlohmann::json::array();
    for (const auto& [name, value] : e.probes) je["probes"].push_back({{"name", name}, {"value", value}});
    j["entries"].push_back(std::move(je));
  }
  return j;
}

std::string run_to_text(const CorpusRun& run) {
  std::ostringstream out;
  out << std::left << std::setw(28) << "entry" << std::setw(24) << "criterion" << std::setw(22) << "verdict"
      << std::setw(16) << "margin"
      << "expected\n";
  for (const EntryOutcome& e : run.entries) {
    for (const CriterionOutcome& o : e.results) {
      std::ostringstream margin;
      margin << std::setprecision(6) << o.report.margin;
      out << std::setw(28) << e.name << std::setw(24) << o.report.criterion << std::setw(22)
          << to_string(o.report.verdict) << std::setw(16) << margin.str() << (o.matched() ? "ok" : "MISMATCH (")
          << (o.matched() ? "" : to_string(o.expected) + ")") << "\n";
    }
    for (const auto& [name, value] : e.probes) {
      out << std::setw(28) << e.name << "probe " << name << " = " << std::setprecision(9) << value << "\n";
    }
  }
  out << (run.all_matched() ? "all expectations matched\n" : "some expectations did not match\n");
  return out.str();
}

std::vector<std::string> emit_spaces(const std::vector<CorpusEntry>& entries, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (const CorpusEntry& e : entries) {
    const std::string path = (std::filesystem::path(dir) / (e.name + ".json")).string();
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write " + path);
    f << space_to_json(e.space).dump(2) << "\n";
    paths.push_back(path);
  }
  return paths;
}

}  // namespace opmetric::corpus
