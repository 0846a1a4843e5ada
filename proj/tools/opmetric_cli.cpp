#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "opmetric/corpus.hpp"
#include "opmetric/criteria.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/formulas.hpp"
#include "opmetric/report.hpp"
#include "opmetric/space_io.hpp"

namespace {

using namespace opmetric;

constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::HoldsWithinBudget: return kExitHolds;
    case Verdict::Violated: return kExitViolated;
    default: return kExitInconclusive;
  }
}

struct CommonFlags {
  std::optional<double> tolerance;
  std::optional<int> levels;
  std::optional<double> radius;
  std::optional<int> restarts;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string format = "json";
  std::string out;

  void add(CLI::App* cmd) {
    cmd->add_option("--tolerance", tolerance, "Decision tolerance");
    cmd->add_option("--levels", levels, "Highest matrix level searched");
    cmd->add_option("--radius", radius, "Search ball radius");
    cmd->add_option("--restarts", restarts, "Random restarts per search");
    cmd->add_option("--seed", seed, "Master seed (falls back to $OPSPACE_SEED)");
    cmd->add_option("--threads", threads, "Worker threads (0 = one per core)");
    cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", out, "Write the report to this file instead of stdout");
  }

  SearchConfig config(SearchConfig cfg = {}) const {
    if (tolerance) cfg.tolerance = *tolerance;
    if (levels) cfg.max_level = *levels;
    if (radius) cfg.radius = *radius;
    if (restarts) cfg.restarts = *restarts;
    cfg.threads = threads;
    if (seed) {
      cfg.seed = *seed;
    } else if (const char* env = std::getenv("OPSPACE_SEED")) {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw InvalidInput(std::string("OPSPACE_SEED is not an unsigned integer: ") + env);
      }
    }
    cfg.validate();
    return cfg;
  }
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write " + path);
  f << text;
}

std::string timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

CVec parse_vector(const std::string& text, const char* flag) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array()) throw InvalidInput(std::string(flag) + " must be a JSON list");
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = j[i].is_number() ? cplx(j[i].get<double>(), 0.0) : complex_from_json(j[i]);
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(flag) + ": " + e.what());
  }
}

CMat parse_matrix(const std::string& text, const char* flag) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw InvalidInput(std::string(flag) + " must be a list of rows");
    CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t r = 0; r < j.size(); ++r) {
      if (j[r].size() != j[0].size()) throw ShapeError(std::string(flag) + ": ragged rows");
      for (std::size_t c = 0; c < j[r].size(); ++c) {
        const auto& e = j[r][c];
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            e.is_number() ? cplx(e.get<double>(), 0.0) : complex_from_json(e);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(flag) + ": " + e.what());
  }
}

struct CheckFlags {
  std::string space_file;
  std::string criterion;
  std::optional<int> unit_index;
  double rank_tol = kDefaultRankTolerance;
  std::string x, z, w, map, side = "left";

  void add(CLI::App* cmd) {
    cmd->add_option("space", space_file, "Space-definition JSON file")->required();
    cmd->add_option("criterion", criterion, "Criterion id")->required();
    cmd->add_option("--unit-index", unit_index, "Use basis element i as the distinguished element");
    cmd->add_option("--rank-tol", rank_tol, "Rank tolerance for the basis");
    cmd->add_option("--x", x, "Operand x as a JSON coefficient list");
    cmd->add_option("--z", z, "Operand z as a JSON coefficient list");
    cmd->add_option("--w", w, "Ambient matrix w as JSON rows");
    cmd->add_option("--side", side, "Multiplier side")->check(CLI::IsMember({"left", "right", "quasi"}));
    cmd->add_option("--map", map, "k x k coefficient map as JSON rows");
  }

  CheckReport run(const SearchConfig& cfg) const {
    if (!criteria::is_known(criterion)) throw InvalidInput("unknown criterion '" + criterion + "'");
    const SpaceRep space = load_space_file(space_file, rank_tol);
    criteria::Operands ops;
    if (unit_index) {
      if (*unit_index < 0 || *unit_index >= space.dim()) throw InvalidInput("--unit-index out of range");
      ops.unit = CVec(CVec::Unit(space.dim(), *unit_index));
    }
    if (!x.empty()) ops.x = parse_vector(x, "--x");
    if (!z.empty()) ops.z = parse_vector(z, "--z");
    if (!w.empty()) ops.w = parse_matrix(w, "--w");
    if (!map.empty()) ops.map = parse_matrix(map, "--map");
    ops.side = criteria::multiplier_side_from_string(side);
    return criteria::run_criterion(criterion, space, ops, cfg);
  }
};

std::string render(const CheckReport& r, const std::string& format) {
  if (format == "text") return report_to_text(r);
  nlohmann::json j = report_to_json(r);
  j["timestamp"] = timestamp_now();
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of metric characterizations for concrete operator spaces"};
  app.require_subcommand(1);

  CommonFlags check_common;
  CheckFlags check_flags;
  CLI::App* check = app.add_subcommand("check", "Run one criterion on a space file");
  check_common.add(check);
  check_flags.add(check);

  CommonFlags search_common;
  CheckFlags search_flags;
  CLI::App* search = app.add_subcommand("search", "Like check, with a larger budget and the search trace");
  search_common.add(search);
  search_flags.add(search);

  std::optional<int> trials;
  std::optional<std::uint64_t> formula_seed;
  std::string formula_format = "json";
  std::string formula_out;
  bool inject_bug = false;
  CLI::App* verify = app.add_subcommand("verify-formulas", "Run the randomized block-norm identity suites");
  verify->add_option("--trials", trials, "Trials per suite (overrides the defaults)");
  verify->add_option("--seed", formula_seed, "Master seed (falls back to $OPSPACE_SEED)");
  verify->add_option("--format", formula_format, "Report format")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--out", formula_out, "Write the report to this file");
  verify->add_flag("--inject-sign-bug", inject_bug)->group("");

  CommonFlags corpus_common;
  std::vector<std::string> only;
  std::string emit_dir;
  CLI::App* corpus_cmd = app.add_subcommand("corpus", "Run the built-in example corpus against expected verdicts");
  corpus_common.add(corpus_cmd);
  corpus_cmd->add_option("--only", only, "Restrict to these entry names");
  corpus_cmd->add_option("--emit-spaces", emit_dir, "Also write each entry's space JSON into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (check->parsed()) {
      const CheckReport r = check_flags.run(check_common.config());
      emit(render(r, check_common.format), check_common.out);
      return exit_code_for(r.verdict);
    }
    if (search->parsed()) {
      SearchConfig base;
      base.restarts = 4 * base.restarts;
      SearchConfig cfg = search_common.config(base);
      cfg.record_trace = true;
      const CheckReport r = search_flags.run(cfg);
      emit(render(r, search_common.format), search_common.out);
      return exit_code_for(r.verdict);
    }
    if (verify->parsed()) {
      formulas::Options opt;
      opt.trials = trials;
      opt.inject_sign_bug = inject_bug;
      CommonFlags seed_only;
      seed_only.seed = formula_seed;
      opt.seed = seed_only.config().seed;
      const auto results = formulas::run_all(opt);
      bool ok = true;
      for (const auto& r : results) ok = ok && r.passed();
      emit(formula_format == "text" ? formulas::to_text(results) : formulas::to_json(results, opt).dump(2) + "\n",
           formula_out);
      return ok ? 0 : 1;
    }
    if (corpus_cmd->parsed()) {
      const SearchConfig cfg = corpus_common.config();
      const auto entries = corpus::default_corpus();
      if (!emit_dir.empty()) corpus::emit_spaces(entries, emit_dir);
      const corpus::CorpusRun run = corpus::run_corpus(entries, cfg, only);
      if (corpus_common.format == "text") {
        emit(corpus::run_to_text(run), corpus_common.out);
      } else {
        nlohmann::json j = corpus::run_to_json(run, cfg);
        j["timestamp"] = timestamp_now();
        emit(j.dump(2) + "\n", corpus_common.out);
      }
      return run.all_matched() ? 0 : 1;
    }
  } catch (const opmetric::Error& e) {
    std::cerr << "opmetric: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "opmetric: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "opmetric: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
