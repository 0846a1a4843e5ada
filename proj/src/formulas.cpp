#include "opmetric/formulas.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "opmetric/corpus.hpp"
#include "opmetric/errors.hpp"
#include "opmetric/gadgets.hpp"
#include "opmetric/report.hpp"

namespace opmetric::formulas {

namespace {

constexpr double kPairTolerance = 1e-9;
constexpr double kGadgetTolerance = 1e-8;

int trials_or(const Options& opt, int fallback) {
  const int t = opt.trials.value_or(fallback);
  if (t < 1) throw InvalidInput("formula suites: trials must be positive");
  return t;
}

// Random element of M_n(X) with norm drawn uniformly from (0, 2].
LevelElement random_level_element(const SpaceRep& s, int n, RngStream& rng) {
  LevelElement x = LevelElement::square(n, s.dim());
  for (Eigen::Index i = 0; i < x.coeffs().size(); ++i) x.coeffs()(i) = rng.complex_normal();
  const double target = 2.0 * (1.0 - rng.uniform());
  return x.scaled(target / s.norm(x));
}

double t_closed_form(double nx) { return 0.5 * (2.0 + nx * nx + nx * std::sqrt(nx * nx + 4.0)); }

}  // namespace

SuiteResult block_symmetric(const Options& opt) {
  SuiteResult r{"block-symmetric", "||[[a,b],[b,a]]|| = max(||a+b||, ||a-b||)", trials_or(opt, 200), 0.0,
                kPairTolerance};
  RngStream rng(derive_seed(opt.seed, 1), 0);
  for (int t = 0; t < r.trials; ++t) {
    const CMat a = rand_cmat(3, 3, rng);
    const CMat b = rand_cmat(3, 3, rng);
    const double lhs = op_norm(block({{a, b}, {b, a}}));
    const double rhs = std::max(op_norm(a + b), op_norm(a - b));
    r.max_deviation = std::max(r.max_deviation, std::abs(lhs - rhs));
  }
  return r;
}

SuiteResult block_rotation(const Options& opt) {
  SuiteResult r{"block-rotation", "||[[a,-b],[b,a]]|| = max(||a+ib||, ||a-ib||)", trials_or(opt, 200), 0.0,
                kPairTolerance};
  RngStream rng(derive_seed(opt.seed, 2), 0);
  const cplx i(0.0, 1.0);
  const double sign = opt.inject_sign_bug ? 1.0 : -1.0;
  for (int t = 0; t < r.trials; ++t) {
    const CMat a = rand_cmat(3, 3, rng);
    const CMat b = rand_cmat(3, 3, rng);
    const double lhs = op_norm(block({{a, sign * b}, {b, a}}));
    const double rhs = std::max(op_norm(a + i * b), op_norm(a - i * b));
    r.max_deviation = std::max(r.max_deviation, std::abs(lhs - rhs));
  }
  return r;
}

SuiteResult t_gadget_closed_form(const Options& opt) {
  SuiteResult r{"t-gadget-closed-form", "||t_x||^2 = (2 + ||x||^2 + ||x|| sqrt(||x||^2 + 4)) / 2", 0, 0.0,
                kGadgetTolerance};
  const int per = trials_or(opt, 100);
  RngStream rng(derive_seed(opt.seed, 3), 0);
  const std::vector<SpaceRep> spaces = {corpus::full_matrix_space(2), corpus::full_matrix_space(3),
                                        corpus::upper_triangular_space(2)};
  for (const SpaceRep& s : spaces) {
    const CVec& v = *s.unit();
    for (int n = 1; n <= 2; ++n) {
      for (int t = 0; t < per; ++t) {
        const LevelElement x = random_level_element(s, n, rng);
        const double g = op_norm(gadgets::build_t(s, v, x));
        r.max_deviation = std::max(r.max_deviation, std::abs(g * g - t_closed_form(s.norm(x))));
        ++r.trials;
      }
    }
    // Spot value at ‖x‖ = 1: (3 + √5)/2.
    LevelElement x = random_level_element(s, 1, rng);
    x = x.scaled(1.0 / s.norm(x));
    const double g = op_norm(gadgets::build_t(s, v, x));
    r.max_deviation = std::max(r.max_deviation, std::abs(g * g - (3.0 + std::sqrt(5.0)) / 2.0));
    ++r.trials;
  }
  return r;
}

namespace {

SuiteResult gadget_suite(const Options& opt, SuiteResult r, std::uint64_t salt,
                         double (*deviation)(const SpaceRep&, const CVec&, const LevelElement&)) {
  const int per = trials_or(opt, 100);
  RngStream rng(derive_seed(opt.seed, salt), 0);
  for (int d : {2, 3}) {
    const SpaceRep s = corpus::full_matrix_space(d);
    for (int n = 1; n <= 2; ++n) {
      for (int t = 0; t < per; ++t) {
        r.max_deviation = std::max(r.max_deviation, deviation(s, *s.unit(), random_level_element(s, n, rng)));
        ++r.trials;
      }
    }
  }
  return r;
}

}  // namespace

SuiteResult s_gadget_norm(const Options& opt) {
  return gadget_suite(opt, {"s-gadget-norm", "||[[1,x],[x*,1]]|| = 1 + ||x||", 0, 0.0, kGadgetTolerance}, 4,
                      &criteria::s_gadget_deviation);
}

SuiteResult r_gadget_norm(const Options& opt) {
  return gadget_suite(opt, {"r-gadget-norm", "||[[1,x],[-x*,1]]|| = sqrt(1 + ||x||^2)", 0, 0.0, kGadgetTolerance},
                      5, &criteria::operator_system_deviation);
}

SuiteResult row_norm_one(const Options& opt) {
  SuiteResult r{"row-norm-one", "||[1_n x]||^2 = 2 for ||x|| = 1", 0, 0.0, kGadgetTolerance};
  const int per = trials_or(opt, 200);
  RngStream rng(derive_seed(opt.seed, 6), 0);
  const SpaceRep s = corpus::full_matrix_space(2);
  for (int n = 1; n <= 2; ++n) {
    for (int t = 0; t < per; ++t) {
      LevelElement x = random_level_element(s, n, rng);
      x = x.scaled(1.0 / s.norm(x));
      const double g = op_norm(gadgets::build_row(s, *s.unit(), x));
      r.max_deviation = std::max(r.max_deviation, std::abs(g * g - 2.0));
      ++r.trials;
    }
  }
  return r;
}

std::vector<SuiteResult> run_all(const Options& opt) {
  return {block_symmetric(opt), block_rotation(opt), t_gadget_closed_form(opt),
          s_gadget_norm(opt),   r_gadget_norm(opt),  row_norm_one(opt)};
}

nlohmann::json to_json(const std::vector<SuiteResult>& results, const Options& opt) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["seed"] = opt.seed;
  j["suites"] = nlohmann::json::array();
  bool all = true;
  for (const SuiteResult& r : results) {
    all = all && r.passed();
    j["suites"].push_back({{"name", r.name},
                           {"identity", r.identity},
                           {"trials", r.trials},
                           {"max_deviation", r.max_deviation},
                           {"tolerance", r.tolerance},
                           {"passed", r.passed()}});
  }
  j["passed"] = all;
  return j;
}

std::string to_text(const std::vector<SuiteResult>& results) {
  std::ostringstream out;
  for (const SuiteResult& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-22s %-5s trials=%-5d max|dev|=%.3e (tol %.0e)  %s\n", r.name.c_str(),
                  r.passed() ? "PASS" : "FAIL", r.trials, r.max_deviation, r.tolerance, r.identity.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace opmetric::formulas
