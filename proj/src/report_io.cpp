#include <cmath>
#include <cstdio>
#include <sstream>

#include "opmetric/errors.hpp"
#include "opmetric/report.hpp"
#include "opmetric/space_io.hpp"

namespace opmetric {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsWithinBudget: return "HOLDS_WITHIN_BUDGET";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::UnsupportedLevel: return "UNSUPPORTED_LEVEL";
  }
  return "INCONCLUSIVE";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "HOLDS_WITHIN_BUDGET") return Verdict::HoldsWithinBudget;
  if (s == "VIOLATED") return Verdict::Violated;
  if (s == "INCONCLUSIVE") return Verdict::Inconclusive;
  if (s == "UNSUPPORTED_LEVEL") return Verdict::UnsupportedLevel;
  throw ParseError("unknown verdict '" + s + "'");
}

json config_to_json(const SearchConfig& cfg) {
  return json{{"tolerance", cfg.tolerance},       {"max_level", cfg.max_level},   {"radius", cfg.radius},
              {"restarts", cfg.restarts},         {"ascent_steps", cfg.ascent_steps}, {"step_size", cfg.step_size},
              {"circle_samples", cfg.circle_samples}, {"t_max", cfg.t_max},       {"b_samples", cfg.b_samples},
              {"seed", cfg.seed}};
}

SearchConfig config_from_json(const json& j) {
  try {
    SearchConfig cfg;
    cfg.tolerance = j.at("tolerance").get<double>();
    cfg.max_level = j.at("max_level").get<int>();
    cfg.radius = j.at("radius").get<double>();
    cfg.restarts = j.at("restarts").get<int>();
    cfg.ascent_steps = j.at("ascent_steps").get<int>();
    cfg.step_size = j.at("step_size").get<double>();
    cfg.circle_samples = j.at("circle_samples").get<int>();
    cfg.t_max = j.at("t_max").get<double>();
    cfg.b_samples = j.at("b_samples").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

json level_element_to_json(const LevelElement& x) {
  json j{{"rows", x.rows()}, {"cols", x.cols()}, {"dim", x.dim()}, {"coeffs", vector_to_json(x.coeffs())}};
  if (x.is_square()) j["level"] = x.rows();
  return j;
}

LevelElement level_element_from_json(const json& j) {
  try {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const int dim = j.at("dim").get<int>();
    return LevelElement(rows, cols, dim, vector_from_json(j.at("coeffs")));
  } catch (const json::exception& e) {
    throw ParseError(std::string("level element: ") + e.what());
  }
}

namespace {

json witness_to_json(const Witness& w) {
  json j = json::object();
  if (w.point) j = level_element_to_json(*w.point);
  j["aux"] = json::object();
  for (const auto& [k, v] : w.aux) j["aux"][k] = v;
  j["operands"] = json::object();
  for (const auto& [k, v] : w.operands) j["operands"][k] = vector_to_json(v);
  return j;
}

Witness witness_from_json(const json& j) {
  Witness w;
  if (j.contains("coeffs")) w.point = level_element_from_json(j);
  for (const auto& [k, v] : j.at("aux").items()) w.aux[k] = v.get<double>();
  for (const auto& [k, v] : j.at("operands").items()) w.operands[k] = vector_from_json(v);
  return w;
}

}  // namespace

json report_to_json(const CheckReport& r) {
  json j;
  j["criterion"] = r.criterion;
  j["verdict"] = to_string(r.verdict);
  j["margin"] = r.margin;
  j["witness"] = r.witness ? witness_to_json(*r.witness) : json(nullptr);
  j["samples"] = r.samples;
  j["levels_checked"] = r.levels_checked;
  j["config"] = config_to_json(r.config);
  j["qualifier"] = r.qualifier;
  j["subchecks"] = json::array();
  for (const SubCheck& s : r.subchecks) {
    j["subchecks"].push_back({{"name", s.name}, {"verdict", to_string(s.verdict)}, {"margin", s.margin}});
  }
  j["cross_validation"] = r.cross_validation_agree ? json(*r.cross_validation_agree) : json(nullptr);
  j["tool_version"] = kToolVersion;
  if (!r.trace.empty()) j["trace"] = r.trace;
  return j;
}

CheckReport report_from_json(const json& j) {
  try {
    CheckReport r;
    r.criterion = j.at("criterion").get<std::string>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.margin = j.at("margin").get<double>();
    if (!j.at("witness").is_null()) r.witness = witness_from_json(j.at("witness"));
    r.samples = j.at("samples").get<long long>();
    r.levels_checked = j.at("levels_checked").get<std::vector<int>>();
    r.config = config_from_json(j.at("config"));
    r.qualifier = j.value("qualifier", std::string());
    for (const json& s : j.value("subchecks", json::array())) {
      r.subchecks.push_back({s.at("name").get<std::string>(), verdict_from_string(s.at("verdict").get<std::string>()),
                             s.at("margin").get<double>()});
    }
    if (j.contains("cross_validation") && !j.at("cross_validation").is_null()) {
      r.cross_validation_agree = j.at("cross_validation").get<bool>();
    }
    if (j.contains("trace")) r.trace = j.at("trace").get<std::vector<std::vector<double>>>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string inequality_of(const std::string& id) {
  if (id == "unitary-four-rotation") return "max_k ||u_n + i^k x|| >= sqrt(1 + ||x||)";
  if (id == "unitary-t-gadget") return "||[[v_n, x], [0, v_n]]|| >= sqrt(1 + ||x||)";
  if (id == "coisometry") return "||[u_n  x]|| = sqrt(2) for ||x|| = 1";
  if (id == "isometry") return "||[u_n ; x]|| = sqrt(2) for ||x|| = 1";
  if (id == "operator-system") return "||[[v_n, x], [-x*, v_n]]|| = sqrt(1 + ||x||^2)";
  if (id == "s-gadget") return "||[[v_n, x], [x*, v_n]]|| = 1 + ||x||";
  if (id == "positive") return "||1 - z x|| <= 1 for |1 - z| <= 1";
  if (id == "adjoint") return "||[[t, x], [-z, t]]|| <= sqrt(1 + t^2) for real t";
  if (id == "mult-closed") return "B_i B_j in A, and ||[[0, y, 1, 0], [2, x, z, b]]|| = ||[2, x, z, b]||";
  if (id == "multiplier") return "w A, A w or A w A inside A";
  if (id == "left-multiplier-map") return "||[T(a); b]|| <= ||[a; b]||";
  if (id == "algebra-product") return "u coisometry, m(x, .) contractive left multiplier, m(x, u) = x";
  if (id == "cstar-among-systems") return "||[M+- (x) I_m, w]|| = sqrt(2) for ||w|| = 1";
  return "";
}

}  // namespace

std::string report_to_text(const CheckReport& r) {
  std::ostringstream out;
  out << "criterion: " << r.criterion << "\n";
  const std::string ineq = inequality_of(r.criterion);
  if (!ineq.empty()) out << "condition: " << ineq << "\n";
  out << "verdict:   " << to_string(r.verdict) << "\n";
  out << "margin:    " << num(r.margin) << "  (tolerance " << num(r.config.tolerance) << ")\n";
  out << "levels:   ";
  for (int n : r.levels_checked) out << ' ' << n;
  out << "\nsamples:   " << r.samples << "\n";
  if (!r.qualifier.empty()) out << "note:      " << r.qualifier << "\n";
  for (const SubCheck& s : r.subchecks) {
    out << "  sub-check " << s.name << ": " << to_string(s.verdict) << ", margin " << num(s.margin) << "\n";
  }
  if (r.cross_validation_agree) out << "paths agree: " << (*r.cross_validation_agree ? "yes" : "NO") << "\n";
  if (r.witness) {
    out << "witness:\n";
    if (r.witness->point) {
      const LevelElement& p = *r.witness->point;
      out << "  grid " << p.rows() << "x" << p.cols() << " over " << p.dim() << " basis elements\n";
      for (int i = 0; i < p.rows(); ++i) {
        for (int jj = 0; jj < p.cols(); ++jj) {
          out << "  [" << i << "," << jj << "]";
          const auto cell = p.cell(i, jj);
          for (Eigen::Index l = 0; l < cell.size(); ++l) {
            out << ' ' << num(cell(l).real()) << (cell(l).imag() < 0 ? "-" : "+") << num(std::abs(cell(l).imag()))
                << "i";
          }
          out << "\n";
        }
      }
    }
    for (const auto& [k, v] : r.witness->aux) out << "  " << k << " = " << num(v) << "\n";
    for (const auto& [k, v] : r.witness->operands) {
      out << "  " << k << " =";
      for (Eigen::Index l = 0; l < v.size(); ++l) {
        out << ' ' << num(v(l).real()) << (v(l).imag() < 0 ? "-" : "+") << num(std::abs(v(l).imag())) << "i";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace opmetric
