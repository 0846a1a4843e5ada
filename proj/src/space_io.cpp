#include "opmetric/space_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "opmetric/errors.hpp"

namespace opmetric {

using nlohmann::json;

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVec vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a list of complex numbers");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json matrix_to_flat_json(const CMat& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_to_json(m(i, c)));
  return out;
}

CMat matrix_from_flat_json(const json& j, int rows, int cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows) * cols) {
    throw ParseError("matrix has " + std::to_string(j.is_array() ? j.size() : 0) + " entries, expected " +
                     std::to_string(rows * cols));
  }
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[static_cast<std::size_t>(i) * cols + c]);
  return m;
}

json matrix_to_rows_json(const CMat& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(i, c)));
    out.push_back(std::move(row));
  }
  return out;
}

CMat matrix_from_rows_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("expected a list of matrix rows");
  const std::size_t cols = j[0].size();
  CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError("matrix rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = complex_from_json(j[i][c]);
    }
  }
  return m;
}

namespace {

const std::set<std::string> kKnownFields = {"p",          "q",         "basis",        "unit",
                                            "involution", "norm_mode", "level1_oracle"};

int positive_int(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("space: missing field \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ParseError(std::string("space: field \"") + key + "\" must be a positive integer");
  }
  return v.get<int>();
}

}  // namespace

SpaceRep load_space(std::string_view document, double rank_tolerance) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("space: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("space: document must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!kKnownFields.count(item.key())) throw ParseError("space: unknown field \"" + item.key() + "\"");
  }

  SpaceDefinition def;
  def.p = positive_int(doc, "p");
  def.q = positive_int(doc, "q");
  if (!doc.contains("basis") || !doc.at("basis").is_array()) throw ParseError("space: missing basis list");
  for (const json& b : doc.at("basis")) def.basis.push_back(matrix_from_flat_json(b, def.p, def.q));

  if (doc.contains("unit") && !doc.at("unit").is_null()) def.unit = vector_from_json(doc.at("unit"));
  if (doc.contains("involution") && !doc.at("involution").is_null()) {
    def.involution = matrix_from_rows_json(doc.at("involution"));
  }
  const std::string mode = doc.value("norm_mode", std::string("embedded"));
  if (mode == "embedded") {
    def.norm_mode = NormMode::Embedded;
  } else if (mode == "level1-oracle") {
    def.norm_mode = NormMode::Level1Oracle;
  } else {
    throw ParseError("space: unknown norm_mode \"" + mode + "\"");
  }
  if (doc.contains("level1_oracle") && !doc.at("level1_oracle").is_null()) {
    const std::string name = doc.at("level1_oracle").get<std::string>();
    if (name != "trace_norm") throw ParseError("space: unknown level1_oracle \"" + name + "\"");
    def.level1_oracle = Level1Oracle::TraceNorm;
  }
  return SpaceRep::create(std::move(def), rank_tolerance);
}

SpaceRep load_space_file(const std::string& path, double rank_tolerance) {
  std::ifstream in(path);
  if (!in) throw ParseError("space: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_space(buffer.str(), rank_tolerance);
}

json space_to_json(const SpaceRep& space) {
  json doc;
  doc["p"] = space.p();
  doc["q"] = space.q();
  json basis = json::array();
  for (const CMat& b : space.basis()) basis.push_back(matrix_to_flat_json(b));
  doc["basis"] = std::move(basis);
  if (space.unit()) doc["unit"] = vector_to_json(*space.unit());
  if (space.involution()) doc["involution"] = matrix_to_rows_json(*space.involution());
  doc["norm_mode"] = to_string(space.norm_mode());
  if (space.level1_oracle()) doc["level1_oracle"] = to_string(*space.level1_oracle());
  return doc;
}

}  // namespace opmetric
