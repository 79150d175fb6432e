#include "stroh/material_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stroh/error.hpp"

namespace stroh {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::SchemaError, msg); }

double number(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(std::string("missing field '") + key + "'");
  if (!it->is_number()) schema(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

StiffnessTensor parse_stiffness(const json& s) {
  if (!s.is_object()) schema("'stiffness' must be an object");
  auto type_it = s.find("type");
  if (type_it == s.end() || !type_it->is_string()) schema("'stiffness.type' must be a string");
  const std::string type = type_it->get<std::string>();

  if (type == "isotropic") {
    return make_isotropic(number(s, "lambda"), number(s, "mu"), 1.0).stiffness;
  }
  if (type == "transversely_isotropic") {
    TransverseIsotropyParams p{number(s, "lambda"), number(s, "mu"), number(s, "alpha"),
                               number(s, "beta"), number(s, "gamma")};
    auto axis_it = s.find("axis");
    if (axis_it == s.end() || !axis_it->is_array() || axis_it->size() != 3) {
      schema("'axis' must be an array of 3 numbers");
    }
    Vec3 axis;
    for (int i = 0; i < 3; ++i) {
      if (!(*axis_it)[i].is_number()) schema("'axis' entries must be numbers");
      axis(i) = (*axis_it)[i].get<double>();
    }
    return transversely_isotropic_stiffness(p, axis);
  }
  if (type == "voigt") {
    auto conv = s.find("convention");
    if (conv != s.end() && (!conv->is_string() || conv->get<std::string>() != "engineering")) {
      schema("only the 'engineering' Voigt convention is supported");
    }
    auto m = s.find("matrix");
    if (m == s.end() || !m->is_array() || m->size() != 6) schema("'matrix' must be 6x6");
    Mat6 v;
    for (int i = 0; i < 6; ++i) {
      const json& row = (*m)[i];
      if (!row.is_array() || row.size() != 6) schema("'matrix' must be 6x6");
      for (int j = 0; j < 6; ++j) {
        if (!row[j].is_number()) schema("'matrix' entries must be numbers");
        v(i, j) = row[j].get<double>();
      }
    }
    return StiffnessTensor::from_voigt(v);
  }
  schema("unknown stiffness type '" + type + "'");
}

}  // namespace

LoadedMaterial parse_material(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("material document must be an object");
  std::string name = "material";
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) schema("'name' must be a string");
    name = it->get<std::string>();
  }
  const double density = number(doc, "density");
  auto st = doc.find("stiffness");
  if (st == doc.end()) schema("missing field 'stiffness'");

  LoadedMaterial out{Material(name, parse_stiffness(*st), density), {}};
  const ConvexityReport conv = check_strong_convexity(out.material.stiffness);
  if (!conv.strongly_convex) {
    std::ostringstream w;
    w.precision(17);
    w << "stiffness is not strongly convex (min Mandel eigenvalue " << conv.min_eigenvalue << ")";
    out.warnings.push_back(w.str());
  }
  return out;
}

LoadedMaterial load_material(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot open material file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_material(buf.str());
}

std::string material_to_json(const Material& m) {
  const Mat6 v = m.stiffness.to_voigt();
  json matrix = json::array();
  for (int i = 0; i < 6; ++i) {
    json row = json::array();
    for (int j = 0; j < 6; ++j) row.push_back(v(i, j));
    matrix.push_back(row);
  }
  json doc = {{"name", m.name},
              {"density", m.density},
              {"stiffness", {{"type", "voigt"}, {"convention", "engineering"}, {"matrix", matrix}}}};
  return doc.dump(2);
}

}  // namespace stroh
