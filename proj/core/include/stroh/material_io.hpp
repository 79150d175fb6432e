#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stroh/materials.hpp"

namespace stroh {

struct LoadedMaterial {
  Material material;
  // Non-fatal findings, currently only failed strong convexity.
  std::vector<std::string> warnings;
};

// Material document:
//   { "name": text, "density": number, "stiffness": S }
// with S one of
//   { "type": "isotropic", "lambda": x, "mu": x }
//   { "type": "transversely_isotropic", "lambda", "mu", "alpha", "beta", "gamma", "axis": [x, y, z] }
//   { "type": "voigt", "convention": "engineering", "matrix": 6x6 }
// Throws SchemaError on malformed documents and the usual validation errors otherwise.
LoadedMaterial parse_material(std::string_view json_text);
LoadedMaterial load_material(const std::string& path);

// Writes the Voigt form, which any material round-trips through.
std::string material_to_json(const Material& m);

}  // namespace stroh
