#include "esslab/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "esslab/errors.hpp"
#include "json.hpp"

namespace esslab {
namespace {

using nlohmann::json;

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ":" + std::to_string(col);
}

std::string field(const std::string& source, const std::string& name) {
  return source + ": field '" + name + "'";
}

int get_int(const json& j, const std::string& key, const std::string& source) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw FileFormatError(field(source, key), "expected an integer");
  return v.get<int>();
}

double get_number(const json& j, const std::string& key, const std::string& source) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw FileFormatError(field(source, key), "expected a number");
  return v.get<double>();
}

}  // namespace

AnyModel parse_model_json(std::string_view text, const std::string& source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FileFormatError(source + ": " + line_col(text, e.byte), "malformed JSON");
  }
  if (!j.is_object()) throw FileFormatError(source, "top level must be an object");

  static const std::set<std::string> known{"kind", "n", "k", "r_max", "warp_table"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw FileFormatError(field(source, key), "unknown field");
  }
  for (const char* req : {"kind", "n", "r_max"}) {
    if (!j.contains(req)) throw FileFormatError(field(source, req), "missing required field");
  }
  if (!j.at("kind").is_string()) throw FileFormatError(field(source, "kind"), "expected a string");
  const std::string kind = j.at("kind").get<std::string>();
  const int n = get_int(j, "n", source);
  if (n < 2) throw FileFormatError(field(source, "n"), "dimension must be >= 2");
  const double r_max = get_number(j, "r_max", source);
  if (!(r_max > 0.0)) throw FileFormatError(field(source, "r_max"), "must be positive");
  const bool has_k = j.contains("k");
  const bool has_table = j.contains("warp_table");
  if (has_table && kind != "warped-custom") {
    throw FileFormatError(field(source, "warp_table"), "only allowed for kind warped-custom");
  }
  if (has_k && kind != "cylinder-soliton" && kind != "gaussian-soliton") {
    throw FileFormatError(field(source, "k"), "only allowed for soliton kinds");
  }

  try {
    if (kind == "euclidean") return make_euclidean(n, r_max);
    if (kind == "hyperbolic") return make_hyperbolic(n, r_max);
    if (kind == "cusp") {
      if (n != 2) throw FileFormatError(field(source, "n"), "cusp model is a surface (n = 2)");
      return make_cusp(r_max);
    }
    if (kind == "warped-custom") {
      if (!has_table) throw FileFormatError(field(source, "warp_table"), "missing");
      const auto& t = j.at("warp_table");
      if (!t.is_array()) throw FileFormatError(field(source, "warp_table"), "expected an array");
      std::vector<double> r, g;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& row = t[i];
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
          throw FileFormatError(field(source, "warp_table[" + std::to_string(i) + "]"),
                                "expected [r, g]");
        }
        r.push_back(row[0].get<double>());
        g.push_back(row[1].get<double>());
        const bool origin = (i == 0 && r.back() == 0.0 && g.back() == 0.0);
        if (!origin && !(g.back() > 0.0)) {
          throw FileFormatError(field(source, "warp_table[" + std::to_string(i) + "]"),
                                "warp must be positive");
        }
      }
      return make_tabulated("warped-custom", n, std::move(r), std::move(g), r_max);
    }
    if (kind == "gaussian-soliton") {
      const int k = has_k ? get_int(j, "k", source) : 0;
      return make_soliton(SolitonStructure::gaussian, n, k, r_max);
    }
    if (kind == "cylinder-soliton") {
      if (!has_k) throw FileFormatError(field(source, "k"), "required for cylinder-soliton");
      return make_soliton(SolitonStructure::cylinder, n, get_int(j, "k", source), r_max);
    }
  } catch (const InvalidInput& e) {
    throw FileFormatError(source, e.what());
  }
  throw FileFormatError(field(source, "kind"), "unknown kind '" + kind + "'");
}

AnyModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileFormatError(path.string(), "cannot open model file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_json(ss.str(), path.string());
}

std::string describe_model_json(const AnyModel& model) {
  json j;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        j["name"] = m.name();
        j["n"] = m.dimension();
        if constexpr (std::is_same_v<T, WarpedModel>) {
          j["family"] = "warped";
          j["kind"] = to_string(m.kind());
          j["r_lo"] = m.r_lo();
          j["r_max"] = m.r_max();
          j["pole"] = m.has_pole();
          j["sphere_area"] = m.sphere_area();
        } else {
          j["family"] = "soliton";
          j["k"] = m.sphere_dim();
          j["scalar_curvature"] = m.scalar_curvature();
          j["sphere_radius"] = m.sphere_radius();
          j["rho_min"] = m.rho_min();
          j["rho_max"] = m.rho_max();
        }
      },
      model);
  return j.dump();
}

}  // namespace esslab
