#pragma once
// JSON polygon files:
//   { "vertices": [[x0,x1,x2], ...], "ideal": [bool, ...], "orders": [int|"inf", ...] }
// "orders" is omitted for polygons that are not Coxeter.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "coxlab/format.hpp"
#include "coxlab/polygon.hpp"

namespace coxlab {

inline nlohmann::json polygon_json(const Polygon& P) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  j["ideal"] = nlohmann::json::array();
  for (const auto& v : P.vertices()) {
    j["vertices"].push_back({v.v.x0, v.v.x1, v.v.x2});
    j["ideal"].push_back(v.ideal);
  }
  return j;
}

inline nlohmann::json polygon_json(const CoxeterPolygon& P) {
  nlohmann::json j = polygon_json(P.shape);
  j["orders"] = nlohmann::json::array();
  for (const auto& o : P.orders) {
    if (o.is_infinite())
      j["orders"].push_back("inf");
    else
      j["orders"].push_back(o.value());
  }
  return j;
}

/// Parsed polygon file: Coxeter when orders are present.
using PolygonFile = std::variant<CoxeterPolygon, Polygon>;

inline const Polygon& shape_of(const PolygonFile& f) {
  return std::visit([](const auto& p) -> const Polygon& { return p; }, f);
}

/// Reads and validates a polygon; inputs are never repaired.
inline PolygonFile polygon_from_json(const nlohmann::json& j) {
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw DomainError("polygon: missing \"vertices\"");
  const auto& vs = j["vertices"];
  std::vector<bool> ideal(vs.size(), false);
  if (j.contains("ideal")) {
    if (j["ideal"].size() != vs.size()) throw DomainError("polygon: \"ideal\" length mismatch");
    for (std::size_t i = 0; i < vs.size(); ++i) ideal[i] = j["ideal"][i].get<bool>();
  }
  std::vector<Vertex> verts;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].size() != 3) throw DomainError("polygon: vertex must have three coordinates");
    const LorentzVector v{read_real(vs[i][0]), read_real(vs[i][1]), read_real(vs[i][2])};
    verts.push_back({v, ideal[i]});
  }
  Polygon P(std::move(verts));
  if (!is_convex(P)) throw DomainError("polygon: not convex or not counterclockwise");
  if (!j.contains("orders")) return P;
  const auto& os = j["orders"];
  if (os.size() != vs.size()) throw DomainError("polygon: \"orders\" length mismatch");
  std::vector<AngleOrder> orders;
  for (const auto& o : os) {
    if (o.is_string()) {
      if (o.get<std::string>() != "inf") throw DomainError("polygon: order must be an integer or \"inf\"");
      orders.push_back(AngleOrder::infinite());
    } else {
      orders.push_back(AngleOrder::finite(o.get<int>()));
    }
  }
  CoxeterPolygon C{std::move(P), std::move(orders)};
  const auto rep = validate_coxeter(C);
  if (!rep.passed) {
    throw DomainError("polygon: declared orders do not match the vertex angles (max deviation " +
                      fmt17(rep.max_deviation) + ")");
  }
  return C;
}

inline PolygonFile read_polygon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open polygon file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("polygon file is not valid JSON: ") + e.what());
  }
  return polygon_from_json(j);
}

}  // namespace coxlab
