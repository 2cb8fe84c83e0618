#include "minkops/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace minkops {

namespace {

void write_number(std::ostringstream& out, double x) {
  if (!std::isfinite(x)) {
    out << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << buf;
}

void write(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << "," << nl;
        first = false;
        out << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(out, it.value(), indent, depth + 1);
      }
      out << nl << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& x : j) flat = flat && !x.is_structured();
      if (flat || indent == 0) {
        out << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << (indent > 0 ? ", " : ",");
          write(out, j[i], indent, depth + 1);
        }
        out << "]";
        return;
      }
      out << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << "," << nl;
        out << pad;
        write(out, j[i], indent, depth + 1);
      }
      out << nl << close_pad << "]";
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream out;
  write(out, j, indent, 0);
  return out.str();
}

Json vec_to_json(const Vec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw GeometryError("json: expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw GeometryError("json: expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r).transpose()));
  return rows;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw GeometryError("json: expected a non-empty list of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = vec_from_json(j[r]);
    if (row.size() != cols) throw GeometryError("json: ragged matrix");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Json body_to_json(const Body& k) {
  Json j;
  j["type"] = k.type_name();
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          j["vertices"] = Json::array({vec_to_json(s.p)});
        } else if constexpr (std::is_same_v<T, Segment>) {
          j["vertices"] = Json::array({vec_to_json(s.a), vec_to_json(s.b)});
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          Json vs = Json::array();
          for (const auto& v : s.vertices()) vs.push_back(Json::array({v.x(), v.y()}));
          j["vertices"] = vs;
        } else {
          j["center"] = vec_to_json(s.center());
          Json gs = Json::array();
          for (const auto& g : s.generators()) gs.push_back(vec_to_json(g));
          j["generators"] = gs;
        }
      },
      k.shape());
  return j;
}

Body body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw GeometryError("body json: missing \"type\"");
  const std::string type = j["type"].get<std::string>();
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    if (key != "type" && key != "vertices" && key != "center" && key != "generators")
      throw GeometryError("body json: unknown key \"" + key + "\"");
  }
  auto vertices = [&j]() {
    if (!j.contains("vertices") || !j["vertices"].is_array())
      throw GeometryError("body json: missing \"vertices\"");
    std::vector<Vec> vs;
    for (const auto& v : j["vertices"]) vs.push_back(vec_from_json(v));
    return vs;
  };
  if (type == "point") {
    const auto vs = vertices();
    if (vs.size() != 1) throw GeometryError("body json: point needs exactly one vertex");
    return make_point(vs[0]);
  }
  if (type == "segment") {
    const auto vs = vertices();
    if (vs.size() != 2) throw GeometryError("body json: segment needs exactly two vertices");
    return make_segment(vs[0], vs[1]);
  }
  if (type == "polygon2") {
    std::vector<Vec2> vs;
    for (const auto& v : vertices()) {
      if (v.size() != 2) throw GeometryError("body json: polygon2 vertices must be planar");
      vs.emplace_back(v(0), v(1));
    }
    return make_polygon(std::move(vs));
  }
  if (type == "zonotope") {
    if (!j.contains("center")) throw GeometryError("body json: zonotope needs \"center\"");
    std::vector<Vec> gens;
    if (j.contains("generators")) {
      if (!j["generators"].is_array()) throw GeometryError("body json: \"generators\" must be a list");
      for (const auto& g : j["generators"]) gens.push_back(vec_from_json(g));
    }
    return make_zonotope(vec_from_json(j["center"]), gens);
  }
  throw GeometryError("body json: unknown type \"" + type + "\"");
}

}  // namespace minkops
