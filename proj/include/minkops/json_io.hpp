#pragma once

#include <string>

#include <json.hpp>

#include "minkops/geometry.hpp"

namespace minkops {

using Json = nlohmann::ordered_json;

/// Serializes with every double printed as %.17g.
std::string dump_json(const Json& j, int indent = 2);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json mat_to_json(const Mat& m);  // row-major list of rows
Mat mat_from_json(const Json& j);

/// {"type": "polygon2"|"zonotope"|"segment"|"point", ...}
Json body_to_json(const Body& k);
/// Throws GeometryError on schema violations.
Body body_from_json(const Json& j);

}  // namespace minkops
