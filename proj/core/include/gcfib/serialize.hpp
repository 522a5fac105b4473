#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gcfib/curvature.hpp"
#include "gcfib/fibration.hpp"
#include "gcfib/grassmann.hpp"
#include "gcfib/volume.hpp"

namespace gcfib {

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const Vec4& v);
nlohmann::json to_json(const Mat2& m);  // [[a, b], [c, d]]
nlohmann::json to_json(const Mat4& m);  // row-major nested lists

nlohmann::json to_json(const FibrationReport& r);
nlohmann::json to_json(const GageDecomposition& g);
nlohmann::json to_json(const CurvatureTensor4& r);  // 20 labeled components
nlohmann::json to_json(const PropertyReport& r);
nlohmann::json to_json(const BergerMetricReport& r);

const char* domain_factor_name(DomainFactor f);

// Two-space indented dump with trailing newline; map keys are sorted, floats
// shortest-round-trip, so output is byte-stable.
std::string json_dump(const nlohmann::json& j);

std::string surface_csv(const std::vector<SurfacePoint>& pts);
std::string berger_csv(const std::vector<BergerMetricReport>& rows);

}  // namespace gcfib
