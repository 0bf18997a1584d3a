#pragma once
/// @file serialize.hpp
/// @brief JSON documents for library results.

#include <json.hpp>

#include "sharpbmo/optimizer.hpp"
#include "sharpbmo/sharp_constant.hpp"
#include "sharpbmo/verify.hpp"

namespace sharpbmo {

nlohmann::json to_json(const Params& p);
nlohmann::json to_json(const Point3& x);
nlohmann::json to_json(const LeafCoords& leaf);
nlohmann::json to_json(const Gradient& g);
nlohmann::json to_json(const ConstantResult& c);
nlohmann::json to_json(const TestFunction& f);
nlohmann::json to_json(const ProbeReport& r);

// Non-finite numbers become null (JSON has no infinity).
nlohmann::json number(double v);

}  // namespace sharpbmo
