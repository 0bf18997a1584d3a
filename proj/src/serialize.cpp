#include "sharpbmo/serialize.hpp"

#include <cmath>

namespace sharpbmo {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const Params& p) {
  return {{"p", p.p}, {"r", p.r}, {"eps", p.eps}, {"rel_tol", p.ctx.rel_tol}};
}

json to_json(const Point3& x) { return {{"x1", x.x1}, {"x2", x.x2}, {"x3", x.x3}}; }

namespace {

struct LeafVisitor {
  json operator()(const FanLeft& l) const {
    return {{"kind", "fan_left"}, {"u", l.u}, {"v", l.v}, {"xi", number(l.xi)}, {"h", l.h}};
  }
  json operator()(const FanRight& l) const {
    return {{"kind", "fan_right"}, {"u", l.u}, {"v", l.v}, {"xi", l.xi}, {"h", l.h}};
  }
  json operator()(const Chord& l) const { return {{"kind", "chord"}, {"a", l.a}, {"b", l.b}}; }
  json operator()(const RLeaf& l) const { return {{"kind", "r_leaf"}, {"v", l.v}}; }
  json operator()(const F0Leaf& l) const {
    return {{"kind", "f0"}, {"xi", number(l.xi)}, {"h", l.h}};
  }
  json operator()(const B1Triangle& l) const { return {{"kind", "b1_triangle"}, {"v", l.v}}; }
  json operator()(const B1Trapezoid& l) const { return {{"kind", "b1_trapezoid"}, {"v", l.v}}; }
};

struct PieceVisitor {
  json operator()(const ConstPiece& c) const { return {{"kind", "const"}, {"value", c.value}}; }
  json operator()(const LogPiece& g) const {
    return {{"kind", "log"},
            {"sign", g.sign},
            {"scale", g.scale},
            {"arg_start", g.arg_start},
            {"arg_end", g.arg_end}};
  }
};

}  // namespace

json to_json(const LeafCoords& leaf) { return std::visit(LeafVisitor{}, leaf); }

json to_json(const Gradient& g) {
  return {{"d_dx2", g.d_dx2}, {"d_dx3", g.d_dx3}, {"finite_difference", g.finite_difference}};
}

json to_json(const ConstantResult& c) {
  return {{"c", c.c},
          {"branch", to_string(c.branch)},
          {"xi_star", c.xi_star ? json(*c.xi_star) : json(nullptr)},
          {"x3_star", c.x3_star ? json(*c.x3_star) : json(nullptr)},
          {"near_two_fallback", c.near_two_fallback}};
}

json to_json(const TestFunction& f) {
  json segs = json::array();
  for (const auto& s : f.segments) {
    json j = std::visit(PieceVisitor{}, s.kind);
    j["t_start"] = s.t_start;
    j["t_end"] = s.t_end;
    segs.push_back(std::move(j));
  }
  return {{"length", f.length}, {"segments", std::move(segs)}};
}

json to_json(const ProbeReport& r) {
  return {{"name", r.name},
          {"n_samples", r.n_samples},
          {"worst_violation", number(r.worst_violation)},
          {"threshold", r.threshold},
          {"passed", r.passed},
          {"worst_point", to_json(r.worst_point)},
          {"worst_point_end", to_json(r.worst_point_end)},
          {"statistic", number(r.statistic)}};
}

}  // namespace sharpbmo
