#include "nbv/scene.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "nbv/errors.hpp"

namespace nbv {

namespace {

double sphere_sdf(const Vec3& p, double radius) { return norm(p) - radius; }

double box_sdf(const Vec3& p, double half) {
  const Vec3 q{std::abs(p.x) - half, std::abs(p.y) - half, std::abs(p.z) - half};
  const Vec3 qp{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
  return norm(qp) + std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
}

// Capsule along z: segment half-length = size, radius = size / 2.
double capsule_sdf(const Vec3& p, double size) {
  const double zc = std::clamp(p.z, -size, size);
  return norm(Vec3{p.x, p.y, p.z - zc}) - 0.5 * size;
}

// Conservative bounding radius used by the bounds-intersection check.
double primitive_reach(const Primitive& prim) {
  switch (prim.shape) {
    case Shape::Sphere:
      return prim.size;
    case Shape::Box:
      return prim.size * std::sqrt(3.0);
    case Shape::Capsule:
      return prim.size * 1.5;
  }
  return prim.size;
}

class PrimitiveField final : public OccupancyField {
 public:
  explicit PrimitiveField(SceneSpec spec) : spec_(std::move(spec)) {}

  double occupancy_at(const Vec3& p) const override {
    if (!bounds_.contains(p)) return 0.0;
    return sdf_to_occupancy(composite_sdf(spec_, p), spec_.sharpness);
  }

  Vec3 colour_at(const Vec3& p) const override {
    if (!bounds_.contains(p)) return {0, 0, 0};
    double best = std::numeric_limits<double>::infinity();
    const Primitive* hit = &spec_.primitives.front();
    for (const Primitive& prim : spec_.primitives) {
      const double a = std::abs(primitive_sdf(prim, p));
      if (a < best) {
        best = a;
        hit = &prim;
      }
    }
    return hit->colour;
  }

  const char* kind() const override { return "primitive-composite"; }

 private:
  SceneSpec spec_;
  Aabb bounds_ = canonical_bounds();
};

}  // namespace

void SceneSpec::validate() const {
  if (primitives.empty()) throw SpecError("scene has no primitives");
  if (!(sharpness > 0.0) || !std::isfinite(sharpness))
    throw SpecError("scene sharpness must be a positive finite number");
  const Aabb box = canonical_bounds();
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const Primitive& prim = primitives[i];
    if (!(prim.size > 0.0) || !std::isfinite(prim.size))
      throw SpecError("primitive " + std::to_string(i) + " has non-positive size");
    const double reach = primitive_reach(prim);
    bool intersects = true;
    for (int a = 0; a < 3; ++a) {
      if (prim.center[a] + reach < box.lo[a] || prim.center[a] - reach > box.hi[a])
        intersects = false;
    }
    if (!intersects)
      throw SpecError("primitive " + std::to_string(i) +
                      " lies entirely outside the canonical bounds");
  }
  for (const CsgStep& step : csg) {
    if (step.index < 0 || step.index >= static_cast<int>(primitives.size()))
      throw SpecError("csg step references primitive " + std::to_string(step.index) +
                      " out of range");
  }
}

double primitive_sdf(const Primitive& prim, const Vec3& p) {
  const Vec3 local = p - prim.center;
  switch (prim.shape) {
    case Shape::Sphere:
      return sphere_sdf(local, prim.size);
    case Shape::Box:
      return box_sdf(local, prim.size);
    case Shape::Capsule:
      return capsule_sdf(local, prim.size);
  }
  return sphere_sdf(local, prim.size);
}

double composite_sdf(const SceneSpec& spec, const Vec3& p) {
  if (spec.csg.empty()) {
    double acc = std::numeric_limits<double>::infinity();
    for (const Primitive& prim : spec.primitives)
      acc = std::min(acc, primitive_sdf(prim, p));
    return acc;
  }
  double acc = std::numeric_limits<double>::infinity();
  for (const CsgStep& step : spec.csg) {
    const double d = primitive_sdf(spec.primitives[step.index], p);
    acc = step.op == CsgOp::Union ? std::min(acc, d) : std::max(acc, -d);
  }
  return acc;
}

double sdf_to_occupancy(double sdf, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("sharpness k must be > 0");
  if (!std::isfinite(sdf)) throw DomainError("sdf must be finite");
  // exp(k*sdf) overflows for far-outside points; the limit is 0.
  const double a = k * sdf;
  if (a > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(a));
}

std::shared_ptr<const OccupancyField> build_scene(const SceneSpec& spec) {
  spec.validate();
  return std::make_shared<PrimitiveField>(spec);
}

namespace {

using json = nlohmann::json;

Vec3 vec3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw SpecError(std::string(what) + " must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Shape shape_from_string(const std::string& s) {
  if (s == "sphere") return Shape::Sphere;
  if (s == "box") return Shape::Box;
  if (s == "capsule") return Shape::Capsule;
  throw SpecError("unknown primitive shape '" + s + "'");
}

const char* shape_to_string(Shape s) {
  switch (s) {
    case Shape::Sphere:
      return "sphere";
    case Shape::Box:
      return "box";
    case Shape::Capsule:
      return "capsule";
  }
  return "sphere";
}

}  // namespace

SceneSpec scene_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("scene json parse error: ") + e.what());
  }
  SceneSpec spec;
  if (!j.contains("primitives") || !j["primitives"].is_array())
    throw SpecError("scene json missing 'primitives' array");
  for (const json& pj : j["primitives"]) {
    Primitive prim;
    prim.shape = shape_from_string(pj.at("shape").get<std::string>());
    prim.center = vec3_from_json(pj.at("center"), "primitive center");
    prim.size = pj.at("size").get<double>();
    prim.colour = vec3_from_json(pj.at("colour"), "primitive colour");
    spec.primitives.push_back(prim);
  }
  if (j.contains("csg")) {
    for (const json& cj : j["csg"]) {
      CsgStep step;
      const std::string op = cj.at("op").get<std::string>();
      if (op == "union")
        step.op = CsgOp::Union;
      else if (op == "subtract")
        step.op = CsgOp::Subtract;
      else
        throw SpecError("unknown csg op '" + op + "'");
      step.index = cj.at("index").get<int>();
      spec.csg.push_back(step);
    }
  }
  if (j.contains("sharpness")) spec.sharpness = j["sharpness"].get<double>();
  spec.validate();
  return spec;
}

std::string scene_to_json(const SceneSpec& spec) {
  json j;
  j["primitives"] = json::array();
  for (const Primitive& prim : spec.primitives) {
    j["primitives"].push_back({{"shape", shape_to_string(prim.shape)},
                               {"center", {prim.center.x, prim.center.y, prim.center.z}},
                               {"size", prim.size},
                               {"colour", {prim.colour.x, prim.colour.y, prim.colour.z}}});
  }
  j["csg"] = json::array();
  for (const CsgStep& step : spec.csg) {
    j["csg"].push_back(
        {{"op", step.op == CsgOp::Union ? "union" : "subtract"}, {"index", step.index}});
  }
  j["sharpness"] = spec.sharpness;
  return j.dump(2);
}

SceneSpec load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return scene_from_json(ss.str());
  } catch (const SpecError& e) {
    throw SpecError(path + ": " + e.what());
  }
}

void save_scene(const SceneSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write scene file '" + path + "'");
  out << scene_to_json(spec) << "\n";
}

}  // namespace nbv
