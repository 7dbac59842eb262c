#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nbv/field.hpp"
#include "nbv/geometry.hpp"

namespace nbv {

enum class Shape { Sphere, Box, Capsule };

struct Primitive {
  Shape shape = Shape::Sphere;
  Vec3 center;
  double size = 0.5;  // sphere radius / box half-extent / capsule half-length
  Vec3 colour{0.7, 0.7, 0.7};
};

enum class CsgOp { Union, Subtract };

struct CsgStep {
  CsgOp op = CsgOp::Union;
  int index = 0;  // primitive index
};

// Scene description: soft-boundary CSG over a handful of primitives. When
// csg is empty, the scene is the union of all primitives in order.
struct SceneSpec {
  std::vector<Primitive> primitives;
  std::vector<CsgStep> csg;
  double sharpness = 20.0;

  void validate() const;  // throws SpecError
};

// Signed distance of a single primitive (negative inside).
double primitive_sdf(const Primitive& prim, const Vec3& p);

// Composite signed distance: union = min, subtraction = max(a, -b),
// applied in csg order.
double composite_sdf(const SceneSpec& spec, const Vec3& p);

// Logistic soft-boundary map: 1 / (1 + exp(k * sdf)). Strictly decreasing
// in sdf; 0.5 on the surface. Throws DomainError for k <= 0 or non-finite
// sdf.
double sdf_to_occupancy(double sdf, double k);

// Builds the queryable ground-truth field for a scene. Colour at p is the
// colour of the primitive with smallest |sdf|, ties broken by list order.
std::shared_ptr<const OccupancyField> build_scene(const SceneSpec& spec);

// JSON <-> SceneSpec. Top-level keys: "primitives", "csg", "sharpness".
SceneSpec scene_from_json(const std::string& json_text);
std::string scene_to_json(const SceneSpec& spec);
SceneSpec load_scene(const std::string& path);
void save_scene(const SceneSpec& spec, const std::string& path);

}  // namespace nbv
