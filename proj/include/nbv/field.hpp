#pragma once

#include "nbv/geometry.hpp"

namespace nbv {

// A queryable occupancy field: o(p) in [0,1] plus an rgb colour in [0,1]^3.
// Queries are pure and thread-safe; points outside bounds() read as empty
// space (occupancy 0), never an error.
class OccupancyField {
 public:
  virtual ~OccupancyField() = default;

  virtual double occupancy_at(const Vec3& p) const = 0;
  virtual Vec3 colour_at(const Vec3& p) const = 0;
  virtual Aabb bounds() const { return canonical_bounds(); }
  virtual const char* kind() const = 0;
};

// Uniform occupancy over a configurable box. Test fixture and baseline for
// closed-form checks; the default box is large enough that full-length
// camera rays never leave it.
class ConstantField final : public OccupancyField {
 public:
  explicit ConstantField(double occupancy, Vec3 colour = {0.5, 0.5, 0.5},
                         Aabb box = {{-100, -100, -100}, {100, 100, 100}})
      : occupancy_(occupancy), colour_(colour), box_(box) {}

  double occupancy_at(const Vec3& p) const override {
    return box_.contains(p) ? occupancy_ : 0.0;
  }
  Vec3 colour_at(const Vec3& p) const override {
    return box_.contains(p) ? colour_ : Vec3{0, 0, 0};
  }
  Aabb bounds() const override { return box_; }
  const char* kind() const override { return "constant"; }

 private:
  double occupancy_;
  Vec3 colour_;
  Aabb box_;
};

}  // namespace nbv
