#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nbv/field.hpp"
#include "nbv/geometry.hpp"

namespace nbv {

// Node-centred scalar grid over an axis-aligned box: value (i,j,k) lives at
// lo + (i,j,k) * spacing, stored x-fastest. Trilinear sampling is continuous
// and reproduces stored values exactly at the nodes.
struct VoxelGrid {
  int nx = 0, ny = 0, nz = 0;
  Aabb box{{-1, -1, -1}, {1, 1, 1}};
  std::vector<float> values;  // size nx*ny*nz, x-fastest

  VoxelGrid() = default;
  VoxelGrid(int nx_, int ny_, int nz_, Aabb box_, float fill = 0.0f);

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) +
                                           static_cast<std::size_t>(ny) *
                                               static_cast<std::size_t>(k));
  }
  float& at(int i, int j, int k) { return values[index(i, j, k)]; }
  float at(int i, int j, int k) const { return values[index(i, j, k)]; }

  Vec3 node_position(int i, int j, int k) const;

  // Trilinear interpolation with coordinates clamped into the box.
  double sample(const Vec3& p) const;

  // Nearest node index along each axis (clamped).
  void nearest_node(const Vec3& p, int& i, int& j, int& k) const;
  // Lower corner of the cell containing p (clamped so the +1 corner exists).
  void cell_of(const Vec3& p, int& i, int& j, int& k) const;

  void validate() const;  // dims >= 2 per axis, values in [0,1]
};

// Samples a field at res^3 cell centers of the canonical bounds. The grid
// box shrinks to the cell-center lattice so node positions coincide with
// the sample points.
VoxelGrid voxelize(const OccupancyField& field, int res);
VoxelGrid voxelize_serial(const OccupancyField& field, int res);

// VOXGRID v1 file format: ASCII header
//   VOXGRID v1\n<nx> <ny> <nz>\n<xmin> <ymin> <zmin> <xmax> <ymax> <zmax>\n
// followed by nx*ny*nz little-endian IEEE-754 32-bit floats, x-fastest.
// Round trips bit-exactly. Load failures throw FormatError naming the byte
// offset of the problem.
void save_voxel_grid(const VoxelGrid& grid, const std::string& path);
VoxelGrid load_voxel_grid(const std::string& path);

// The grid viewed as an occupancy field (zero outside its box).
std::shared_ptr<const OccupancyField> make_grid_field(VoxelGrid grid);

}  // namespace nbv
