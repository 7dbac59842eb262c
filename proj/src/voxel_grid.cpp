#include "nbv/voxel_grid.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nbv/errors.hpp"
#include "nbv/format.hpp"
#include "nbv/parallel.hpp"

namespace nbv {

VoxelGrid::VoxelGrid(int nx_, int ny_, int nz_, Aabb box_, float fill)
    : nx(nx_), ny(ny_), nz(nz_), box(box_) {
  if (nx < 2 || ny < 2 || nz < 2)
    throw DomainError("voxel grid dims must be >= 2 per axis");
  values.assign(static_cast<std::size_t>(nx) * ny * nz, fill);
}

Vec3 VoxelGrid::node_position(int i, int j, int k) const {
  const Vec3 ext = box.extent();
  return {box.lo.x + ext.x * i / (nx - 1), box.lo.y + ext.y * j / (ny - 1),
          box.lo.z + ext.z * k / (nz - 1)};
}

namespace {

inline void axis_coords(double p, double lo, double hi, int n, int& i0,
                        double& frac) {
  double u = (p - lo) / (hi - lo) * (n - 1);
  u = std::clamp(u, 0.0, static_cast<double>(n - 1));
  i0 = std::min(static_cast<int>(u), n - 2);
  frac = u - i0;
}

}  // namespace

double VoxelGrid::sample(const Vec3& p) const {
  int i0, j0, k0;
  double fx, fy, fz;
  axis_coords(p.x, box.lo.x, box.hi.x, nx, i0, fx);
  axis_coords(p.y, box.lo.y, box.hi.y, ny, j0, fy);
  axis_coords(p.z, box.lo.z, box.hi.z, nz, k0, fz);

  const double c000 = at(i0, j0, k0), c100 = at(i0 + 1, j0, k0);
  const double c010 = at(i0, j0 + 1, k0), c110 = at(i0 + 1, j0 + 1, k0);
  const double c001 = at(i0, j0, k0 + 1), c101 = at(i0 + 1, j0, k0 + 1);
  const double c011 = at(i0, j0 + 1, k0 + 1), c111 = at(i0 + 1, j0 + 1, k0 + 1);

  const double c00 = c000 + (c100 - c000) * fx;
  const double c10 = c010 + (c110 - c010) * fx;
  const double c01 = c001 + (c101 - c001) * fx;
  const double c11 = c011 + (c111 - c011) * fx;
  const double c0 = c00 + (c10 - c00) * fy;
  const double c1 = c01 + (c11 - c01) * fy;
  return c0 + (c1 - c0) * fz;
}

void VoxelGrid::nearest_node(const Vec3& p, int& i, int& j, int& k) const {
  const Vec3 ext = box.extent();
  i = std::clamp(static_cast<int>(std::lround((p.x - box.lo.x) / ext.x * (nx - 1))), 0, nx - 1);
  j = std::clamp(static_cast<int>(std::lround((p.y - box.lo.y) / ext.y * (ny - 1))), 0, ny - 1);
  k = std::clamp(static_cast<int>(std::lround((p.z - box.lo.z) / ext.z * (nz - 1))), 0, nz - 1);
}

void VoxelGrid::cell_of(const Vec3& p, int& i, int& j, int& k) const {
  double f;
  axis_coords(p.x, box.lo.x, box.hi.x, nx, i, f);
  axis_coords(p.y, box.lo.y, box.hi.y, ny, j, f);
  axis_coords(p.z, box.lo.z, box.hi.z, nz, k, f);
}

void VoxelGrid::validate() const {
  if (nx < 2 || ny < 2 || nz < 2)
    throw DomainError("voxel grid dims must be >= 2 per axis");
  if (values.size() != static_cast<std::size_t>(nx) * ny * nz)
    throw DomainError("voxel grid payload size does not match dims");
  for (std::size_t n = 0; n < values.size(); ++n) {
    const float v = values[n];
    if (!(v >= 0.0f && v <= 1.0f))
      throw DomainError("voxel value out of [0,1] at linear index " + std::to_string(n));
  }
}

namespace {

VoxelGrid voxelize_impl(const OccupancyField& field, int res, bool parallel) {
  if (res < 2) throw DomainError("voxelize resolution must be >= 2");
  const Aabb world = canonical_bounds();
  const Vec3 ext = world.extent();
  const double dx = ext.x / res, dy = ext.y / res, dz = ext.z / res;
  // Cell-center lattice box.
  const Aabb box{{world.lo.x + 0.5 * dx, world.lo.y + 0.5 * dy, world.lo.z + 0.5 * dz},
                 {world.hi.x - 0.5 * dx, world.hi.y - 0.5 * dy, world.hi.z - 0.5 * dz}};
  VoxelGrid grid(res, res, res, box);

  const int threads = parallel ? worker_count() : 1;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int k = 0; k < res; ++k) {
    for (int j = 0; j < res; ++j) {
      for (int i = 0; i < res; ++i) {
        const Vec3 p{world.lo.x + (i + 0.5) * dx, world.lo.y + (j + 0.5) * dy,
                     world.lo.z + (k + 0.5) * dz};
        grid.at(i, j, k) = static_cast<float>(clamp01(field.occupancy_at(p)));
      }
    }
  }
  return grid;
}

}  // namespace

VoxelGrid voxelize(const OccupancyField& field, int res) {
  return voxelize_impl(field, res, true);
}

VoxelGrid voxelize_serial(const OccupancyField& field, int res) {
  return voxelize_impl(field, res, false);
}

namespace {

void put_f32_le(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  out.push_back(static_cast<char>(bits & 0xff));
  out.push_back(static_cast<char>((bits >> 8) & 0xff));
  out.push_back(static_cast<char>((bits >> 16) & 0xff));
  out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

float get_f32_le(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

void save_voxel_grid(const VoxelGrid& grid, const std::string& path) {
  grid.validate();
  std::string out = "VOXGRID v1\n";
  out += std::to_string(grid.nx) + " " + std::to_string(grid.ny) + " " +
         std::to_string(grid.nz) + "\n";
  out += shortest_double(grid.box.lo.x) + " " + shortest_double(grid.box.lo.y) + " " +
         shortest_double(grid.box.lo.z) + " " + shortest_double(grid.box.hi.x) + " " +
         shortest_double(grid.box.hi.y) + " " + shortest_double(grid.box.hi.z) + "\n";
  out.reserve(out.size() + grid.values.size() * 4);
  for (float v : grid.values) put_f32_le(out, v);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write voxel file '" + path + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to voxel file '" + path + "'");
}

namespace {

struct HeaderParser {
  const std::string& data;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("voxel file: " + what + " at byte " + std::to_string(pos));
  }

  std::string line() {
    const std::size_t nl = data.find('\n', pos);
    if (nl == std::string::npos) fail("unterminated header line");
    std::string s = data.substr(pos, nl - pos);
    pos = nl + 1;
    return s;
  }
};

}  // namespace

VoxelGrid load_voxel_grid(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open voxel file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string data = ss.str();

  HeaderParser hp{data};
  if (hp.line() != "VOXGRID v1") {
    hp.pos = 0;
    hp.fail("bad magic, expected 'VOXGRID v1'");
  }

  VoxelGrid grid;
  {
    const std::size_t line_start = hp.pos;
    std::istringstream dims(hp.line());
    if (!(dims >> grid.nx >> grid.ny >> grid.nz) || grid.nx < 2 || grid.ny < 2 ||
        grid.nz < 2) {
      hp.pos = line_start;
      hp.fail("invalid dims line");
    }
  }
  {
    const std::size_t line_start = hp.pos;
    std::istringstream bl(hp.line());
    if (!(bl >> grid.box.lo.x >> grid.box.lo.y >> grid.box.lo.z >> grid.box.hi.x >>
          grid.box.hi.y >> grid.box.hi.z)) {
      hp.pos = line_start;
      hp.fail("invalid bounds line");
    }
    for (int a = 0; a < 3; ++a) {
      if (!(grid.box.lo[a] < grid.box.hi[a])) {
        hp.pos = line_start;
        hp.fail("bounds not strictly ordered");
      }
    }
  }

  const std::size_t count =
      static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz;
  const std::size_t payload = data.size() - hp.pos;
  if (payload != count * 4) {
    throw FormatError("voxel file: payload is " + std::to_string(payload) +
                      " bytes, expected " + std::to_string(count * 4) +
                      " at byte " + std::to_string(hp.pos));
  }
  grid.values.resize(count);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(data.data()) + hp.pos;
  for (std::size_t n = 0; n < count; ++n) {
    const float v = get_f32_le(p + n * 4);
    if (!(v >= 0.0f && v <= 1.0f))
      throw FormatError("voxel file: value " + std::to_string(v) +
                        " outside [0,1] at byte " + std::to_string(hp.pos + n * 4));
    grid.values[n] = v;
  }
  return grid;
}

namespace {

class GridField final : public OccupancyField {
 public:
  explicit GridField(VoxelGrid grid) : grid_(std::move(grid)) {
    grid_.validate();
  }

  double occupancy_at(const Vec3& p) const override {
    if (!grid_.box.contains(p)) return 0.0;
    return grid_.sample(p);
  }
  Vec3 colour_at(const Vec3& p) const override {
    const double v = occupancy_at(p);
    return {v, v, v};
  }
  Aabb bounds() const override { return grid_.box; }
  const char* kind() const override { return "voxel-grid"; }

 private:
  VoxelGrid grid_;
};

}  // namespace

std::shared_ptr<const OccupancyField> make_grid_field(VoxelGrid grid) {
  return std::make_shared<GridField>(std::move(grid));
}

}  // namespace nbv
