#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "multigrasp/geometry.hpp"

namespace multigrasp {

enum class PrimitiveKind { box, sphere, cylinder, plane_slab };

std::string_view to_string(PrimitiveKind kind);
PrimitiveKind parse_primitive_kind(std::string_view name);

// Solid convex shape placed in the world.
//
// dimensions (meters):
//   box, plane_slab: {size_x, size_y, size_z} full extents, centered
//   sphere:          {radius}
//   cylinder:        {radius, height}, axis = local z, centered
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::box;
  std::vector<double> dimensions;
  RigidPose pose;
  int object_id = 1;
  double friction_coeff = 0.5;
  bool porous = false;
};

// Throws if dimensions are missing/non-positive or the rotation is not unit.
void validate(const Primitive& p);

// Entry/exit of a line through a convex solid, in the line's parameter.
struct LineHit {
  double t_enter = 0.0, t_exit = 0.0;
  Vec3 normal_enter, normal_exit;  // outward, world frame
};

// Intersection of origin + t * dir (any t) with the solid; nullopt if missed.
std::optional<LineHit> intersect_line(const Primitive& p, const Point3& origin, const Vec3& dir);

struct SurfacePoint {
  Point3 point;
  Vec3 normal;           // outward, world frame
  double distance = 0;   // |query - point|
  bool planar = false;   // on a flat face (box/slab face or cylinder cap)
};

SurfacePoint closest_surface_point(const Primitive& p, const Point3& query);

// Point strictly inside, shrunk by `margin` (margin > 0 tolerates contact).
bool contains(const Primitive& p, const Point3& query, double margin = 0.0);

double surface_area(const Primitive& p);

struct SurfaceSample {
  Point3 point;
  Vec3 normal;
};

// Area-uniform random samples over the whole surface.
std::vector<SurfaceSample> sample_surface(const Primitive& p, std::size_t count, std::mt19937_64& rng);

// Deterministic surface samples at roughly `spacing` meters.
std::vector<SurfaceSample> grid_surface(const Primitive& p, double spacing);

// Area-weighted root-mean-square distance of the surface within Euclidean
// distance `radius` of the closest surface point to `query`, measured from
// the tangent plane there. Sphere: closed form; other kinds: midpoint
// quadrature in the local frame (exactly 0 inside a flat face).
double surface_rms_deviation(const Primitive& p, const Point3& query, double radius);

// Radius of a vertical cylinder bounding the primitive's footprint.
double footprint_radius(const Primitive& p);

}  // namespace multigrasp
