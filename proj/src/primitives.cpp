#include "multigrasp/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "multigrasp/error.hpp"

namespace multigrasp {

namespace {

constexpr double kTiny = 1e-15;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Quadrature cells per cup radius.
constexpr int kSealCells = 24;

Vec3 half_extents(const Primitive& p) {
  return Vec3(p.dimensions[0], p.dimensions[1], p.dimensions[2]) * 0.5;
}

bool is_boxlike(PrimitiveKind k) { return k == PrimitiveKind::box || k == PrimitiveKind::plane_slab; }

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Local-frame closest surface point; the normal is an exact axis on flat faces.
SurfacePoint closest_local(const Primitive& p, const Point3& q) {
  SurfacePoint s;
  switch (p.kind) {
    case PrimitiveKind::box:
    case PrimitiveKind::plane_slab: {
      const Vec3 h = half_extents(p);
      const bool inside = (q.cwiseAbs().array() <= h.array()).all();
      if (inside) {
        int axis = 0;
        (h - q.cwiseAbs()).minCoeff(&axis);
        s.point = q;
        s.point[axis] = sign_of(q[axis]) * h[axis];
        s.normal = Vec3::Zero();
        s.normal[axis] = sign_of(q[axis]);
        s.planar = true;
      } else {
        s.point = q.cwiseMax(-h).cwiseMin(h);
        const Vec3 diff = q - s.point;
        int clamped = 0, axis = 0;
        for (int i = 0; i < 3; ++i) {
          if (std::abs(q[i]) > h[i]) {
            ++clamped;
            axis = i;
          }
        }
        if (clamped == 1) {
          s.normal = Vec3::Zero();
          s.normal[axis] = sign_of(q[axis]);
          s.planar = true;
        } else {
          s.normal = diff.normalized();
          s.planar = false;
        }
      }
      break;
    }
    case PrimitiveKind::sphere: {
      const double r = p.dimensions[0];
      const Vec3 dir = q.norm() > kTiny ? Vec3(q.normalized()) : Vec3::UnitZ();
      s.point = dir * r;
      s.normal = dir;
      s.planar = false;
      break;
    }
    case PrimitiveKind::cylinder: {
      const double r = p.dimensions[0], hh = 0.5 * p.dimensions[1];
      const double rho = std::hypot(q.x(), q.y());
      const Vec3 radial = rho > kTiny ? Vec3(q.x() / rho, q.y() / rho, 0.0) : Vec3::UnitX();
      const bool in_radial = rho <= r, in_axial = std::abs(q.z()) <= hh;
      if (in_radial && in_axial) {
        if (r - rho < hh - std::abs(q.z())) {
          s.point = Vec3(radial.x() * r, radial.y() * r, q.z());
          s.normal = radial;
          s.planar = false;
        } else {
          s.point = Vec3(q.x(), q.y(), sign_of(q.z()) * hh);
          s.normal = Vec3(0, 0, sign_of(q.z()));
          s.planar = true;
        }
      } else if (!in_radial && in_axial) {
        s.point = Vec3(radial.x() * r, radial.y() * r, q.z());
        s.normal = radial;
      } else if (in_radial) {
        s.point = Vec3(q.x(), q.y(), sign_of(q.z()) * hh);
        s.normal = Vec3(0, 0, sign_of(q.z()));
        s.planar = true;
      } else {
        s.point = Vec3(radial.x() * r, radial.y() * r, sign_of(q.z()) * hh);
        s.normal = (q - s.point).normalized();
      }
      break;
    }
  }
  s.distance = (q - s.point).norm();
  return s;
}

struct Accumulator {
  double weighted_sq = 0.0, weight = 0.0;
  void add(double w, double dev) {
    weighted_sq += w * dev * dev;
    weight += w;
  }
};

// Midpoint cells over the rectangle [u0,u1]x[w0,w1] of a planar patch.
template <class F>
void rect_cells(double u0, double u1, double w0, double w1, double spacing, F&& f) {
  if (!(u1 > u0) || !(w1 > w0)) return;
  const int nu = std::max(1, static_cast<int>(std::ceil((u1 - u0) / spacing)));
  const int nw = std::max(1, static_cast<int>(std::ceil((w1 - w0) / spacing)));
  const double du = (u1 - u0) / nu, dw = (w1 - w0) / nw;
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nw; ++j) f(u0 + (i + 0.5) * du, w0 + (j + 0.5) * dw, du * dw);
  }
}

}  // namespace

std::string_view to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::box: return "box";
    case PrimitiveKind::sphere: return "sphere";
    case PrimitiveKind::cylinder: return "cylinder";
    case PrimitiveKind::plane_slab: return "plane-slab";
  }
  return "?";
}

PrimitiveKind parse_primitive_kind(std::string_view name) {
  if (name == "box") return PrimitiveKind::box;
  if (name == "sphere") return PrimitiveKind::sphere;
  if (name == "cylinder") return PrimitiveKind::cylinder;
  if (name == "plane-slab" || name == "plane_slab") return PrimitiveKind::plane_slab;
  throw SchemaError("unknown primitive kind '" + std::string(name) + "'");
}

void validate(const Primitive& p) {
  const std::size_t need = p.kind == PrimitiveKind::sphere ? 1 : p.kind == PrimitiveKind::cylinder ? 2 : 3;
  if (p.dimensions.size() != need) throw SchemaError("primitive dimensions: wrong count for kind");
  for (double d : p.dimensions) {
    if (!(d > 0.0) || !std::isfinite(d)) throw SchemaError("primitive dimensions must be positive");
  }
  if (std::abs(p.pose.rotation.norm() - 1.0) > 1e-9) throw SchemaError("primitive rotation is not a unit quaternion");
}

std::optional<LineHit> intersect_line(const Primitive& p, const Point3& origin, const Vec3& dir) {
  const Vec3 o = p.pose.to_local(origin);
  const Vec3 d = p.pose.dir_to_local(dir);
  double t0 = -kInf, t1 = kInf;
  Vec3 n0 = Vec3::Zero(), n1 = Vec3::Zero();

  auto clip_slab = [&](int axis, double half) {
    if (std::abs(d[axis]) < kTiny) return std::abs(o[axis]) <= half;
    double a = (-half - o[axis]) / d[axis], b = (half - o[axis]) / d[axis];
    Vec3 na = Vec3::Zero(), nb = Vec3::Zero();
    na[axis] = -1.0;
    nb[axis] = 1.0;
    if (a > b) {
      std::swap(a, b);
      std::swap(na, nb);
    }
    if (a > t0) {
      t0 = a;
      n0 = na;
    }
    if (b < t1) {
      t1 = b;
      n1 = nb;
    }
    return true;
  };

  switch (p.kind) {
    case PrimitiveKind::box:
    case PrimitiveKind::plane_slab: {
      const Vec3 h = half_extents(p);
      for (int i = 0; i < 3; ++i) {
        if (!clip_slab(i, h[i])) return std::nullopt;
      }
      break;
    }
    case PrimitiveKind::sphere: {
      const double r = p.dimensions[0];
      const double a = d.squaredNorm(), b = 2.0 * o.dot(d), c = o.squaredNorm() - r * r;
      const double disc = b * b - 4.0 * a * c;
      if (disc < 0.0 || a < kTiny) return std::nullopt;
      const double sq = std::sqrt(disc);
      t0 = (-b - sq) / (2.0 * a);
      t1 = (-b + sq) / (2.0 * a);
      n0 = (o + t0 * d) / r;
      n1 = (o + t1 * d) / r;
      break;
    }
    case PrimitiveKind::cylinder: {
      const double r = p.dimensions[0], hh = 0.5 * p.dimensions[1];
      const double a = d.x() * d.x() + d.y() * d.y();
      const double b = 2.0 * (o.x() * d.x() + o.y() * d.y());
      const double c = o.x() * o.x() + o.y() * o.y() - r * r;
      if (a < kTiny) {
        if (c > 0.0) return std::nullopt;
      } else {
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) return std::nullopt;
        const double sq = std::sqrt(disc);
        t0 = (-b - sq) / (2.0 * a);
        t1 = (-b + sq) / (2.0 * a);
        const Vec3 e0 = o + t0 * d, e1 = o + t1 * d;
        n0 = Vec3(e0.x(), e0.y(), 0.0) / r;
        n1 = Vec3(e1.x(), e1.y(), 0.0) / r;
      }
      if (!clip_slab(2, hh)) return std::nullopt;
      break;
    }
  }
  if (!(t0 <= t1) || !std::isfinite(t0) || !std::isfinite(t1)) return std::nullopt;
  return LineHit{t0, t1, p.pose.dir_to_world(n0).normalized(), p.pose.dir_to_world(n1).normalized()};
}

SurfacePoint closest_surface_point(const Primitive& p, const Point3& query) {
  SurfacePoint s = closest_local(p, p.pose.to_local(query));
  s.point = p.pose.to_world(s.point);
  s.normal = p.pose.dir_to_world(s.normal);
  return s;
}

bool contains(const Primitive& p, const Point3& query, double margin) {
  const Vec3 q = p.pose.to_local(query);
  switch (p.kind) {
    case PrimitiveKind::box:
    case PrimitiveKind::plane_slab: {
      const Vec3 h = half_extents(p);
      for (int i = 0; i < 3; ++i) {
        if (!(std::abs(q[i]) < h[i] - margin)) return false;
      }
      return true;
    }
    case PrimitiveKind::sphere:
      return q.norm() < p.dimensions[0] - margin;
    case PrimitiveKind::cylinder:
      return std::hypot(q.x(), q.y()) < p.dimensions[0] - margin &&
             std::abs(q.z()) < 0.5 * p.dimensions[1] - margin;
  }
  return false;
}

double surface_area(const Primitive& p) {
  switch (p.kind) {
    case PrimitiveKind::box:
    case PrimitiveKind::plane_slab: {
      const auto& d = p.dimensions;
      return 2.0 * (d[0] * d[1] + d[1] * d[2] + d[0] * d[2]);
    }
    case PrimitiveKind::sphere:
      return 4.0 * kPi * p.dimensions[0] * p.dimensions[0];
    case PrimitiveKind::cylinder: {
      const double r = p.dimensions[0], h = p.dimensions[1];
      return 2.0 * kPi * r * h + 2.0 * kPi * r * r;
    }
  }
  return 0.0;
}

std::vector<SurfaceSample> sample_surface(const Primitive& p, std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<SurfaceSample> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vec3 q, n;
    switch (p.kind) {
      case PrimitiveKind::box:
      case PrimitiveKind::plane_slab: {
        const Vec3 h = half_extents(p);
        const std::array<double, 3> face_area = {h[1] * h[2], h[0] * h[2], h[0] * h[1]};
        const double total = face_area[0] + face_area[1] + face_area[2];
        double pick = uni(rng) * total;
        int axis = 0;
        while (axis < 2 && pick >= face_area[static_cast<std::size_t>(axis)]) {
          pick -= face_area[static_cast<std::size_t>(axis)];
          ++axis;
        }
        const double side = uni(rng) < 0.5 ? -1.0 : 1.0;
        for (int i = 0; i < 3; ++i) q[i] = (2.0 * uni(rng) - 1.0) * h[i];
        q[axis] = side * h[axis];
        n = Vec3::Zero();
        n[axis] = side;
        break;
      }
      case PrimitiveKind::sphere: {
        const double z = 2.0 * uni(rng) - 1.0, phi = 2.0 * kPi * uni(rng);
        const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        n = Vec3(rr * std::cos(phi), rr * std::sin(phi), z);
        q = n * p.dimensions[0];
        break;
      }
      case PrimitiveKind::cylinder: {
        const double r = p.dimensions[0], h = p.dimensions[1];
        const double side_area = 2.0 * kPi * r * h, cap_area = kPi * r * r;
        const double pick = uni(rng) * (side_area + 2.0 * cap_area);
        if (pick < side_area) {
          const double phi = 2.0 * kPi * uni(rng);
          n = Vec3(std::cos(phi), std::sin(phi), 0.0);
          q = Vec3(r * n.x(), r * n.y(), (uni(rng) - 0.5) * h);
        } else {
          const double side = pick < side_area + cap_area ? 1.0 : -1.0;
          const double rad = r * std::sqrt(uni(rng)), phi = 2.0 * kPi * uni(rng);
          q = Vec3(rad * std::cos(phi), rad * std::sin(phi), side * 0.5 * h);
          n = Vec3(0, 0, side);
        }
        break;
      }
    }
    out.push_back({p.pose.to_world(q), p.pose.dir_to_world(n)});
  }
  return out;
}

std::vector<SurfaceSample> grid_surface(const Primitive& p, double spacing) {
  std::vector<SurfaceSample> local;
  switch (p.kind) {
    case PrimitiveKind::box:
    case PrimitiveKind::plane_slab: {
      const Vec3 h = half_extents(p);
      for (int axis = 0; axis < 3; ++axis) {
        const int u = (axis + 1) % 3, w = (axis + 2) % 3;
        for (double side : {-1.0, 1.0}) {
          rect_cells(-h[u], h[u], -h[w], h[w], spacing, [&](double a, double b, double) {
            Vec3 q, n = Vec3::Zero();
            q[axis] = side * h[axis];
            q[u] = a;
            q[w] = b;
            n[axis] = side;
            local.push_back({q, n});
          });
        }
      }
      break;
    }
    case PrimitiveKind::sphere: {
      const double r = p.dimensions[0];
      const auto n = static_cast<std::size_t>(std::ceil(surface_area(p) / (spacing * spacing)));
      const double golden = kPi * (3.0 - std::sqrt(5.0));
      for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        const Vec3 dir(rr * std::cos(phi), rr * std::sin(phi), z);
        local.push_back({dir * r, dir});
      }
      break;
    }
    case PrimitiveKind::cylinder: {
      const double r = p.dimensions[0], hh = 0.5 * p.dimensions[1];
      const int na = std::max(8, static_cast<int>(std::ceil(2.0 * kPi * r / spacing)));
      rect_cells(0.0, 2.0 * kPi, -hh, hh, 2.0 * kPi / na * (1.0 + 1e-12), [&](double phi, double z, double) {
        const Vec3 n(std::cos(phi), std::sin(phi), 0.0);
        local.push_back({Vec3(r * n.x(), r * n.y(), z), n});
      });
      for (double side : {-1.0, 1.0}) {
        rect_cells(-r, r, -r, r, spacing, [&](double x, double y, double) {
          if (x * x + y * y <= r * r) local.push_back({Vec3(x, y, side * hh), Vec3(0, 0, side)});
        });
      }
      break;
    }
  }
  for (auto& s : local) {
    s.point = p.pose.to_world(s.point);
    s.normal = p.pose.dir_to_world(s.normal);
  }
  return local;
}

double surface_rms_deviation(const Primitive& p, const Point3& query, double radius) {
  const SurfacePoint c = closest_local(p, p.pose.to_local(query));
  if (p.kind == PrimitiveKind::sphere) {
    // Cap of chord radius rho: 1 - cos(theta) is uniform in area on [0, U].
    const double r = p.dimensions[0];
    const double u_max = std::min(radius * radius / (2.0 * r * r), 2.0);
    return r * u_max / std::sqrt(3.0);
  }

  Accumulator acc;
  const double spacing = radius / kSealCells;
  const double r2 = radius * radius;
  auto add_point = [&](const Vec3& q, double w) {
    const Vec3 d = q - c.point;
    if (d.squaredNorm() <= r2) acc.add(w, d.dot(c.normal));
  };

  if (is_boxlike(p.kind)) {
    const Vec3 h = half_extents(p);
    for (int axis = 0; axis < 3; ++axis) {
      const int u = (axis + 1) % 3, w = (axis + 2) % 3;
      for (double side : {-1.0, 1.0}) {
        if (std::abs(side * h[axis] - c.point[axis]) > radius) continue;
        rect_cells(std::max(-h[u], c.point[u] - radius), std::min(h[u], c.point[u] + radius),
                   std::max(-h[w], c.point[w] - radius), std::min(h[w], c.point[w] + radius), spacing,
                   [&](double a, double b, double area) {
                     Vec3 q;
                     q[axis] = side * h[axis];
                     q[u] = a;
                     q[w] = b;
                     add_point(q, area);
                   });
      }
    }
  } else {
    const double r = p.dimensions[0], hh = 0.5 * p.dimensions[1];
    // Side: integrate over (phi, z) around the query's angular position.
    const double phi_c = std::atan2(c.point.y(), c.point.x());
    const double half_angle = radius >= 2.0 * r ? kPi : 2.0 * std::asin(radius / (2.0 * r));
    const double arc_spacing = spacing / r;
    const int na = std::max(1, static_cast<int>(std::ceil(2.0 * half_angle / arc_spacing)));
    const double z0 = std::max(-hh, c.point.z() - radius), z1 = std::min(hh, c.point.z() + radius);
    const int nz = std::max(1, static_cast<int>(std::ceil((z1 - z0) / spacing)));
    const double dphi = 2.0 * half_angle / na, dz = (z1 - z0) / nz;
    if (z1 > z0) {
      for (int i = 0; i < na; ++i) {
        const double phi = phi_c - half_angle + (i + 0.5) * dphi;
        for (int j = 0; j < nz; ++j) {
          add_point(Vec3(r * std::cos(phi), r * std::sin(phi), z0 + (j + 0.5) * dz), r * dphi * dz);
        }
      }
    }
    for (double side : {-1.0, 1.0}) {
      if (std::abs(side * hh - c.point.z()) > radius) continue;
      rect_cells(std::max(-r, c.point.x() - radius), std::min(r, c.point.x() + radius),
                 std::max(-r, c.point.y() - radius), std::min(r, c.point.y() + radius), spacing,
                 [&](double x, double y, double area) {
                   if (x * x + y * y <= r * r) add_point(Vec3(x, y, side * hh), area);
                 });
    }
  }
  return acc.weight > 0.0 ? std::sqrt(acc.weighted_sq / acc.weight) : 0.0;
}

double footprint_radius(const Primitive& p) {
  switch (p.kind) {
    case PrimitiveKind::box:
    case PrimitiveKind::plane_slab: {
      const Vec3 h = half_extents(p);
      double best = 0.0;
      for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
          for (int sz : {-1, 1}) {
            const Vec3 corner = p.pose.dir_to_world(Vec3(sx * h.x(), sy * h.y(), sz * h.z()));
            best = std::max(best, std::hypot(corner.x(), corner.y()));
          }
        }
      }
      return best;
    }
    case PrimitiveKind::sphere:
      return p.dimensions[0];
    case PrimitiveKind::cylinder: {
      const Vec3 axis = p.pose.dir_to_world(Vec3::UnitZ());
      return 0.5 * p.dimensions[1] * std::hypot(axis.x(), axis.y()) + p.dimensions[0];
    }
  }
  return 0.0;
}

}  // namespace multigrasp
