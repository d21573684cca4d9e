#include "multigrasp/colormap.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace multigrasp {

namespace {
constexpr std::array<std::array<double, 3>, 5> kStops = {{
    {68, 1, 84},
    {59, 82, 139},
    {33, 145, 140},
    {94, 201, 98},
    {253, 231, 37},
}};
}

ply::Rgb viridis(double value) {
  const double v = std::isfinite(value) ? std::clamp(value, 0.0, 1.0) : 0.0;
  const double x = v * (kStops.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(x), kStops.size() - 2);
  const double t = x - static_cast<double>(i);
  auto channel = [&](int c) {
    return static_cast<unsigned char>(std::lround(kStops[i][c] + t * (kStops[i + 1][c] - kStops[i][c])));
  };
  return {channel(0), channel(1), channel(2)};
}

std::vector<ply::Rgb> colorize(std::span<const double> values) {
  std::vector<ply::Rgb> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(viridis(v));
  return out;
}

}  // namespace multigrasp
