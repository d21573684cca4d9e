#pragma once

#include <span>
#include <vector>

#include "multigrasp/ply.hpp"

namespace multigrasp {

// Piecewise-linear ramp through five viridis stops, at 0, 0.25, 0.5, 0.75, 1:
//   (68,1,84) (59,82,139) (33,145,140) (94,201,98) (253,231,37)
// Input is clamped to [0, 1]; channels are rounded to the nearest integer.
ply::Rgb viridis(double value);

std::vector<ply::Rgb> colorize(std::span<const double> values);

}  // namespace multigrasp
