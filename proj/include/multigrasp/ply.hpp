#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "multigrasp/geometry.hpp"

namespace multigrasp::ply {

enum class Format { ascii, binary_little_endian };

using Rgb = std::array<std::uint8_t, 3>;

// Vertex-only PLY content: float32 x/y/z, optional uchar red/green/blue and
// any number of named float32 scalar channels. Positions are rounded to
// float32 on write.
struct VertexData {
  std::vector<Point3> positions;
  std::vector<Rgb> colors;  // empty or one per vertex
  std::vector<std::pair<std::string, std::vector<float>>> scalars;
  std::vector<std::string> comments;

  // nullptr if the channel is absent.
  const std::vector<float>* scalar(std::string_view name) const;
  void set_scalar(std::string name, std::vector<float> values);
};

void write(std::ostream& out, const VertexData& data, Format format);
void write(const std::filesystem::path& path, const VertexData& data, Format format);

// Accepts ascii and binary_little_endian with any scalar property types on the
// vertex element. Elements after `vertex` are ignored. Throws SchemaError.
VertexData read(std::istream& in);
VertexData read(const std::filesystem::path& path);

}  // namespace multigrasp::ply
