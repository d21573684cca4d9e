#include "multigrasp/ply.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "multigrasp/error.hpp"

namespace multigrasp::ply {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

namespace {

enum class ScalarType { i8, u8, i16, u16, i32, u32, f32, f64 };

struct Property {
  std::string name;
  ScalarType type;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
  bool has_list = false;
};

ScalarType parse_type(const std::string& t) {
  if (t == "char" || t == "int8") return ScalarType::i8;
  if (t == "uchar" || t == "uint8") return ScalarType::u8;
  if (t == "short" || t == "int16") return ScalarType::i16;
  if (t == "ushort" || t == "uint16") return ScalarType::u16;
  if (t == "int" || t == "int32") return ScalarType::i32;
  if (t == "uint" || t == "uint32") return ScalarType::u32;
  if (t == "float" || t == "float32") return ScalarType::f32;
  if (t == "double" || t == "float64") return ScalarType::f64;
  throw SchemaError("ply: unknown property type '" + t + "'");
}

std::size_t type_size(ScalarType t) {
  switch (t) {
    case ScalarType::i8:
    case ScalarType::u8: return 1;
    case ScalarType::i16:
    case ScalarType::u16: return 2;
    case ScalarType::i32:
    case ScalarType::u32:
    case ScalarType::f32: return 4;
    case ScalarType::f64: return 8;
  }
  return 0;
}

template <class T>
T load(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

double decode(ScalarType t, const char* p) {
  switch (t) {
    case ScalarType::i8: return load<std::int8_t>(p);
    case ScalarType::u8: return load<std::uint8_t>(p);
    case ScalarType::i16: return load<std::int16_t>(p);
    case ScalarType::u16: return load<std::uint16_t>(p);
    case ScalarType::i32: return load<std::int32_t>(p);
    case ScalarType::u32: return load<std::uint32_t>(p);
    case ScalarType::f32: return load<float>(p);
    case ScalarType::f64: return load<double>(p);
  }
  return 0.0;
}

std::string format_float(float v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v));
  return buf;
}

}  // namespace

const std::vector<float>* VertexData::scalar(std::string_view name) const {
  for (const auto& [n, values] : scalars) {
    if (n == name) return &values;
  }
  return nullptr;
}

void VertexData::set_scalar(std::string name, std::vector<float> values) {
  for (auto& [n, v] : scalars) {
    if (n == name) {
      v = std::move(values);
      return;
    }
  }
  scalars.emplace_back(std::move(name), std::move(values));
}

void write(std::ostream& out, const VertexData& data, Format format) {
  const std::size_t n = data.positions.size();
  const bool with_color = !data.colors.empty();
  if (with_color && data.colors.size() != n) throw Error("ply: color count does not match vertex count");
  for (const auto& [name, values] : data.scalars) {
    if (values.size() != n) throw Error("ply: channel '" + name + "' length does not match vertex count");
  }

  out << "ply\n";
  out << (format == Format::ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n");
  for (const auto& c : data.comments) out << "comment " << c << '\n';
  out << "element vertex " << n << '\n';
  out << "property float x\nproperty float y\nproperty float z\n";
  if (with_color) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  for (const auto& s : data.scalars) out << "property float " << s.first << '\n';
  out << "end_header\n";

  if (format == Format::ascii) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = data.positions[i];
      out << format_float(static_cast<float>(p.x())) << ' ' << format_float(static_cast<float>(p.y())) << ' '
          << format_float(static_cast<float>(p.z()));
      if (with_color) {
        for (auto c : data.colors[i]) out << ' ' << static_cast<int>(c);
      }
      for (const auto& s : data.scalars) out << ' ' << format_float(s.second[i]);
      out << '\n';
    }
  } else {
    std::vector<char> row;
    for (std::size_t i = 0; i < n; ++i) {
      row.clear();
      auto put_float = [&](float f) {
        char b[4];
        std::memcpy(b, &f, 4);
        row.insert(row.end(), b, b + 4);
      };
      const auto& p = data.positions[i];
      put_float(static_cast<float>(p.x()));
      put_float(static_cast<float>(p.y()));
      put_float(static_cast<float>(p.z()));
      if (with_color) {
        for (auto c : data.colors[i]) row.push_back(static_cast<char>(c));
      }
      for (const auto& s : data.scalars) put_float(s.second[i]);
      out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
  }
  if (!out) throw Error("ply: write failed");
}

void write(const std::filesystem::path& path, const VertexData& data, Format format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("ply: cannot open '" + path.string() + "' for writing");
  write(out, data, format);
}

VertexData read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw SchemaError("ply: missing 'ply' magic");

  Format format = Format::ascii;
  bool have_format = false;
  std::vector<Element> elements;
  VertexData data;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "format") {
      std::string f;
      ls >> f;
      if (f == "ascii") {
        format = Format::ascii;
      } else if (f == "binary_little_endian") {
        format = Format::binary_little_endian;
      } else {
        throw SchemaError("ply: unsupported format '" + f + "'");
      }
      have_format = true;
    } else if (key == "comment") {
      data.comments.push_back(line.size() > 8 ? line.substr(8) : std::string());
    } else if (key == "obj_info") {
    } else if (key == "element") {
      Element e;
      ls >> e.name >> e.count;
      if (!ls) throw SchemaError("ply: malformed element line '" + line + "'");
      elements.push_back(std::move(e));
    } else if (key == "property") {
      if (elements.empty()) throw SchemaError("ply: property before any element");
      std::string type;
      ls >> type;
      if (type == "list") {
        elements.back().has_list = true;
        continue;
      }
      Property p{"", parse_type(type)};
      ls >> p.name;
      elements.back().properties.push_back(std::move(p));
    } else if (key == "end_header") {
      break;
    } else if (!key.empty()) {
      throw SchemaError("ply: unexpected header line '" + line + "'");
    }
  }
  if (!have_format) throw SchemaError("ply: missing format line");

  const Element* vertex = nullptr;
  for (const auto& e : elements) {
    if (e.name == "vertex") {
      vertex = &e;
      break;
    }
    // Elements before vertex must be skippable.
    if (e.has_list || e.count != 0) throw SchemaError("ply: element '" + e.name + "' precedes vertex");
  }
  if (!vertex) throw SchemaError("ply: no vertex element");
  if (vertex->has_list) throw SchemaError("ply: list properties on vertex are not supported");

  int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
  std::vector<int> scalar_slot(vertex->properties.size(), -1);
  for (std::size_t k = 0; k < vertex->properties.size(); ++k) {
    const auto& name = vertex->properties[k].name;
    const int ki = static_cast<int>(k);
    if (name == "x") ix = ki;
    else if (name == "y") iy = ki;
    else if (name == "z") iz = ki;
    else if (name == "red") ir = ki;
    else if (name == "green") ig = ki;
    else if (name == "blue") ib = ki;
    else {
      scalar_slot[k] = static_cast<int>(data.scalars.size());
      data.scalars.emplace_back(name, std::vector<float>{});
    }
  }
  if (ix < 0 || iy < 0 || iz < 0) throw SchemaError("ply: vertex element lacks x/y/z");
  const bool with_color = ir >= 0 && ig >= 0 && ib >= 0;

  const std::size_t n = vertex->count;
  data.positions.resize(n);
  if (with_color) data.colors.resize(n);
  for (auto& s : data.scalars) s.second.resize(n);

  std::vector<double> values(vertex->properties.size());
  std::size_t row_bytes = 0;
  for (const auto& p : vertex->properties) row_bytes += type_size(p.type);
  std::vector<char> row(row_bytes);

  for (std::size_t i = 0; i < n; ++i) {
    if (format == Format::ascii) {
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(in >> values[k])) throw SchemaError("ply: truncated ascii vertex data at vertex " + std::to_string(i));
        if (vertex->properties[k].type == ScalarType::f32) values[k] = static_cast<float>(values[k]);
      }
    } else {
      if (!in.read(row.data(), static_cast<std::streamsize>(row_bytes))) {
        throw SchemaError("ply: truncated binary vertex data at vertex " + std::to_string(i));
      }
      std::size_t off = 0;
      for (std::size_t k = 0; k < values.size(); ++k) {
        values[k] = decode(vertex->properties[k].type, row.data() + off);
        off += type_size(vertex->properties[k].type);
      }
    }
    data.positions[i] = Point3(values[static_cast<std::size_t>(ix)], values[static_cast<std::size_t>(iy)],
                               values[static_cast<std::size_t>(iz)]);
    if (with_color) {
      data.colors[i] = {static_cast<std::uint8_t>(values[static_cast<std::size_t>(ir)]),
                        static_cast<std::uint8_t>(values[static_cast<std::size_t>(ig)]),
                        static_cast<std::uint8_t>(values[static_cast<std::size_t>(ib)])};
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (scalar_slot[k] >= 0) {
        data.scalars[static_cast<std::size_t>(scalar_slot[k])].second[i] = static_cast<float>(values[k]);
      }
    }
  }
  return data;
}

VertexData read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ply: cannot open '" + path.string() + "'");
  return read(in);
}

}  // namespace multigrasp::ply
