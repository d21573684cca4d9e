#include "multigrasp/serialization.hpp"

#include <cmath>
#include <fstream>

#include "multigrasp/error.hpp"

namespace multigrasp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError("invalid field '" + path + "': " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "not finite");
  return v;
}

double number(const json& j, const std::string& key, const std::string& path) {
  return number(field(j, key, path), path + "." + key);
}

long integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<long>();
}

bool boolean(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string text(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path, std::size_t expect = 0) {
  if (!j.is_array()) fail(path, "expected an array");
  if (expect != 0 && j.size() != expect) fail(path, "expected " + std::to_string(expect) + " values");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3(const json& j, const std::string& key, const std::string& path) {
  const auto v = numbers(field(j, key, path), path + "." + key, 3);
  return {v[0], v[1], v[2]};
}

UnitVector3 unit(const json& j, const std::string& key, const std::string& path) {
  const Vec3 v = vec3(j, key, path);
  if (!(v.norm() > 0.0)) fail(path + "." + key, "zero vector");
  return UnitVector3(v);
}

void check_version(const json& j, const std::string& path) {
  const long v = integer(j, "schema_version", path);
  if (v != kSchemaVersion) fail(path + ".schema_version", "unsupported version " + std::to_string(v));
}

Gripper gripper_field(const json& j, const std::string& path) {
  const std::string name = text(j, "gripper", path);
  try {
    return parse_gripper(name);
  } catch (const Error&) {
    fail(path + ".gripper", "unknown gripper '" + name + "'");
  }
}

}  // namespace

json to_json(const Primitive& p) {
  const auto& q = p.pose.rotation;
  return json{{"kind", std::string(to_string(p.kind))},
              {"dimensions", p.dimensions},
              {"rotation_wxyz", json::array({q.w(), q.x(), q.y(), q.z()})},
              {"translation", vec3(p.pose.translation)},
              {"object_id", p.object_id},
              {"friction_coeff", p.friction_coeff},
              {"porous", p.porous}};
}

Primitive primitive_from_json(const json& j, const std::string& path) {
  Primitive p;
  const std::string kind = text(j, "kind", path);
  try {
    p.kind = parse_primitive_kind(kind);
  } catch (const Error&) {
    fail(path + ".kind", "unknown primitive kind '" + kind + "'");
  }
  p.dimensions = numbers(field(j, "dimensions", path), path + ".dimensions");
  const auto q = numbers(field(j, "rotation_wxyz", path), path + ".rotation_wxyz", 4);
  p.pose.rotation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
  p.pose.translation = vec3(j, "translation", path);
  p.object_id = static_cast<int>(integer(j, "object_id", path));
  p.friction_coeff = number(j, "friction_coeff", path);
  p.porous = boolean(j, "porous", path);
  try {
    validate(p);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return p;
}

json to_json(const SceneAnnotation& scene) {
  json prims = json::array();
  for (const auto& p : scene.primitives) prims.push_back(to_json(p));
  return json{{"schema_version", kSchemaVersion},
              {"split", scene.split},
              {"table_height", scene.table_height},
              {"camera_viewpoint", vec3(scene.camera_viewpoint)},
              {"table", to_json(scene.table)},
              {"primitives", prims},
              {"per_point_object_id", scene.per_point_object_id}};
}

SceneAnnotation scene_from_json(const json& j) {
  const std::string path = "scene";
  check_version(j, path);
  SceneAnnotation s;
  s.split = text(j, "split", path);
  s.table_height = number(j, "table_height", path);
  s.camera_viewpoint = vec3(j, "camera_viewpoint", path);
  s.table = primitive_from_json(field(j, "table", path), path + ".table");
  const json& prims = field(j, "primitives", path);
  if (!prims.is_array()) fail(path + ".primitives", "expected an array");
  for (std::size_t i = 0; i < prims.size(); ++i) {
    s.primitives.push_back(primitive_from_json(prims[i], path + ".primitives[" + std::to_string(i) + "]"));
  }
  const json& ids = field(j, "per_point_object_id", path);
  if (!ids.is_array()) fail(path + ".per_point_object_id", "expected an array");
  s.per_point_object_id.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!ids[i].is_number_integer()) fail(path + ".per_point_object_id[" + std::to_string(i) + "]", "expected an integer");
    s.per_point_object_id.push_back(ids[i].get<int>());
  }
  return s;
}

json to_json(const ParallelGrasp& g) {
  return json{{"center", vec3(g.center)}, {"approach", vec3(g.approach.vec())},
              {"angle_deg", g.angle_deg}, {"width", g.width},
              {"depth", g.depth},         {"score", g.score},
              {"seed", g.seed}};
}

json to_json(const VacuumGrasp& g) {
  return json{{"center", vec3(g.center)}, {"normal", vec3(g.normal.vec())}, {"score", g.score}, {"seed", g.seed}};
}

ParallelGrasp parallel_grasp_from_json(const json& j, const std::string& path) {
  ParallelGrasp g;
  g.center = vec3(j, "center", path);
  g.approach = unit(j, "approach", path);
  g.angle_deg = number(j, "angle_deg", path);
  g.width = number(j, "width", path);
  if (!(g.width > 0.0)) fail(path + ".width", "must be positive");
  g.depth = number(j, "depth", path);
  g.score = number(j, "score", path);
  const long seed = integer(j, "seed", path);
  if (seed < 0) fail(path + ".seed", "must be non-negative");
  g.seed = static_cast<PointIndex>(seed);
  return g;
}

VacuumGrasp vacuum_grasp_from_json(const json& j, const std::string& path) {
  VacuumGrasp g;
  g.center = vec3(j, "center", path);
  g.normal = unit(j, "normal", path);
  g.score = number(j, "score", path);
  const long seed = integer(j, "seed", path);
  if (seed < 0) fail(path + ".seed", "must be non-negative");
  g.seed = static_cast<PointIndex>(seed);
  return g;
}

namespace {

template <class G>
json list_json(const std::vector<G>& grasps, Gripper gripper) {
  json list = json::array();
  for (const auto& g : grasps) list.push_back(to_json(g));
  return json{{"schema_version", kSchemaVersion},
              {"gripper", std::string(to_string(gripper))},
              {"status", grasps.empty() ? "no graspable region" : "ok"},
              {"grasps", list}};
}

template <class G>
std::vector<G> list_from_json(const json& j, Gripper expected, G (*decode)(const json&, const std::string&)) {
  check_version(j, "grasps");
  if (gripper_field(j, "grasps") != expected) {
    fail("grasps.gripper", "expected '" + std::string(to_string(expected)) + "'");
  }
  const json& list = field(j, "grasps", "grasps");
  if (!list.is_array()) fail("grasps.grasps", "expected an array");
  std::vector<G> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(decode(list[i], "grasps[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

json grasp_list_json(const std::vector<ParallelGrasp>& grasps) { return list_json(grasps, Gripper::parallel); }
json grasp_list_json(const std::vector<VacuumGrasp>& grasps) { return list_json(grasps, Gripper::vacuum); }

std::vector<ParallelGrasp> parallel_grasps_from_json(const json& j) {
  return list_from_json<ParallelGrasp>(j, Gripper::parallel, &parallel_grasp_from_json);
}
std::vector<VacuumGrasp> vacuum_grasps_from_json(const json& j) {
  return list_from_json<VacuumGrasp>(j, Gripper::vacuum, &vacuum_grasp_from_json);
}

json ground_truth_json(const std::vector<GroundTruthGrasp>& grasps) {
  json list = json::array();
  for (const auto& g : grasps) {
    json e = std::visit([](const auto& p) { return to_json(p); }, g.pose);
    e["gripper"] = std::string(to_string(g.gripper()));
    e["quality_coeff"] = g.quality_coeff;
    list.push_back(std::move(e));
  }
  return json{{"schema_version", kSchemaVersion}, {"grasps", list}};
}

std::vector<GroundTruthGrasp> ground_truth_from_json(const json& j) {
  check_version(j, "ground_truth");
  const json& list = field(j, "grasps", "ground_truth");
  if (!list.is_array()) fail("ground_truth.grasps", "expected an array");
  std::vector<GroundTruthGrasp> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "ground_truth.grasps[" + std::to_string(i) + "]";
    GroundTruthGrasp g;
    if (gripper_field(list[i], path) == Gripper::parallel) {
      g.pose = parallel_grasp_from_json(list[i], path);
    } else {
      g.pose = vacuum_grasp_from_json(list[i], path);
    }
    g.quality_coeff = number(list[i], "quality_coeff", path);
    out.push_back(std::move(g));
  }
  return out;
}

json to_json(const MlpModel& model) {
  const MlpConfig& c = model.config();
  const auto& p = model.params();
  auto layer = [&](const std::string& name, const MlpModel::Layer& l) {
    const auto w = static_cast<std::ptrdiff_t>(l.offset);
    const auto nw = static_cast<std::ptrdiff_t>(l.in) * l.out;
    return json{{"name", name},
                {"shape", json::array({l.out, l.in})},
                {"weights", std::vector<double>(p.begin() + w, p.begin() + w + nw)},
                {"bias", std::vector<double>(p.begin() + w + nw, p.begin() + w + nw + l.out)}};
  };
  json layers = json::array();
  for (std::size_t k = 0; k < model.trunk().size(); ++k) layers.push_back(layer("hidden" + std::to_string(k), model.trunk()[k]));
  layers.push_back(layer("map_head", model.map_head()));
  if (c.refiner) layers.push_back(layer("refiner_head", model.refiner_head()));
  return json{{"schema_version", kSchemaVersion},
              {"kind", "multigrasp-mlp"},
              {"config",
               {{"hidden", c.hidden},
                {"refiner", c.refiner},
                {"views", c.views},
                {"angle_bins", c.angle_bins},
                {"depth_bins", c.depth_bins},
                {"score_bins", c.score_bins}}},
              {"scaler", {{"mean", model.scaler.mean}, {"scale", model.scaler.scale}}},
              {"layers", layers}};
}

MlpModel model_from_json(const json& j) {
  const std::string path = "checkpoint";
  check_version(j, path);
  if (text(j, "kind", path) != "multigrasp-mlp") fail(path + ".kind", "not a model checkpoint");
  const json& cj = field(j, "config", path);
  const std::string cp = path + ".config";
  MlpConfig c;
  c.hidden.clear();
  for (double h : numbers(field(cj, "hidden", cp), cp + ".hidden")) c.hidden.push_back(static_cast<int>(h));
  c.refiner = boolean(cj, "refiner", cp);
  c.views = static_cast<int>(integer(cj, "views", cp));
  c.angle_bins = static_cast<int>(integer(cj, "angle_bins", cp));
  c.depth_bins = static_cast<int>(integer(cj, "depth_bins", cp));
  c.score_bins = static_cast<int>(integer(cj, "score_bins", cp));
  MlpModel model = [&] {
    try {
      return MlpModel(c);
    } catch (const Error& e) {
      fail(cp, e.what());
    }
  }();

  const json& sj = field(j, "scaler", path);
  model.scaler.mean = numbers(field(sj, "mean", path + ".scaler"), path + ".scaler.mean", kFeatureCount);
  model.scaler.scale = numbers(field(sj, "scale", path + ".scaler"), path + ".scaler.scale", kFeatureCount);

  std::vector<MlpModel::Layer> layers = model.trunk();
  layers.push_back(model.map_head());
  if (c.refiner) layers.push_back(model.refiner_head());
  const json& lj = field(j, "layers", path);
  if (!lj.is_array() || lj.size() != layers.size()) fail(path + ".layers", "expected " + std::to_string(layers.size()) + " layers");
  auto& params = model.params();
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string lp = path + ".layers[" + std::to_string(k) + "]";
    const auto& l = layers[k];
    const auto shape = numbers(field(lj[k], "shape", lp), lp + ".shape", 2);
    if (shape[0] != l.out || shape[1] != l.in) fail(lp + ".shape", "does not match the config");
    const auto w = numbers(field(lj[k], "weights", lp), lp + ".weights", static_cast<std::size_t>(l.in) * l.out);
    const auto b = numbers(field(lj[k], "bias", lp), lp + ".bias", static_cast<std::size_t>(l.out));
    std::copy(w.begin(), w.end(), params.begin() + static_cast<std::ptrdiff_t>(l.offset));
    std::copy(b.begin(), b.end(), params.begin() + static_cast<std::ptrdiff_t>(l.offset + w.size()));
  }
  return model;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << j.dump(2) << '\n';
  if (!os) throw Error("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace multigrasp
