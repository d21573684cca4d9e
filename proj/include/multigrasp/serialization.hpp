#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "multigrasp/grasp.hpp"
#include "multigrasp/labels.hpp"
#include "multigrasp/mlp.hpp"
#include "multigrasp/scene.hpp"

namespace multigrasp {

constexpr int kSchemaVersion = 1;

// Decoders throw SchemaError naming the offending field path.
nlohmann::json to_json(const Primitive& p);
Primitive primitive_from_json(const nlohmann::json& j, const std::string& path = "primitive");

nlohmann::json to_json(const SceneAnnotation& scene);
SceneAnnotation scene_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ParallelGrasp& g);
nlohmann::json to_json(const VacuumGrasp& g);
ParallelGrasp parallel_grasp_from_json(const nlohmann::json& j, const std::string& path = "grasp");
VacuumGrasp vacuum_grasp_from_json(const nlohmann::json& j, const std::string& path = "grasp");

// {"schema_version", "gripper", "status", "grasps": [...]}; status is "ok" or
// "no graspable region" when the list is empty.
nlohmann::json grasp_list_json(const std::vector<ParallelGrasp>& grasps);
nlohmann::json grasp_list_json(const std::vector<VacuumGrasp>& grasps);
std::vector<ParallelGrasp> parallel_grasps_from_json(const nlohmann::json& j);
std::vector<VacuumGrasp> vacuum_grasps_from_json(const nlohmann::json& j);

nlohmann::json ground_truth_json(const std::vector<GroundTruthGrasp>& grasps);
std::vector<GroundTruthGrasp> ground_truth_from_json(const nlohmann::json& j);

// Model checkpoint: config, feature scaler and every layer with its shape.
nlohmann::json to_json(const MlpModel& model);
MlpModel model_from_json(const nlohmann::json& j);

// Two-space indented JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace multigrasp
