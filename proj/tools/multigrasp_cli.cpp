// multigrasp command-line driver: synthetic scenes, labels, training,
// prediction, evaluation and PLY export. All outputs are deterministic for a
// fixed seed; nothing time- or host-dependent is written into data files.

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "multigrasp/colormap.hpp"
#include "multigrasp/error.hpp"
#include "multigrasp/evaluation.hpp"
#include "multigrasp/pipeline.hpp"
#include "multigrasp/ply.hpp"
#include "multigrasp/serialization.hpp"
#include "multigrasp/train.hpp"

namespace fs = std::filesystem;
using namespace multigrasp;
using nlohmann::json;

namespace {

// Bad arguments detected after parsing; exit code 2 like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SceneFiles {
  std::string name;  // e.g. scene_000
  fs::path ply, json;
};

std::vector<SceneFiles> list_scenes(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir.string());
  static const std::regex pattern(R"(scene_\d+\.json)");
  std::vector<SceneFiles> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string file = e.path().filename().string();
    if (!std::regex_match(file, pattern)) continue;
    const std::string stem = e.path().stem().string();
    out.push_back({stem, dir / (stem + ".ply"), e.path()});
  }
  std::sort(out.begin(), out.end(), [](const SceneFiles& a, const SceneFiles& b) { return a.name < b.name; });
  if (out.empty()) throw UsageError("no scene_*.json files in " + dir.string());
  return out;
}

struct LoadedScene {
  PointCloud cloud;
  SceneAnnotation scene;
};

LoadedScene load_scene(const SceneFiles& f) {
  LoadedScene s;
  s.scene = scene_from_json(read_json(f.json));
  const ply::VertexData v = ply::read(f.ply);
  s.cloud.points = v.positions;
  s.cloud.viewpoint = s.scene.camera_viewpoint;
  validate(s.scene, s.cloud);
  return s;
}

ply::Format parse_format(const std::string& name) {
  if (name == "binary") return ply::Format::binary_little_endian;
  if (name == "ascii") return ply::Format::ascii;
  throw UsageError("unknown PLY format '" + name + "' (ascii or binary)");
}

std::vector<Gripper> parse_grippers(const std::string& list) {
  std::vector<Gripper> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const Gripper g = parse_gripper(item);
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    } catch (const Error&) {
      throw UsageError("unknown gripper '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("no gripper selected");
  return out;
}

std::vector<float> to_float(const std::vector<double>& v) { return {v.begin(), v.end()}; }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error("cannot create directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (!os) throw Error("write failed: " + path.string());
}

void add_map_channels(ply::VertexData& v, const GraspnessMaps& maps) {
  v.set_scalar("objectness", to_float(maps.objectness));
  v.set_scalar("graspness_parallel", to_float(maps.parallel));
  v.set_scalar("graspness_vacuum", to_float(maps.vacuum));
}

// ---- synth ----

struct SynthOptions {
  int scenes = 5;
  int objects = 5;
  std::uint64_t seed = 0;
  std::string out = "scenes";
  std::string kinds = "box,sphere,plane-slab";
  std::string split = "seen";
  double dimension_scale = 1.0;
  double porosity = 0.0;
  std::string format = "binary";
};

std::vector<PrimitiveKind> parse_kinds(const std::string& list) {
  std::vector<PrimitiveKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_primitive_kind(item));
    } catch (const Error&) {
      throw UsageError("unknown primitive kind '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("no primitive kinds given");
  return out;
}

int cmd_synth(const SynthOptions& o) {
  if (o.scenes < 1) throw UsageError("--scenes must be at least 1");
  if (o.objects < 1) throw UsageError("--objects must be at least 1");
  if (!(o.dimension_scale > 0.0)) throw UsageError("--dimension-scale must be positive");
  if (o.porosity < 0.0 || o.porosity > 1.0) throw UsageError("--porosity must be in [0, 1]");
  const ply::Format format = parse_format(o.format);
  SynthConfig cfg;
  cfg.kinds = parse_kinds(o.kinds);
  cfg.split = o.split;
  cfg.dimension_scale = o.dimension_scale;
  cfg.porosity_probability = o.porosity;
  const fs::path dir(o.out);
  ensure_dir(dir);
  for (int i = 0; i < o.scenes; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "scene_%03d", i);
    const auto [cloud, scene] = generate_scene(o.seed * 100003ULL + static_cast<std::uint64_t>(i), o.objects, cfg);
    ply::VertexData v;
    v.positions = cloud.points;
    std::vector<float> ids(scene.per_point_object_id.begin(), scene.per_point_object_id.end());
    v.set_scalar("object_id", std::move(ids));
    ply::write(dir / (std::string(name) + ".ply"), v, format);
    write_json(dir / (std::string(name) + ".json"), to_json(scene));
    std::string kinds;
    for (const auto& p : scene.primitives) kinds += (kinds.empty() ? "" : ",") + std::string(to_string(p.kind));
    std::printf("%s: %zu points, %zu objects (%s)\n", name, cloud.size(), scene.primitives.size(), kinds.c_str());
  }
  return 0;
}

// ---- labels ----

struct LabelsOptions {
  std::string scenes = "scenes";
  std::string format = "binary";
};

int cmd_labels(const LabelsOptions& o) {
  const ply::Format format = parse_format(o.format);
  for (const auto& f : list_scenes(o.scenes)) {
    const LoadedScene s = load_scene(f);
    const auto grasps = generate_ground_truth(s.cloud, s.scene);
    const GraspnessMaps maps = build_label_maps(s.cloud, s.scene, grasps);
    write_json(f.json.parent_path() / (f.name + ".gt.json"), ground_truth_json(grasps));
    ply::VertexData v;
    v.positions = s.cloud.points;
    add_map_channels(v, maps);
    ply::write(f.json.parent_path() / (f.name + ".labels.ply"), v, format);
    std::size_t np = 0, nv = 0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      np += maps.parallel[i] > 0.0;
      nv += maps.vacuum[i] > 0.0;
    }
    std::printf("%s: %zu ground-truth grasps, %zu parallel / %zu vacuum positive points\n", f.name.c_str(),
                grasps.size(), np, nv);
  }
  return 0;
}

// Labels from a cached .gt.json when present, else computed.
GraspnessMaps scene_labels(const SceneFiles& f, const LoadedScene& s) {
  const fs::path gt = f.json.parent_path() / (f.name + ".gt.json");
  const auto grasps = fs::exists(gt) ? ground_truth_from_json(read_json(gt)) : generate_ground_truth(s.cloud, s.scene);
  return build_label_maps(s.cloud, s.scene, grasps);
}

// ---- train ----

struct TrainOptions {
  std::string scenes = "scenes";
  std::string out = "model.json";
  std::string log = "train_log.csv";
  int epochs = 22;
  int batch = 12;
  double lr = 5e-4;
  bool pcgrad = true;
  std::uint64_t seed = 0;
  double positive_weight = 10.0;
};

int cmd_train(const TrainOptions& o) {
  TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch;
  cfg.lr = o.lr;
  cfg.pcgrad = o.pcgrad;
  cfg.seed = o.seed;
  cfg.positive_weight = o.positive_weight;
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::vector<TrainingScene> data;
  for (const auto& f : list_scenes(o.scenes)) {
    const LoadedScene s = load_scene(f);
    data.push_back(prepare_training_scene(s.cloud, s.scene, scene_labels(f, s), ScenePrepConfig{}));
  }
  const TrainResult r = train(data, cfg);
  write_json(o.out, to_json(r.model));
  std::ostringstream log;
  write_training_log(log, r.history, cfg.pcgrad);
  write_text(o.log, log.str());
  const auto& last = r.history.back();
  std::printf("trained on %zu scenes, %d epochs (%s); final loss %.6f\n", data.size(), cfg.epochs,
              cfg.pcgrad ? "PCGrad" : "w/o PCGrad", last.total());
  return 0;
}

// ---- predict ----

struct PredictOptions {
  std::string scenes = "scenes";
  std::string out = "predictions";
  std::string checkpoint;
  bool fallback_head = false;
  std::string grippers = "parallel,vacuum";
  double t_parallel = 0.1;
  double t_vacuum = 0.1;
  std::size_t seeds = 1024;
  std::size_t top_k = 50;
  std::string format = "binary";
};

PipelineConfig pipeline_config(const std::string& grippers, double t_p, double t_v, std::size_t seeds,
                               std::size_t top_k) {
  PipelineConfig cfg;
  cfg.grippers = parse_grippers(grippers);
  cfg.sampling.t_parallel = t_p;
  cfg.sampling.t_vacuum = t_v;
  cfg.sampling.m_parallel = seeds;
  cfg.sampling.m_vacuum = seeds;
  cfg.top_k = top_k;
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::optional<MlpModel> load_model(const std::string& checkpoint, bool fallback) {
  if (!checkpoint.empty() && fallback) throw UsageError("--checkpoint and --fallback-head are exclusive");
  if (checkpoint.empty() && !fallback) throw UsageError("no checkpoint given; pass --checkpoint or --fallback-head");
  if (fallback) return std::nullopt;
  return model_from_json(read_json(checkpoint));
}

int cmd_predict(const PredictOptions& o) {
  const PipelineConfig cfg = pipeline_config(o.grippers, o.t_parallel, o.t_vacuum, o.seeds, o.top_k);
  const ply::Format format = parse_format(o.format);
  const auto scenes = list_scenes(o.scenes);
  const std::optional<MlpModel> model = load_model(o.checkpoint, o.fallback_head);
  const fs::path dir(o.out);
  ensure_dir(dir);
  for (const auto& f : scenes) {
    const LoadedScene s = load_scene(f);
    const PipelineOutput out =
        run_pipeline(s.cloud, &s.scene, model ? &*model : nullptr, s.scene.table_height, cfg);
    ply::VertexData v;
    v.positions = s.cloud.points;
    add_map_channels(v, out.maps);
    for (Gripper g : cfg.grippers) {
      const std::string tag(to_string(g));
      const json j = g == Gripper::parallel ? grasp_list_json(out.parallel) : grasp_list_json(out.vacuum);
      write_json(dir / (f.name + "." + tag + ".json"), j);
      ply::VertexData colored = v;
      colored.colors = colorize(out.maps.graspness(g));
      colored.comments.push_back("colored by graspness_" + tag);
      ply::write(dir / (f.name + "." + tag + ".ply"), colored, format);
    }
    std::printf("%s: %zu parallel grasps (%zu seeds), %zu vacuum grasps (%zu seeds)\n", f.name.c_str(),
                out.parallel.size(), out.parallel_seeds.size(), out.vacuum.size(), out.vacuum_seeds.size());
  }
  return 0;
}

// ---- eval ----

struct EvalOptions {
  std::string scenes = "scenes";
  std::string predictions = "predictions";
  std::string out = "metrics";
  int k = 50;
  bool clearing = false;
  std::string checkpoint;
  bool fallback_head = false;
  double t_parallel = 0.1;
  double t_vacuum = 0.1;
  std::size_t seeds = 1024;
};

std::string mu_key(double mu) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", mu);
  return buf;
}

int cmd_eval(const EvalOptions& o) {
  EvalConfig ecfg;
  ecfg.k_max = o.k;
  try {
    validate(ecfg);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto scenes = list_scenes(o.scenes);
  const fs::path pred_dir(o.predictions), dir(o.out);
  std::optional<MlpModel> model;
  if (o.clearing) model = load_model(o.checkpoint, o.fallback_head);
  ensure_dir(dir);

  std::vector<ApRow> rows;
  std::ostringstream grid;
  grid << "scene,split";
  for (double mu : ecfg.mu_p_grid) grid << ",ap_parallel_" << mu_key(mu);
  for (double mu : ecfg.mu_v_grid) grid << ",ap_vacuum_" << mu_key(mu);
  grid << '\n';

  // split -> gripper -> mu -> sum, and per split scene counts
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> sums;
  std::map<std::string, std::map<std::string, double>> overall;
  std::map<std::string, int> counts;
  std::vector<ClearingRow> clearing_rows;
  std::map<std::string, std::vector<ClearingMetrics>> clearing_by_policy;

  for (const auto& f : scenes) {
    const LoadedScene s = load_scene(f);
    const CollisionChecker checker(s.scene, ecfg.gripper);
    const std::string split = s.scene.split;
    ++counts[split];
    grid << f.name << ',' << split;
    for (Gripper g : {Gripper::parallel, Gripper::vacuum}) {
      const std::string tag(to_string(g));
      const fs::path file = pred_dir / (f.name + "." + tag + ".json");
      std::vector<double> coeffs;
      if (fs::exists(file)) {
        const json j = read_json(file);
        coeffs = g == Gripper::parallel ? coefficients(s.scene, checker, parallel_grasps_from_json(j))
                                        : coefficients(s.scene, checker, vacuum_grasps_from_json(j));
      }
      const auto& mus = g == Gripper::parallel ? ecfg.mu_p_grid : ecfg.mu_v_grid;
      for (double mu : mus) {
        const double ap = ap_mu(coeffs, g, mu, ecfg.k_max);
        rows.push_back({f.name, g, mu, ap});
        sums[split][tag][mu_key(mu)] += ap;
        char buf[32];
        std::snprintf(buf, sizeof buf, ",%.10g", ap);
        grid << buf;
      }
      overall[split][tag] += ap_overall(coeffs, g, ecfg);
    }
    grid << '\n';

    if (o.clearing) {
      std::vector<ClearingTrace> traces;
      for (Gripper g : {Gripper::parallel, Gripper::vacuum}) {
        const PipelineConfig pcfg =
            pipeline_config(std::string(to_string(g)), o.t_parallel, o.t_vacuum, o.seeds, 1);
        const MlpModel* m = model ? &*model : nullptr;
        const GraspPlanner planner = [&](const PointCloud& c, const SceneAnnotation& a) {
          const PipelineOutput out = run_pipeline(c, &a, m, a.table_height, pcfg);
          PlanResult plan;
          for (const auto& pg : out.parallel) plan.ranked.emplace_back(pg);
          for (const auto& vg : out.vacuum) plan.ranked.emplace_back(vg);
          plan.seeds = out.parallel_seeds.indices;
          plan.seeds.insert(plan.seeds.end(), out.vacuum_seeds.indices.begin(), out.vacuum_seeds.indices.end());
          return plan;
        };
        traces.push_back(run_clearing_loop(s.cloud, s.scene, planner, ecfg));
        const ClearingMetrics cm = clearing_metrics(traces.back());
        clearing_rows.push_back({f.name, std::string(to_string(g)), cm});
        clearing_by_policy[std::string(to_string(g))].push_back(cm);
      }
      const ClearingMetrics combined = combine_grippers_posthoc(traces);
      clearing_rows.push_back({f.name, "combined", combined});
      clearing_by_policy["combined"].push_back(combined);
    }
  }

  {
    std::ostringstream csv;
    write_ap_csv(csv, rows);
    write_text(dir / "metrics.csv", csv.str());
    write_text(dir / "ap_grid.csv", grid.str());
  }

  json summary{{"schema_version", kSchemaVersion}, {"k_max", ecfg.k_max}};
  json splits = json::object();
  for (const auto& [split, n] : counts) {
    json entry{{"scenes", n}};
    for (const auto& [tag, per_mu] : sums[split]) {
      json ap = json::object();
      for (const auto& [mu, sum] : per_mu) ap[mu] = sum / n;
      entry[tag] = {{"ap_mu", ap}, {"ap_overall", overall[split][tag] / n}};
    }
    splits[split] = entry;
  }
  summary["splits"] = splits;

  if (o.clearing) {
    json clearing = json::object();
    for (const auto& [policy, runs] : clearing_by_policy) {
      const ClearingMetrics m = aggregate(runs);
      clearing[policy] = {{"objects_total", m.objects_total},     {"objects_cleared", m.objects_cleared},
                          {"objects_detected", m.objects_detected}, {"grasps_total", m.grasps_total},
                          {"grasps_successful", m.grasps_successful}, {"grasps_on_cleared", m.grasps_on_cleared},
                          {"r_object", m.r_object},                 {"r_grasp", m.r_grasp},
                          {"r_mix", m.r_mix},                       {"r_seen", m.r_seen}};
      clearing_rows.push_back({"all", policy, m});
    }
    summary["clearing"] = clearing;
    std::ostringstream csv;
    write_clearing_csv(csv, clearing_rows);
    write_text(dir / "clearing.csv", csv.str());
  }
  write_json(dir / "summary.json", summary);

  for (const auto& [split, n] : counts) {
    std::printf("%s (%d scenes):", split.c_str(), n);
    for (const auto& [tag, v] : overall[split]) std::printf(" AP_%s=%.4f", tag.c_str(), v / n);
    std::printf("\n");
  }
  return 0;
}

// ---- export-ply ----

struct ExportOptions {
  std::string input;
  std::string out;
  std::string channel = "graspness_vacuum";
  std::string format = "ascii";
};

int cmd_export(const ExportOptions& o) {
  const ply::Format format = parse_format(o.format);
  ply::VertexData v = ply::read(fs::path(o.input));
  const std::vector<float>* ch = v.scalar(o.channel);
  if (!ch) throw SchemaError("invalid field '" + o.channel + "': no such vertex channel in " + o.input);
  v.colors = colorize(std::vector<double>(ch->begin(), ch->end()));
  v.comments.push_back("colored by " + o.channel);
  ply::write(fs::path(o.out), v, format);
  std::printf("%s: %zu vertices colored by %s\n", o.out.c_str(), v.positions.size(), o.channel.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multigrasp: multi-gripper grasp detection on synthetic point clouds"};
  app.set_config("--config", "", "INI/TOML file with option defaults (flags override it)");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "generate synthetic tabletop scenes (PLY + JSON)");
  synth->add_option("--scenes", so.scenes, "number of scenes")->capture_default_str();
  synth->add_option("--objects", so.objects, "objects per scene")->capture_default_str();
  synth->add_option("--seed", so.seed, "base random seed")->capture_default_str();
  synth->add_option("--out", so.out, "output directory")->capture_default_str();
  synth->add_option("--kinds", so.kinds, "comma-separated primitive kinds")->capture_default_str();
  synth->add_option("--split", so.split, "split tag stored with each scene")->capture_default_str();
  synth->add_option("--dimension-scale", so.dimension_scale, "object size multiplier")->capture_default_str();
  synth->add_option("--porosity", so.porosity, "probability that an object is porous")->capture_default_str();
  synth->add_option("--format", so.format, "PLY format: ascii or binary")->capture_default_str();

  LabelsOptions lo;
  auto* labels = app.add_subcommand("labels", "ground-truth grasps and label maps for a scene directory");
  labels->add_option("--scenes", lo.scenes, "scene directory")->capture_default_str();
  labels->add_option("--format", lo.format, "PLY format: ascii or binary")->capture_default_str();

  TrainOptions to;
  auto* trn = app.add_subcommand("train", "train the per-point map and refiner network");
  trn->add_option("--scenes", to.scenes, "training scene directory")->capture_default_str();
  trn->add_option("--out", to.out, "checkpoint path")->capture_default_str();
  trn->add_option("--log", to.log, "loss log CSV path")->capture_default_str();
  trn->add_option("--epochs", to.epochs)->capture_default_str();
  trn->add_option("--batch", to.batch, "scenes per optimizer step")->capture_default_str();
  trn->add_option("--lr", to.lr, "initial learning rate")->capture_default_str();
  trn->add_flag("--pcgrad,!--no-pcgrad", to.pcgrad, "gradient surgery between the two grippers' tasks");
  trn->add_option("--seed", to.seed)->capture_default_str();
  trn->add_option("--positive-weight", to.positive_weight, "parallel BCE positive weight")->capture_default_str();

  PredictOptions po;
  auto* pred = app.add_subcommand("predict", "run the grasp pipeline on a scene directory");
  pred->add_option("--scenes", po.scenes, "scene directory")->capture_default_str();
  pred->add_option("--out", po.out, "output directory")->capture_default_str();
  pred->add_option("--checkpoint", po.checkpoint, "trained model");
  pred->add_flag("--fallback-head", po.fallback_head, "use ground-truth maps and the geometric oracle head");
  pred->add_option("--grippers", po.grippers, "comma-separated: parallel,vacuum")->capture_default_str();
  pred->add_option("--t-parallel", po.t_parallel, "fused-score threshold, parallel")->capture_default_str();
  pred->add_option("--t-vacuum", po.t_vacuum, "fused-score threshold, vacuum")->capture_default_str();
  pred->add_option("--seeds", po.seeds, "max seeds per gripper")->capture_default_str();
  pred->add_option("--top-k", po.top_k, "grasps kept per gripper (0 = all)")->capture_default_str();
  pred->add_option("--format", po.format, "PLY format: ascii or binary")->capture_default_str();

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "AP metrics (and optional clearing runs) for predictions");
  eval->add_option("--scenes", eo.scenes, "scene directory")->capture_default_str();
  eval->add_option("--predictions", eo.predictions, "directory written by predict")->capture_default_str();
  eval->add_option("--out", eo.out, "metrics directory")->capture_default_str();
  eval->add_option("--k", eo.k, "largest k of Precision@k")->capture_default_str();
  eval->add_flag("--clearing", eo.clearing, "also simulate clearing runs per gripper");
  eval->add_option("--checkpoint", eo.checkpoint, "model for clearing runs");
  eval->add_flag("--fallback-head", eo.fallback_head, "oracle pipeline for clearing runs");
  eval->add_option("--t-parallel", eo.t_parallel)->capture_default_str();
  eval->add_option("--t-vacuum", eo.t_vacuum)->capture_default_str();
  eval->add_option("--seeds", eo.seeds)->capture_default_str();

  ExportOptions xo;
  auto* exp = app.add_subcommand("export-ply", "color a PLY by one of its scalar channels");
  exp->add_option("--in", xo.input, "input PLY")->required();
  exp->add_option("--out", xo.out, "output PLY")->required();
  exp->add_option("--channel", xo.channel, "scalar channel")->capture_default_str();
  exp->add_option("--format", xo.format, "PLY format: ascii or binary")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (jobs > 0) omp_set_num_threads(jobs);
    if (*synth) return cmd_synth(so);
    if (*labels) return cmd_labels(lo);
    if (*trn) return cmd_train(to);
    if (*pred) return cmd_predict(po);
    if (*eval) return cmd_eval(eo);
    if (*exp) return cmd_export(xo);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
