// Copyright 2026 The Trajformer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajformer/cli/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "trajformer/cli/manifest.hpp"
#include "trajformer/cli/svg.hpp"
#include "trajformer/common/hash.hpp"
#include "trajformer/common/kv_config.hpp"
#include "trajformer/metrics/evaluate.hpp"
#include "trajformer/model/trajectory_model.hpp"
#include "trajformer/scenegen/dataset_io.hpp"
#include "trajformer/trainer/trainer.hpp"

namespace trajformer::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kConfigFile = "config.txt";
constexpr const char* kFinalCheckpoint = "model.ckpt";

struct Options {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::string preset;
  std::vector<std::string> sets;

  // dataset
  std::uint32_t count = 0;
  std::uint64_t seed_base = 0;
  bool shifted = false;
  std::vector<std::string> kinds;
  float difficulty_min = -1.0f;
  float difficulty_max = -1.0f;
  int horizon = scene::kDefaultHorizon;

  // train / eval / predict / plot
  std::string dataset;
  std::string checkpoint;
  std::size_t batch = 32;
  bool stochastic = false;
  std::vector<std::size_t> scenes;
  std::string retention;
};

struct Resolved {
  model::ModelConfig model;
  train::TrainConfig train;
  KeyValueConfig snapshot;  // every resolved key, written to config.txt
};

std::string quote(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::kIo, "failed writing " + path.string());
}

std::string kv_text(const KeyValueConfig& kv) {
  std::string text;
  for (const auto& [key, value] : kv.values()) text += key + " = " + value + "\n";
  return text;
}

fs::path prepare_out_dir(const Options& o) {
  if (o.out.empty()) fail(ErrorKind::kInvalidArgument, "--out is required");
  fs::create_directories(o.out);
  return fs::path(o.out);
}

// Presets first, then the config file, then --set. Without --config a
// config.txt next to the checkpoint is used, so eval and predict pick up
// the configuration a checkpoint was trained with.
Resolved resolve_config(const Options& o, bool use_checkpoint_config) {
  KeyValueConfig file;
  std::string path = o.config_path;
  if (path.empty() && use_checkpoint_config && !o.checkpoint.empty()) {
    const fs::path beside = fs::path(o.checkpoint).parent_path() / kConfigFile;
    if (fs::exists(beside)) path = beside.string();
  }
  if (!path.empty()) file = KeyValueConfig::load(path);
  for (const auto& s : o.sets) file.set_assignment(s);
  for (const auto& [key, value] : file.values()) {
    if (!key.starts_with("model.") && !key.starts_with("train.")) {
      fail(ErrorKind::kMalformedConfig, "unknown config key: " + key);
    }
  }

  auto preset_for = [&](const std::string& key) {
    if (!o.preset.empty()) return o.preset;
    return file.get(key).value_or("desk");
  };
  Resolved r{model::ModelConfig::from_preset(preset_for("model.preset")),
             train::TrainConfig::from_preset(preset_for("train.preset")), {}};
  r.model.apply(file);
  r.train.apply(file);
  if (!o.preset.empty()) r.model.preset = r.train.preset = o.preset;
  r.train.seed = o.seed;
  r.model.validate();
  r.train.validate();
  r.model.write(r.snapshot);
  r.train.write(r.snapshot);
  return r;
}

scene::Dataset load_nonempty(const std::string& path) {
  if (path.empty()) fail(ErrorKind::kInvalidArgument, "--dataset is required");
  scene::Dataset ds = scene::load_dataset(path);
  if (ds.empty()) fail(ErrorKind::kEmptyDataset, "dataset " + path + " has no scenes");
  return ds;
}

void load_checkpoint(model::TrajectoryModel& m, const Options& o) {
  if (o.checkpoint.empty()) fail(ErrorKind::kInvalidArgument, "--checkpoint is required");
  m.load(o.checkpoint);
}

RunManifest base_manifest(const std::string& command, const Options& o, const KeyValueConfig& config) {
  RunManifest m;
  m.command = command;
  m.seed = o.seed;
  m.config = config;
  if (!o.dataset.empty()) m.dataset = file_ref(o.dataset);
  if (!o.checkpoint.empty()) m.checkpoint = file_ref(o.checkpoint);
  return m;
}

int cmd_dataset(const Options& o, std::ostream& out) {
  if (o.out.empty()) fail(ErrorKind::kInvalidArgument, "--out is required");
  scene::DatasetSpec spec;
  spec.count = o.count;
  spec.seed_base = o.seed_base;
  spec.shifted = o.shifted;
  for (const auto& k : o.kinds) spec.kinds.push_back(scene::parse_scenario_kind(k));
  spec.difficulty_min = o.difficulty_min;
  spec.difficulty_max = o.difficulty_max;
  spec.horizon = o.horizon;
  if (spec.horizon < 1) fail(ErrorKind::kInvalidArgument, "--horizon must be >= 1");
  const scene::Dataset ds = scene::make_dataset(spec);
  const fs::path path(o.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  scene::save_dataset(path, ds);

  KeyValueConfig recipe;
  recipe.set("dataset.count", std::to_string(spec.count));
  recipe.set("dataset.seed_base", std::to_string(spec.seed_base));
  recipe.set("dataset.shifted", spec.shifted ? "true" : "false");
  std::string kinds;
  for (const auto& k : o.kinds) kinds += (kinds.empty() ? "" : ",") + k;
  recipe.set("dataset.kinds", kinds);
  recipe.set("dataset.horizon", std::to_string(spec.horizon));
  RunManifest m = base_manifest("dataset", o, recipe);
  m.artifacts.push_back(file_ref(path));
  write_manifest(path.string() + ".manifest.json", m);
  out << "wrote " << ds.size() << " scenes to " << path.string() << "\n";
  return 0;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const Resolved cfg = resolve_config(o, false);
  const scene::Dataset ds = load_nonempty(o.dataset);
  const fs::path dir = prepare_out_dir(o);
  model::TrajectoryModel m(cfg.model, o.seed);
  if (!o.checkpoint.empty()) m.load(o.checkpoint);
  write_text(dir / kConfigFile, kv_text(cfg.snapshot));

  train::FitOptions fo;
  fo.out_dir = dir.string();
  int last_epoch = 0;
  fo.on_step = [&](const train::TrainLogRow& row) {
    if (row.step % 10 == 0 || row.epoch != last_epoch) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "epoch %d step %lld lr %.3g l_pose %.4f l_unc %.4f\n", row.epoch,
                    static_cast<long long>(row.step), row.lr, row.l_pose, row.l_uncertainty);
      err << buf << std::flush;
      last_epoch = row.epoch;
    }
  };
  const train::FitResult r = train::fit(cfg.train, m, ds, fo);
  m.save((dir / kFinalCheckpoint).string());

  RunManifest man = base_manifest("train", o, cfg.snapshot);
  man.artifacts.push_back(file_ref(dir / kConfigFile));
  man.artifacts.push_back(file_ref(dir / "train.csv"));
  for (const auto& c : r.checkpoints) man.artifacts.push_back(file_ref(c));
  man.artifacts.push_back(file_ref(dir / kFinalCheckpoint));
  write_manifest(dir / "manifest.json", man);
  out << "trained " << r.log.size() << " steps; checkpoint " << (dir / kFinalCheckpoint).string()
      << "\n";
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const Resolved cfg = resolve_config(o, true);
  const scene::Dataset ds = load_nonempty(o.dataset);
  model::TrajectoryModel m(cfg.model, 0);
  load_checkpoint(m, o);
  const fs::path dir = prepare_out_dir(o);
  const metrics::EvalResult r = metrics::evaluate(m, ds, o.seed, o.batch);

  std::ostringstream metrics_csv, retention_csv, summary;
  metrics::write_metrics_csv(metrics_csv, r.scenes);
  metrics::write_retention_csv(retention_csv, r.retention);
  metrics::write_summary(summary, r.summary);
  write_text(dir / "metrics.csv", metrics_csv.str());
  write_text(dir / "retention.csv", retention_csv.str());
  write_text(dir / "summary.txt", summary.str());

  RunManifest man = base_manifest("eval", o, cfg.snapshot);
  for (const char* f : {"metrics.csv", "retention.csv", "summary.txt"}) man.artifacts.push_back(file_ref(dir / f));
  write_manifest(dir / "manifest.json", man);
  out << summary.str();
  return 0;
}

int cmd_predict(const Options& o, std::ostream& out) {
  const Resolved cfg = resolve_config(o, true);
  const scene::Dataset ds = load_nonempty(o.dataset);
  model::TrajectoryModel m(cfg.model, 0);
  load_checkpoint(m, o);
  const fs::path dir = prepare_out_dir(o);
  std::uint64_t seed = o.seed;
  if (o.stochastic) seed = (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();
  const auto preds = m.predict(ds.scenes, metrics::inference_seeds(ds, seed), o.batch);
  std::ostringstream csv;
  metrics::write_predictions_csv(csv, preds);
  write_text(dir / "predictions.csv", csv.str());

  RunManifest man = base_manifest("predict", o, cfg.snapshot);
  man.seed = seed;
  man.artifacts.push_back(file_ref(dir / "predictions.csv"));
  write_manifest(dir / "manifest.json", man);
  out << "wrote " << preds.size() << " predictions to " << (dir / "predictions.csv").string() << "\n";
  return 0;
}

metrics::RetentionCurve read_retention_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kMissingFile, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "fraction,value") fail(ErrorKind::kMalformedFile, path + ": expected header fraction,value");
  metrics::RetentionCurve c;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(line);
      c.fractions.push_back(std::stod(line.substr(0, comma)));
      c.values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorKind::kMalformedFile, path + ": bad row '" + line + "'");
    }
  }
  if (c.values.empty()) fail(ErrorKind::kMalformedFile, path + ": no rows");
  double sum = 0.0;
  for (double v : c.values) sum += v;
  c.area = sum / static_cast<double>(c.values.size());
  return c;
}

int cmd_plot(const Options& o, std::ostream& out) {
  const fs::path dir = prepare_out_dir(o);
  RunManifest man;
  if (!o.retention.empty()) {
    write_text(dir / "retention.svg", retention_svg(read_retention_csv(o.retention), "retention"));
  }
  if (!o.dataset.empty() || o.retention.empty()) {
    const Resolved cfg = resolve_config(o, true);
    const scene::Dataset ds = load_nonempty(o.dataset);
    model::TrajectoryModel m(cfg.model, 0);
    load_checkpoint(m, o);
    const std::vector<std::size_t> ids = o.scenes.empty() ? std::vector<std::size_t>{0} : o.scenes;
    const auto seeds = metrics::inference_seeds(ds, o.seed);
    for (std::size_t id : ids) {
      if (id >= ds.size()) {
        fail(ErrorKind::kInvalidArgument,
             "--scene " + std::to_string(id) + " out of range for " + std::to_string(ds.size()) + " scenes");
      }
      const auto pred = m.predict(std::span(&ds.scenes[id], 1), std::span(&seeds[id], 1), 1);
      const std::string title = "scene " + std::to_string(id) + " (" +
                                std::string(scene::to_string(ds.scenes[id].kind)) + ")";
      const std::string name = "scene_" + std::to_string(id) + ".svg";
      write_text(dir / name, trajectory_svg(ds.scenes[id], pred.front(), title));
      out << "wrote " << (dir / name).string() << "\n";
    }
    man = base_manifest("plot", o, cfg.snapshot);
    for (std::size_t id : ids) man.artifacts.push_back(file_ref(dir / ("scene_" + std::to_string(id) + ".svg")));
  } else {
    man = base_manifest("plot", o, {});
  }
  if (!o.retention.empty()) {
    man.artifacts.push_back(file_ref(o.retention));
    man.artifacts.push_back(file_ref(dir / "retention.svg"));
    out << "wrote " << (dir / "retention.svg").string() << "\n";
  }
  write_manifest(dir / "manifest.json", man);
  return 0;
}

void report(std::ostream& err, int code, std::string_view kind, std::string_view msg) {
  err << "error: code=" << code << " kind=" << kind << " msg=\"" << quote(msg) << "\"\n";
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingFile: return 2;
    case ErrorKind::kMalformedConfig:
    case ErrorKind::kMalformedFile:
    case ErrorKind::kEmptyDataset: return 3;
    case ErrorKind::kShapeMismatch: return 4;
    default: return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Transformer trajectory prediction on synthetic driving scenes", "trajformer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "key = value config file");
    sub->add_option("--seed", o.seed, "run seed");
    sub->add_option("--out", o.out, "output path");
    sub->add_option("--preset", o.preset, "model and training preset")->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--set", o.sets, "override a config key (key=value)");
  };
  auto inputs = [&](CLI::App* sub) {
    sub->add_option("--dataset", o.dataset, "dataset file");
    sub->add_option("--checkpoint", o.checkpoint, "model checkpoint");
    sub->add_option("--batch", o.batch, "inference batch size")->check(CLI::PositiveNumber);
  };

  CLI::App* dataset = app.add_subcommand("dataset", "generate a synthetic dataset");
  common(dataset);
  dataset->add_option("--count", o.count, "number of scenes");
  dataset->add_option("--seed-base", o.seed_base, "seed of the first scene");
  dataset->add_flag("--shifted", o.shifted, "hard stop scenes absent from the default mix");
  dataset->add_option("--kinds", o.kinds, "scenario kinds (straight, turn, fork, stop)")->delimiter(',');
  dataset->add_option("--difficulty-min", o.difficulty_min, "lowest difficulty");
  dataset->add_option("--difficulty-max", o.difficulty_max, "highest difficulty");
  dataset->add_option("--horizon", o.horizon, "future steps per scene");

  CLI::App* train = app.add_subcommand("train", "train a model");
  common(train);
  inputs(train);

  CLI::App* eval = app.add_subcommand("eval", "score a checkpoint on a dataset");
  common(eval);
  inputs(eval);

  CLI::App* predict = app.add_subcommand("predict", "write predictions.csv");
  common(predict);
  inputs(predict);
  predict->add_flag("--stochastic", o.stochastic, "draw a fresh noise seed");

  CLI::App* plot = app.add_subcommand("plot", "render SVG plots");
  common(plot);
  inputs(plot);
  plot->add_option("--scene", o.scenes, "dataset index to plot (repeatable)");
  plot->add_option("--retention", o.retention, "retention.csv to plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, 3, "malformed_config", e.what());
    return 3;
  }

  try {
    if (dataset->parsed()) return cmd_dataset(o, out);
    if (train->parsed()) return cmd_train(o, out, err);
    if (eval->parsed()) return cmd_eval(o, out);
    if (predict->parsed()) return cmd_predict(o, out);
    if (plot->parsed()) return cmd_plot(o, out);
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    report(err, code, to_string(e.kind()), e.what());
    return code;
  } catch (const fs::filesystem_error& e) {
    report(err, 1, "io", e.what());
    return 1;
  } catch (const std::exception& e) {
    report(err, 1, "internal", e.what());
    return 1;
  }
  return 1;
}

}  // namespace trajformer::cli
