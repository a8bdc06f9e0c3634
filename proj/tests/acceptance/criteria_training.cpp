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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "harness.hpp"
#include "trajformer/cli/commands.hpp"
#include "trajformer/metrics/evaluate.hpp"
#include "trajformer/metrics/metrics.hpp"
#include "trajformer/trainer/trainer.hpp"

namespace trajformer::acceptance {
namespace {

std::string num(double v, const char* fmt = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

constexpr std::uint64_t kInitSeed = 7;
constexpr std::uint64_t kEvalSeed = 5;

// Overfit run settings. Regularizers are off so the 32 scenes can be memorized;
// the learning rate is held constant after warm-up.
constexpr int kOverfitSteps = 300;
constexpr double kOverfitLr = 5e-4;

// Fork fine-tuning continues from the overfit weights.
constexpr std::uint32_t kForkTrain = 256;
constexpr std::uint32_t kForkHeldOut = 50;
constexpr int kForkEpochs = 80;
constexpr double kForkLr = 5e-4;

model::ModelConfig overfit_model_config() {
  model::ModelConfig c = model::ModelConfig::desk();
  c.dropout = 0.0f;
  return c;
}

// Shared between criteria: the model after overfitting, then after fork training.
struct SharedState {
  std::unique_ptr<model::TrajectoryModel> model;
  bool overfit_done = false;
  bool fork_done = false;
};

SharedState& state() {
  static SharedState s;
  return s;
}

scene::Dataset fork_dataset(std::uint32_t count, std::uint64_t seed_base) {
  scene::DatasetSpec spec;
  spec.count = count;
  spec.seed_base = seed_base;
  spec.kinds = {scene::ScenarioKind::kFork};
  return scene::make_dataset(spec);
}

Outcome overfit() {
  scene::DatasetSpec spec;
  spec.count = 32;
  spec.seed_base = 1000;
  const scene::Dataset data = scene::make_dataset(spec);

  SharedState& s = state();
  s.model = std::make_unique<model::TrajectoryModel>(overfit_model_config(), kInitSeed);
  train::TrainConfig tc = train::TrainConfig::desk();
  tc.epochs_adamw = kOverfitSteps;  // one full batch per epoch
  tc.epochs_sgd = 0;
  tc.batch_size = 32;
  tc.lr_adamw = kOverfitLr;
  tc.min_lr = kOverfitLr;
  tc.seed = 1;
  const train::FitResult r = train::fit(tc, *s.model, data);
  s.overfit_done = true;

  const double first = r.log.front().l_pose;
  const double last = r.log.back().l_pose;
  const double ratio = last / first;
  const metrics::EvalResult ev = metrics::evaluate(*s.model, data, kEvalSeed);
  return {ratio < 0.2 && ev.summary.min_ade < 0.5,
          "l_pose " + num(first) + " -> " + num(last) + " (ratio " + num(ratio, "%.4f") +
              "), training-set minADE_k5 " + num(ev.summary.min_ade, "%.3f") + " m, minFDE_k5 " +
              num(ev.summary.min_fde, "%.3f") + " m over " + std::to_string(r.log.size()) + " steps"};
}

Outcome multimodality() {
  SharedState& s = state();
  if (!s.overfit_done) return {false, "overfit criterion did not run"};
  const scene::Dataset train_set = fork_dataset(kForkTrain, 20000);
  const scene::Dataset held_out = fork_dataset(kForkHeldOut, 30000);

  train::TrainConfig tc = train::TrainConfig::desk();
  tc.epochs_adamw = kForkEpochs;
  tc.epochs_sgd = 0;
  tc.batch_size = 32;
  tc.lr_adamw = kForkLr;
  tc.min_lr = kForkLr;
  tc.seed = 2;
  train::fit(tc, *s.model, train_set);
  s.fork_done = true;

  const metrics::EvalResult ev = metrics::evaluate(*s.model, held_out, kEvalSeed);
  std::size_t top1_worse = 0;
  double top1_mean = 0.0;
  for (const auto& e : ev.scenes) {
    if (e.top1_ade > e.min_ade) ++top1_worse;
    top1_mean += e.top1_ade;
  }
  top1_mean /= static_cast<double>(ev.scenes.size());
  const double share = static_cast<double>(top1_worse) / static_cast<double>(ev.scenes.size());
  return {ev.summary.min_ade < 1.0 && share >= 0.6,
          "held-out minADE_k5 " + num(ev.summary.min_ade, "%.3f") + " m, top-1 ADE " +
              num(top1_mean, "%.3f") + " m, top-1 worse than best on " + std::to_string(top1_worse) +
              "/" + std::to_string(ev.scenes.size()) + " scenes"};
}

Outcome uncertainty_ordering() {
  SharedState& s = state();
  if (!s.fork_done) return {false, "fork training did not run"};
  scene::DatasetSpec easy;
  easy.count = 50;
  easy.seed_base = 40000;
  easy.difficulty_min = 0.0f;
  easy.difficulty_max = 0.0f;
  scene::DatasetSpec hard = easy;
  hard.seed_base = 50000;
  hard.difficulty_min = 0.7f;
  hard.difficulty_max = 1.0f;
  scene::Dataset mixed = scene::make_dataset(easy);
  const scene::Dataset hard_set = scene::make_dataset(hard);
  mixed.scenes.insert(mixed.scenes.end(), hard_set.scenes.begin(), hard_set.scenes.end());

  const metrics::EvalResult ev = metrics::evaluate(*s.model, mixed, kEvalSeed);
  std::vector<double> u;
  std::vector<double> nll;
  for (const auto& e : ev.scenes) {
    u.push_back(e.uncertainty);
    nll.push_back(e.cnll);
  }
  const double rho = metrics::spearman(u, nll);
  double mean_u = 0.0;
  for (double v : u) mean_u += v / static_cast<double>(u.size());
  double var_u = 0.0;
  for (double v : u) var_u += (v - mean_u) * (v - mean_u) / static_cast<double>(u.size());
  auto half_mean = [](const std::vector<double>& v, std::size_t from) {
    double m = 0.0;
    for (std::size_t i = from; i < from + 50; ++i) m += v[i] / 50.0;
    return m;
  };
  std::vector<double> reversed(u.size());
  std::transform(u.begin(), u.end(), reversed.begin(), [](double v) { return -v; });
  const double auc = metrics::retention_curve(nll, u).area;
  const double auc_rev = metrics::retention_curve(nll, reversed).area;
  return {rho > 0.3 && auc < auc_rev,
          "Spearman(U_hat, cNLL) " + num(rho, "%.3f") + ", R-AUC by U_hat " + num(auc) +
              " vs reversed " + num(auc_rev) + "; U_hat sd " + num(std::sqrt(var_u), "%.2f") +
              ", easy/hard mean U_hat " + num(half_mean(u, 0)) + "/" + num(half_mean(u, 50)) +
              ", cNLL " + num(half_mean(nll, 0)) + "/" + num(half_mean(nll, 50))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int invoke(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"trajformer"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path work = fs::temp_directory_path() / "trajformer_acceptance_determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string data = (work / "data.bin").string();
  if (invoke({"dataset", "--count", "16", "--seed-base", "3", "--out", data}) != 0) {
    return {false, "dataset command failed"};
  }
  const std::vector<std::string> sets = {
      "--set", "model.encoder_layers=1", "--set", "model.encoder_dim=32", "--set", "model.latent_dim=16",
      "--set", "model.decoder_layers=1", "--set", "model.decoder_hidden=32",
      "--set", "train.epochs_adamw=2", "--set", "train.epochs_sgd=2", "--set", "train.batch_size=4"};
  std::string train_csv[2];
  std::string summary[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = work / ("run" + std::to_string(run));
    std::vector<std::string> args = {"train", "--dataset", data, "--seed", "11", "--out", dir.string()};
    args.insert(args.end(), sets.begin(), sets.end());
    if (invoke(args) != 0) return {false, "train command failed"};
    train_csv[run] = slurp(dir / "train.csv");
  }
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = work / ("eval" + std::to_string(run));
    if (invoke({"eval", "--dataset", data, "--checkpoint", (work / "run0" / "model.ckpt").string(), "--seed",
                "11", "--out", dir.string()}) != 0) {
      return {false, "eval command failed"};
    }
    summary[run] = slurp(dir / "summary.txt");
  }
  const std::size_t rows = static_cast<std::size_t>(std::count(train_csv[0].begin(), train_csv[0].end(), '\n'));
  fs::remove_all(work);
  const bool same_train = !train_csv[0].empty() && train_csv[0] == train_csv[1];
  const bool same_eval = !summary[0].empty() && summary[0] == summary[1];
  return {same_train && same_eval,
          std::string("train.csv ") + (same_train ? "identical" : "differs") + " (" + std::to_string(rows) +
              " lines), summary.txt " + (same_eval ? "identical" : "differs")};
}

}  // namespace

std::vector<Criterion> training_criteria() {
  return {
      {"overfit", "l_pose ratio < 0.2 and minADE_k5 < 0.5 m, runtime < 600 s", 600.0, overfit,
       "300 steps leave minADE_k5 near 0.55-0.65 m on one CPU; about 1000 steps reach 0.2 m"},
      {"multimodality", "held-out minADE_k5 < 1.0 m and top-1 ADE > minADE on >= 60% of scenes", 0.0,
       multimodality},
      {"uncertainty_ordering", "Spearman > 0.3 and R-AUC(U_hat) < R-AUC(reversed)", 0.0, uncertainty_ordering,
       "once 256 fork scenes are fitted the training l_pose is nearly uniform, so U_hat regresses to an "
       "almost constant value and held-out cNLL differences stay invisible to it"},
      {"determinism", "byte-identical train.csv and summary.txt", 0.0, determinism},
  };
}

}  // namespace trajformer::acceptance
