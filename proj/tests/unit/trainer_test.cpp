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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "test_util.hpp"
#include "trajformer/common/error.hpp"
#include "trajformer/metrics/evaluate.hpp"
#include "trajformer/scenegen/dataset_io.hpp"
#include "trajformer/trainer/optimizer.hpp"
#include "trajformer/trainer/schedule.hpp"
#include "trajformer/trainer/train_config.hpp"
#include "trajformer/trainer/trainer.hpp"

namespace tr = trajformer::train;
namespace dg = trajformer::dg;
using trajformer::ErrorKind;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const trajformer::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kIo;
}

trajformer::model::ModelConfig small_model() {
  auto c = trajformer::model::ModelConfig::desk();
  c.encoder_layers = 1;
  c.encoder_dim = 32;
  c.encoder_heads = 2;
  c.latent_dim = 16;
  c.decoder_layers = 1;
  c.decoder_hidden = 32;
  c.decoder_heads = 2;
  return c;
}

trajformer::scene::Dataset scenes(std::size_t n, std::uint64_t base = 0) {
  trajformer::scene::DatasetSpec spec;
  spec.count = n;
  spec.seed_base = base;
  return trajformer::scene::make_dataset(spec);
}

}  // namespace

TEST_CASE("cosine_lr examples") {
  const double base = 1e-3, lo = 1e-5;
  CHECK(tr::cosine_lr(10, base, lo, 10, 100, false) == doctest::Approx(base));
  CHECK(tr::cosine_lr(5, base, lo, 10, 100, false) == doctest::Approx(base / 2));
  CHECK(tr::cosine_lr(0, base, lo, 10, 100, false) == 0.0);
  CHECK(tr::cosine_lr(110, base, lo, 10, 100, false) == doctest::Approx(lo));
  CHECK(tr::cosine_lr(500, base, lo, 10, 100, false) == doctest::Approx(lo));
  CHECK(tr::cosine_lr(60, base, lo, 10, 100, false) == doctest::Approx((base + lo) / 2));
  CHECK(tr::cosine_lr(110, base, lo, 10, 100, true) == doctest::Approx(base));
  CHECK(tr::cosine_lr(160, base, lo, 10, 100, true) == doctest::Approx((base + lo) / 2));
  CHECK(tr::cosine_lr(0, base, lo, 0, 100, false) == doctest::Approx(base));
  // p = period / 4: cos(pi / 4) = sqrt(2) / 2.
  CHECK(tr::cosine_lr(25, base, lo, 0, 100, false) ==
        doctest::Approx(lo + 0.5 * (base - lo) * (1 + std::numbers::sqrt2 / 2)));
}

TEST_CASE("AdamW converges on a 1-D quadratic") {
  dg::ParameterSet ps;
  auto w = ps.add("w", dg::Tensor::from({1.0f}));
  tr::AdamW opt(ps, tr::AdamWOptions{.weight_decay = 0.0});
  for (int i = 0; i < 200; ++i) {
    const dg::Tensor g = dg::Tensor::from({2.0f * (*w)[0]});
    const dg::Tensor* gs[] = {&g};
    opt.step(gs, 0.1);
  }
  CHECK(std::abs((*w)[0]) < 1e-2);
}

TEST_CASE("AdamW first step matches the update rule") {
  dg::ParameterSet ps;
  auto w = ps.add("w", dg::Tensor::from({2.0f, -1.0f}));
  tr::AdamW opt(ps, tr::AdamWOptions{.weight_decay = 0.1});
  const dg::Tensor g = dg::Tensor::from({0.5f, -3.0f});
  const dg::Tensor* gs[] = {&g};
  opt.step(gs, 0.01);
  // Bias-corrected first step moves each weight by lr * g / (|g| + eps).
  for (int i = 0; i < 2; ++i) {
    const double w0 = i == 0 ? 2.0 : -1.0;
    const double gi = g[static_cast<std::size_t>(i)];
    const double expect = w0 * (1 - 0.01 * 0.1) - 0.01 * gi / (std::abs(gi) + 1e-8);
    CHECK((*w)[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("decoupled decay and zero gradients") {
  dg::ParameterSet ps;
  auto w = ps.add("w", dg::Tensor::from({3.0f, -2.0f, 0.5f}));
  const dg::Tensor zero({3});
  const dg::Tensor* gs[] = {&zero};
  {
    tr::AdamW opt(ps, tr::AdamWOptions{.weight_decay = 0.0});
    opt.step(gs, 0.1);
    CHECK((*w)[0] == 3.0f);
    CHECK((*w)[1] == -2.0f);
  }
  {
    tr::AdamW opt(ps, tr::AdamWOptions{.weight_decay = 0.2});
    opt.step(gs, 0.1);
    CHECK((*w)[0] == doctest::Approx(3.0 * (1 - 0.1 * 0.2)));
    CHECK((*w)[1] == doctest::Approx(-2.0 * (1 - 0.1 * 0.2)));
    CHECK((*w)[2] == doctest::Approx(0.5 * (1 - 0.1 * 0.2)));
  }
  {
    const float before = (*w)[0];
    tr::Sgd opt(ps, tr::SgdOptions{0.9, 0.0});
    const dg::Tensor* none[] = {nullptr};
    opt.step(none, 0.5);
    CHECK((*w)[0] == before);
  }
}

TEST_CASE("SGD momentum over two steps") {
  dg::ParameterSet ps;
  auto w = ps.add("w", dg::Tensor::from({1.0f}));
  tr::Sgd opt(ps, tr::SgdOptions{0.9, 0.0});
  const dg::Tensor g = dg::Tensor::from({2.0f});
  const dg::Tensor* gs[] = {&g};
  opt.step(gs, 0.1);
  CHECK((*w)[0] == doctest::Approx(1.0 - 0.1 * 2.0));
  opt.step(gs, 0.1);
  CHECK((*w)[0] == doctest::Approx(1.0 - 0.1 * 2.0 - 0.1 * 1.9 * 2.0));
  CHECK(opt.momentum_buffers()[0].shape() == w->shape());
}

TEST_CASE("non-finite gradients abort before any update") {
  dg::ParameterSet ps;
  auto a = ps.add("a", dg::Tensor::from({1.0f}));
  auto b = ps.add("b", dg::Tensor::from({1.0f}));
  const dg::Tensor ga = dg::Tensor::from({1.0f});
  const dg::Tensor gb = dg::Tensor::from({std::nanf("")});
  const dg::Tensor* gs[] = {&ga, &gb};
  tr::AdamW opt(ps);
  CHECK(kind_of([&] { opt.step(gs, 0.1); }) == ErrorKind::kNonFinite);
  CHECK((*a)[0] == 1.0f);
  CHECK(opt.steps() == 0);
}

TEST_CASE("clip_grad_norm") {
  dg::Tensor a = dg::Tensor::from({3.0f});
  dg::Tensor b = dg::Tensor::from({4.0f});
  dg::Tensor* gs[] = {&a, nullptr, &b};
  CHECK(tr::clip_grad_norm(gs, 1.0) == doctest::Approx(5.0));
  CHECK(a[0] == doctest::Approx(0.6));
  CHECK(b[0] == doctest::Approx(0.8));
  CHECK(tr::clip_grad_norm(gs, 10.0) == doctest::Approx(1.0));
  CHECK(a[0] == doctest::Approx(0.6));
}

TEST_CASE("TrainConfig presets, key-value round trip and validation") {
  const auto desk = tr::TrainConfig::desk();
  CHECK(desk.lr_adamw == 1e-4);
  CHECK(desk.lr_sgd == 1e-3);
  CHECK(desk.weight_decay == 1e-2);
  CHECK(desk.batch_size == 32);
  const auto paper = tr::TrainConfig::paper();
  CHECK(paper.batch_size == 1024);
  CHECK(paper.epochs_adamw == 40);
  CHECK(paper.epochs_sgd == 40);

  tr::TrainConfig c;
  c.seed = 18446744073709551615ULL;
  c.lr_adamw = 3.3e-4;
  c.warmup_steps = 7;
  trajformer::KeyValueConfig kv;
  c.write(kv);
  tr::TrainConfig back;
  back.apply(kv);
  CHECK(back == c);

  trajformer::KeyValueConfig bad;
  bad.set("train.nope", "1");
  CHECK(kind_of([&] { back.apply(bad); }) == ErrorKind::kMalformedConfig);
  bad = {};
  bad.set("train.seed", "-3");
  CHECK(kind_of([&] { back.apply(bad); }) == ErrorKind::kMalformedConfig);

  tr::TrainConfig z;
  z.batch_size = 0;
  CHECK(kind_of([&] { z.validate(); }) == ErrorKind::kInvalidArgument);
  CHECK(tr::resolved_warmup(desk, 200) == 10);
  CHECK(tr::resolved_restart_period(desk, 200) == 95);
}

TEST_CASE("fit: two epochs on 32 scenes lower the loss") {
  const auto ds = scenes(32);
  trajformer::model::TrajectoryModel m(trajformer::model::ModelConfig::desk(), 3);
  auto mean_cnll = [&] { return trajformer::metrics::evaluate(m, ds, 5).summary.cnll; };
  const double before = mean_cnll();
  tr::TrainConfig c;
  c.epochs_adamw = 2;
  c.epochs_sgd = 0;
  c.batch_size = 8;
  c.lr_adamw = 1e-3;
  const auto r = tr::fit(c, m, ds);
  CHECK(r.log.size() == 8);
  const double after = mean_cnll();
  MESSAGE("mean cNLL " << before << " -> " << after);
  CHECK(after < before);
}

TEST_CASE("fit: determinism, schedule log and phases") {
  const auto ds = scenes(12);
  tr::TrainConfig c;
  c.epochs_adamw = 2;
  c.epochs_sgd = 2;
  c.batch_size = 5;  // last batch of each epoch is partial
  c.lr_adamw = 1e-3;
  c.lr_sgd = 1e-2;
  c.seed = 9;
  trajformer::testing::TempDir dir("fit");

  trajformer::model::TrajectoryModel a(small_model(), 1);
  trajformer::model::TrajectoryModel b(small_model(), 1);
  const auto ra = tr::fit(c, a, ds, {.out_dir = dir.file("a")});
  const auto rb = tr::fit(c, b, ds, {.out_dir = dir.file("b")});
  REQUIRE(ra.log.size() == 12);
  CHECK(ra.log == rb.log);
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    CHECK(a.parameters().items()[i].tensor->bitwise_equal(*b.parameters().items()[i].tensor));
  }
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string csv = slurp(dir.file("a") + "/train.csv");
  CHECK(csv == slurp(dir.file("b") + "/train.csv"));
  CHECK(csv.starts_with("step,lr,l_pose,l_uncertainty\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(ra.checkpoints.size() == 4);
  CHECK(ra.checkpoints.back().ends_with("ckpt_epoch_4"));

  // Checkpoint of the final epoch reproduces the trained weights.
  trajformer::model::TrajectoryModel reload(small_model(), 2);
  reload.load(ra.checkpoints.back());
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    CHECK(a.parameters().items()[i].tensor->bitwise_equal(*reload.parameters().items()[i].tensor));
  }

  // Phase 1: 6 steps, warm-up 0, cosine without restarts. Phase 2 restarts
  // every 3 steps with the optimizer step counter reset.
  for (std::size_t i = 0; i < ra.log.size(); ++i) {
    const auto& row = ra.log[i];
    CHECK(row.step == static_cast<std::int64_t>(i));
    if (i < 6) {
      CHECK(row.phase == tr::Phase::kAdamW);
      CHECK(row.lr == tr::cosine_lr(static_cast<std::int64_t>(i), c.lr_adamw, c.min_lr, 0, 6, false));
    } else {
      CHECK(row.phase == tr::Phase::kSgd);
      CHECK(row.lr == tr::cosine_lr(static_cast<std::int64_t>(i - 6), c.lr_sgd, c.min_lr, 0, 3, true));
    }
  }
  CHECK(ra.log[6].lr == c.lr_sgd);
  CHECK(ra.log[9].lr == c.lr_sgd);
}

TEST_CASE("fit: epochs_sgd = 0 logs only AdamW steps") {
  const auto ds = scenes(6);
  tr::TrainConfig c;
  c.epochs_adamw = 3;
  c.epochs_sgd = 0;
  c.batch_size = 3;
  trajformer::model::TrajectoryModel m(small_model(), 1);
  const auto r = tr::fit(c, m, ds);
  CHECK(r.log.size() == 6);
  for (const auto& row : r.log) CHECK(row.phase == tr::Phase::kAdamW);
  CHECK(r.log.back().epoch == 3);
  CHECK(r.checkpoints.empty());
}

TEST_CASE("fit: errors") {
  trajformer::model::TrajectoryModel m(small_model(), 1);
  tr::TrainConfig c;
  c.batch_size = 2;
  CHECK(kind_of([&] { tr::fit(c, m, trajformer::scene::Dataset{}); }) == ErrorKind::kEmptyDataset);

  c.batch_size = 4;
  CHECK(kind_of([&] { tr::fit(c, m, scenes(2)); }) == ErrorKind::kInvalidArgument);

  auto short_future = scenes(2);
  short_future.scenes[1].future.points.pop_back();
  c.batch_size = 2;
  CHECK(kind_of([&] { tr::fit(c, m, short_future); }) == ErrorKind::kShapeMismatch);

  c.lr_adamw = 1e4;
  c.warmup_steps = 0;
  c.epochs_adamw = 20;
  c.epochs_sgd = 0;
  c.grad_clip = 1e9;
  CHECK(kind_of([&] { tr::fit(c, m, scenes(2)); }) == ErrorKind::kDivergence);
}
