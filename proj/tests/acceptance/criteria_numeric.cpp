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
#include <numbers>
#include <numeric>
#include <string>

#include "../support/op_cases.hpp"
#include "harness.hpp"
#include "trajformer/common/hash.hpp"
#include "trajformer/common/rng.hpp"
#include "trajformer/diffgraph/grad_check.hpp"
#include "trajformer/diffgraph/ops.hpp"
#include "trajformer/losses/losses.hpp"
#include "trajformer/metrics/metrics.hpp"
#include "trajformer/model/decoder.hpp"
#include "trajformer/model/trajectory_model.hpp"
#include "trajformer/scenegen/dataset_io.hpp"

namespace trajformer::acceptance {

namespace {

std::string num(double v, const char* spec = "%.9g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// mixture_nll for K hypotheses over T steps where hypothesis k is the
// ground truth shifted by offsets[k] metres along x.
double nll_case(const std::vector<float>& conf, const std::vector<float>& offsets, int horizon) {
  const auto k = static_cast<std::int64_t>(conf.size());
  dg::Graph g(false);
  dg::Tensor gt({1, 2 * horizon});
  dg::Tensor traj({1, k, 2 * horizon});
  for (int t = 0; t < horizon; ++t) {
    gt[2 * t] = 0.7f * static_cast<float>(t + 1);
    gt[2 * t + 1] = -0.2f * static_cast<float>(t);
    for (std::int64_t h = 0; h < k; ++h) {
      traj[h * 2 * horizon + 2 * t] = gt[2 * t] + offsets[static_cast<std::size_t>(h)];
      traj[h * 2 * horizon + 2 * t + 1] = gt[2 * t + 1];
    }
  }
  dg::Tensor c({1, k}, conf);
  return losses::mixture_nll(g.constant(traj), g.constant(c), g.constant(gt)).value().item();
}

Outcome loss_closed_form() {
  struct Row {
    std::string what;
    double got;
    double expect;
    double tol;
  };
  std::vector<Row> rows;
  rows.push_back({"K=1 T=25 exact", nll_case({1.0f}, {0.0f}, 25), 25 * kLog2Pi, 1e-4});
  rows.push_back({"K=1 T=25 exact vs 45.946918", nll_case({1.0f}, {0.0f}, 25), 45.946918, 1e-4});
  rows.push_back({"K=1 T=1 exact", nll_case({1.0f}, {0.0f}, 1), kLog2Pi, 1e-6});
  rows.push_back({"K=1 T=1 offset 1", nll_case({1.0f}, {1.0f}, 1), kLog2Pi + 0.5, 1e-6});
  rows.push_back({"K=2 far component", nll_case({0.5f, 0.5f}, {0.0f, 100.0f}, 1), kLog2Pi + std::log(2.0), 1e-6});

  dg::Graph g(false);
  auto unc = [&](std::vector<float> target, std::vector<float> u) {
    const auto b = static_cast<std::int64_t>(target.size());
    return losses::uncertainty_loss(g.constant(dg::Tensor({b}, std::move(target))),
                                    g.constant(dg::Tensor({b}, std::move(u))))
        .value()
        .item();
  };
  rows.push_back({"RMSE equal", unc({1.5f, -2.0f, 7.0f}, {1.5f, -2.0f, 7.0f}), 0.0, 1e-6});
  rows.push_back({"RMSE [0,0] vs [2,4]", unc({0, 0}, {2, 4}), std::sqrt(10.0), 1e-6});
  rows.push_back({"RMSE B=1", unc({45.946918f}, {45.946918f}), 0.0, 1e-6});

  auto total = [&](int horizon, float offset, float u_hat, float lambda) {
    dg::Tensor gt({1, 2 * horizon});
    dg::Tensor traj({1, 1, 2 * horizon});
    for (int t = 0; t < 2 * horizon; ++t) traj[static_cast<std::size_t>(t)] = gt[static_cast<std::size_t>(t)] + (t % 2 == 0 ? offset : 0.0f);
    return losses::total_loss(g.constant(traj), g.constant(dg::Tensor({1, 1}, 0.0f)),
                              g.constant(dg::Tensor({1}, {u_hat})), g.constant(gt), lambda)
        .total.value()
        .item();
  };
  rows.push_back({"total lambda=0", total(1, 1.0f, 100.0f, 0.0f), kLog2Pi + 0.5, 1e-6});
  rows.push_back({"total perfect", total(25, 0.0f, static_cast<float>(25 * kLog2Pi), 1.0f), 25 * kLog2Pi, 1e-4});
  rows.push_back({"total offset 1", total(1, 1.0f, static_cast<float>(kLog2Pi + 0.5), 1.0f), kLog2Pi + 0.5, 1e-6});

  Outcome o{true, ""};
  double worst = 0.0;
  for (const auto& r : rows) {
    const double err = std::abs(r.got - r.expect);
    worst = std::max(worst, err);
    if (!(err <= r.tol)) {
      o.pass = false;
      o.detail += r.what + " got " + num(r.got) + " want " + num(r.expect) + "; ";
    }
  }
  o.detail += "mixture_nll(K=1,T=25,exact) = " + num(rows[0].got) + ", " + std::to_string(rows.size()) +
              " closed forms, worst abs error " + num(worst, "%.2e");
  return o;
}

// Retention by explicit enumeration: keep the m least uncertain scenes
// (ties by index), zero for the rest.
double brute_area(const std::vector<double>& e, const std::vector<double>& u,
                  const std::vector<double>& fractions, std::vector<double>* values) {
  const std::size_t n = e.size();
  double area = 0.0;
  for (double f : fractions) {
    const auto m = static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9));
    std::vector<bool> kept(n, false);
    for (std::size_t step = 0; step < m; ++step) {
      std::size_t best = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (!kept[i] && (best == n || u[i] < u[best])) best = i;
      }
      kept[best] = true;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += kept[i] ? e[i] : 0.0;
    if (values) values->push_back(s / static_cast<double>(n));
    area += s / static_cast<double>(n);
  }
  return area / static_cast<double>(fractions.size());
}

Outcome metrics_oracle() {
  Outcome o{true, ""};
  const std::vector<double> e{1, 2, 3, 4};
  const std::vector<double> f{0.25, 0.5, 0.75, 1.0};
  for (const auto& [u, area] : {std::pair{std::vector<double>{0.1, 0.2, 0.3, 0.4}, 1.25},
                                std::pair{std::vector<double>{0.4, 0.3, 0.2, 0.1}, 1.875}}) {
    const auto curve = metrics::retention_curve(e, u, f);
    std::vector<double> brute_values;
    const double brute = brute_area(e, u, f, &brute_values);
    const bool ok = curve.area == area && brute == area && curve.values == brute_values;
    o.pass = o.pass && ok;
    o.detail += "area " + num(curve.area) + " (brute " + num(brute) + ", want " + num(area) + "); ";
  }

  Rng rng(2024);
  std::size_t orderings = 0;
  bool minimal = true;
  for (std::size_t n = 1; n <= 7; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<double> err(n);
      for (auto& v : err) v = rng.uniform(0.0, 10.0);
      const double oracle = metrics::retention_curve(err, err).area;
      std::vector<double> rank(n);
      std::iota(rank.begin(), rank.end(), 0.0);
      do {
        ++orderings;
        if (oracle > metrics::retention_curve(err, rank).area + 1e-12) minimal = false;
      } while (std::next_permutation(rank.begin(), rank.end()));
    }
  }
  o.pass = o.pass && minimal;
  o.detail += "oracle ordering minimal over " + std::to_string(orderings) + " exhaustive orderings (N<=7): " +
              (minimal ? "yes" : "NO");
  return o;
}

Outcome softmax_normalization() {
  const model::ModelConfig cfg = model::ModelConfig::desk();
  double worst = 0.0;
  constexpr int kDecoders = 100;
  constexpr int kHeads = 100;
  for (int draw = 0; draw < kDecoders; ++draw) {
    Rng rng(derive_seed(77, "softmax-draw", static_cast<std::uint64_t>(draw)));
    dg::ParameterSet params;
    const model::Decoder decoder(params, cfg, rng);
    // Weight scales spread over three decades so logits range from tiny to huge.
    const double scale = std::pow(10.0, rng.uniform(0.0, 3.0));
    for (const auto& p : params.items()) {
      for (float& v : p.tensor->data()) v = static_cast<float>(v * scale);
    }
    const auto head_w = params.find("dec.conf.w");
    const auto head_b = params.find("dec.conf.b");
    for (int head = 0; head < kHeads; ++head) {
      const double head_scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
      for (float& v : head_w->data()) v = static_cast<float>(rng.normal() * head_scale);
      for (float& v : head_b->data()) v = static_cast<float>(rng.normal() * head_scale);
      dg::Tensor slots({2, cfg.k, cfg.slot_dim()});
      for (float& v : slots.data()) v = static_cast<float>(rng.normal());
      dg::Graph g(false);
      const auto out = decoder(model::ForwardContext{g}, g.constant(slots));
      const dg::Tensor& c = out.confidences.value();
      for (std::int64_t b = 0; b < 2; ++b) {
        double s = 0.0;
        for (int k = 0; k < cfg.k; ++k) {
          const float ck = c[static_cast<std::size_t>(b * cfg.k + k)];
          if (ck < 0.0f) return {false, "negative confidence at draw " + std::to_string(draw)};
          s += ck;
        }
        worst = std::max(worst, std::abs(s - 1.0));
      }
    }
  }
  return {worst <= 1e-6, "max |sum c - 1| = " + num(worst, "%.3e") + " over " +
                             std::to_string(kDecoders * kHeads) +
                             " weight draws (100 decoders x 100 confidence heads), 2 scenes each"};
}

// Desk-preset loss as a function of one parameter tensor, checked against
// central differences on a seeded subset of its elements.
double end_to_end_grad_check(std::uint64_t seed, std::size_t elements_per_tensor, std::string* worst_name,
                             double* surrogate_mismatch) {
  const model::ModelConfig cfg = model::ModelConfig::desk();
  model::TrajectoryModel m(cfg, seed);
  scene::DatasetSpec spec;
  spec.count = 2;
  spec.seed_base = 500 + seed * 10;
  const scene::Dataset ds = scene::make_dataset(spec);
  const dg::Tensor patches = model::scene_patches(ds.scenes, cfg);
  const std::uint64_t noise_seeds[] = {derive_seed(seed, "n", 0), derive_seed(seed, "n", 1)};
  const dg::Tensor noise = model::sample_noise(cfg.k, cfg.noise_dim, noise_seeds);

  // Ground truth a short distance from the first hypothesis keeps the loss moderate.
  dg::Tensor gt({2, 2 * cfg.horizon});
  {
    dg::Graph g(false);
    const auto out = m.forward(model::ForwardContext{g}, patches, &noise);
    const dg::Tensor& traj = out.decoded.trajectories.value();
    Rng rng(derive_seed(seed, "gt"));
    for (std::int64_t b = 0; b < 2; ++b) {
      for (int i = 0; i < 2 * cfg.horizon; ++i) {
        gt[static_cast<std::size_t>(b * 2 * cfg.horizon + i)] =
            traj[static_cast<std::size_t>(b * cfg.k * 2 * cfg.horizon + i)] + static_cast<float>(0.5 * rng.normal());
      }
    }
  }

  // The uncertainty term regresses onto detached l_pose values, so the
  // finite-difference oracle holds those targets at their base-point values.
  dg::Tensor targets;
  {
    dg::Graph g(false);
    const auto out = m.forward(model::ForwardContext{g}, patches, &noise);
    targets = losses::mixture_nll_log(out.decoded.trajectories, out.decoded.log_confidences, g.constant(gt)).value();
  }

  // total_loss must backpropagate exactly the surrogate's gradient.
  if (surrogate_mismatch) {
    dg::Graph a(true);
    const auto oa = m.forward(model::ForwardContext{a}, patches, &noise);
    a.backward(losses::total_loss(oa.decoded.trajectories, oa.decoded.log_confidences, oa.decoded.uncertainty,
                                  a.constant(gt))
                   .total);
    dg::Graph b(true);
    const auto ob = m.forward(model::ForwardContext{b}, patches, &noise);
    const dg::Var lp = losses::mixture_nll_log(ob.decoded.trajectories, ob.decoded.log_confidences, b.constant(gt));
    b.backward(dg::add(dg::mean(lp), losses::uncertainty_loss(b.constant(targets), ob.decoded.uncertainty)));
    for (const auto& p : m.parameters().items()) {
      const dg::Tensor* ga = a.parameter_grad(p.tensor.get());
      const dg::Tensor* gb = b.parameter_grad(p.tensor.get());
      if (!ga || !gb) {
        *surrogate_mismatch = 1e9;
        continue;
      }
      for (std::size_t i = 0; i < ga->numel(); ++i) {
        const double d = std::abs((*ga)[i] - (*gb)[i]) / std::max(1.0, std::abs(double{(*ga)[i]}));
        *surrogate_mismatch = std::max(*surrogate_mismatch, d);
      }
    }
  }

  double worst = 0.0;
  std::uint64_t sub = 0;
  for (const auto& p : m.parameters().items()) {
    const dg::Tensor* target = p.tensor.get();
    const dg::ScalarFunction f = [&](dg::Graph& g, dg::Var x) {
      g.bind_parameter(target, x);
      const auto out = m.forward(model::ForwardContext{g}, patches, &noise);
      const dg::Var l_pose = losses::mixture_nll_log(out.decoded.trajectories, out.decoded.log_confidences, g.constant(gt));
      const dg::Var unc = losses::uncertainty_loss(g.constant(targets), out.decoded.uncertainty);
      return dg::add(dg::mean(l_pose), unc);
    };
    const auto r = dg::grad_check(f, *p.tensor, dg::GradCheckOptions{1e-3, elements_per_tensor, derive_seed(seed, "gc", sub++)});
    if (r.max_relative_error > worst) {
      worst = r.max_relative_error;
      if (worst_name) *worst_name = p.name;
    }
  }
  return worst;
}

Outcome gradient_suite() {
  double ops_worst = 0.0;
  std::string ops_worst_name;
  std::size_t op_checks = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    for (const auto& c : testing::make_op_cases(trial)) {
      const auto r = dg::grad_check(c.f, c.x, dg::GradCheckOptions{1e-3, 0, trial});
      ++op_checks;
      if (r.max_relative_error > ops_worst) {
        ops_worst = r.max_relative_error;
        ops_worst_name = c.name;
      }
    }
  }
  double e2e_worst = 0.0;
  double surrogate = 0.0;
  std::string e2e_name;
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    std::string name;
    const double w = end_to_end_grad_check(seed, 4, &name, &surrogate);
    if (w > e2e_worst) {
      e2e_worst = w;
      e2e_name = name;
    }
  }
  return {ops_worst < 1e-2 && e2e_worst < 1e-2 && surrogate < 1e-6,
          "ops: " + std::to_string(op_checks) + " checks over 100 trials, max rel err " + num(ops_worst, "%.2e") +
              " (" + ops_worst_name + "); end-to-end desk loss: max rel err " + num(e2e_worst, "%.2e") + " (" +
              e2e_name + "); total_loss vs detached-target surrogate grads differ by " + num(surrogate, "%.1e")};
}

}  // namespace

std::vector<Criterion> numeric_criteria() {
  return {
      {"loss_closed_form", "abs err <= 1e-4 at T=25, <= 1e-6 at T=1", 0, loss_closed_form},
      {"metrics_oracle", "exact match with brute force", 0, metrics_oracle},
      {"softmax_normalization", "|sum c - 1| <= 1e-6", 0, softmax_normalization},
      {"gradient_suite", "max rel err < 1e-2, runtime < 120 s", 120, gradient_suite},
  };
}

}  // namespace trajformer::acceptance
