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

#include "trajformer/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "trajformer/common/error.hpp"

namespace trajformer::metrics {

namespace {

constexpr double kLogFloor = -1e9;

void check(const TrajectoryBundle& b, const GroundTruthTrajectory& gt, const char* op) {
  const auto t = static_cast<int>(gt.points.size());
  if (b.k < 1 || b.horizon != t || b.trajectories.size() != static_cast<std::size_t>(b.k * t * 2) ||
      b.confidences.size() != static_cast<std::size_t>(b.k)) {
    throw ShapeError(op, "[" + std::to_string(b.k) + "," + std::to_string(b.horizon) + ",2]",
                     "[" + std::to_string(t) + ",2]", "prediction and ground truth disagree");
  }
}

double step_error(const TrajectoryBundle& b, int k, const GroundTruthTrajectory& gt, int t) {
  const auto p = b.point(k, t);
  const auto& g = gt.points[static_cast<std::size_t>(t)];
  return std::hypot(static_cast<double>(p.x) - g.x, static_cast<double>(p.y) - g.y);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j);
    for (std::size_t q = i; q <= j; ++q) ranks[order[q]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double ade(const TrajectoryBundle& b, int k, const GroundTruthTrajectory& gt) {
  check(b, gt, "ade");
  double total = 0.0;
  for (int t = 0; t < b.horizon; ++t) total += step_error(b, k, gt, t);
  return total / b.horizon;
}

double fde(const TrajectoryBundle& b, int k, const GroundTruthTrajectory& gt) {
  check(b, gt, "fde");
  return step_error(b, k, gt, b.horizon - 1);
}

double min_ade(const TrajectoryBundle& b, const GroundTruthTrajectory& gt) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < b.k; ++k) best = std::min(best, ade(b, k, gt));
  return best;
}

double min_fde(const TrajectoryBundle& b, const GroundTruthTrajectory& gt) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < b.k; ++k) best = std::min(best, fde(b, k, gt));
  return best;
}

int most_confident(const TrajectoryBundle& b) {
  return static_cast<int>(std::max_element(b.confidences.begin(), b.confidences.end()) -
                          b.confidences.begin());
}

double cnll(const TrajectoryBundle& b, const GroundTruthTrajectory& gt) {
  check(b, gt, "cnll");
  double total = 0.0;
  for (float c : b.confidences) total += c;
  if (std::abs(total - 1.0) > 1e-5) fail(ErrorKind::kInvalidArgument, "cnll: confidences must sum to 1");
  const double log_norm = b.horizon * std::log(2.0 * std::numbers::pi);
  std::vector<double> comp(static_cast<std::size_t>(b.k));
  for (int k = 0; k < b.k; ++k) {
    double sq = 0.0;
    for (int t = 0; t < b.horizon; ++t) {
      const auto p = b.point(k, t);
      const auto& g = gt.points[static_cast<std::size_t>(t)];
      const double dx = static_cast<double>(p.x) - g.x;
      const double dy = static_cast<double>(p.y) - g.y;
      sq += dx * dx + dy * dy;
    }
    const double c = b.confidences[static_cast<std::size_t>(k)];
    comp[static_cast<std::size_t>(k)] = (c > 0.0 ? std::log(c) : kLogFloor) - 0.5 * sq - log_norm;
  }
  const double m = *std::max_element(comp.begin(), comp.end());
  double s = 0.0;
  for (double v : comp) s += std::exp(v - m);
  return -(m + std::log(s));
}

std::vector<double> default_fractions() {
  std::vector<double> f(100);
  for (int i = 0; i < 100; ++i) f[static_cast<std::size_t>(i)] = (i + 1) / 100.0;
  return f;
}

RetentionCurve retention_curve(std::span<const double> errors, std::span<const double> uncertainties,
                               std::span<const double> fractions) {
  if (errors.size() != uncertainties.size()) {
    throw ShapeError("retention_curve", "[" + std::to_string(errors.size()) + "]",
                     "[" + std::to_string(uncertainties.size()) + "]", "errors vs uncertainties");
  }
  if (errors.empty()) fail(ErrorKind::kEmptyDataset, "retention_curve: no scenes");
  if (fractions.empty() || fractions.back() != 1.0) {
    fail(ErrorKind::kInvalidArgument, "retention_curve: fractions must end at 1.0");
  }
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0) || (i > 0 && fractions[i] <= fractions[i - 1])) {
      fail(ErrorKind::kInvalidArgument, "retention_curve: fractions must ascend within (0, 1]");
    }
  }
  const std::size_t n = errors.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return uncertainties[a] < uncertainties[b]; });
  // prefix[i] = sum of the i least uncertain errors.
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + errors[order[i]];

  RetentionCurve curve;
  curve.fractions.assign(fractions.begin(), fractions.end());
  double area = 0.0;
  for (double f : fractions) {
    // The small guard keeps f*N that is integral in exact arithmetic from
    // rounding up (0.07 * 100 = 7.000000000000001).
    const auto kept = static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9));
    const double v = prefix[std::min(kept, n)] / static_cast<double>(n);
    curve.values.push_back(v);
    area += v;
  }
  curve.area = area / static_cast<double>(fractions.size());
  return curve;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("spearman", "[" + std::to_string(x.size()) + "]", "[" + std::to_string(y.size()) + "]");
  }
  if (x.size() < 2) return 0.0;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = 0.5 * static_cast<double>(x.size() - 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace trajformer::metrics
