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

#include "trajformer/scenegen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trajformer/common/error.hpp"

namespace trajformer::scene {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double normalize_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  a -= std::numbers::pi;
  // fmod rounding can land exactly on +pi.
  if (a >= std::numbers::pi) a -= kTwoPi;
  return a;
}

Vec2 ego_transform(Vec2 world, const EgoPose& ego) {
  return rotate(world - ego.position, -ego.yaw);
}

Vec2 ego_to_world(Vec2 local, const EgoPose& ego) {
  return rotate(local, ego.yaw) + ego.position;
}

Path::Path(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) fail(ErrorKind::kInvalidArgument, "Path needs at least two points");
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_.push_back(cumulative_.back() + norm(points_[i] - points_[i - 1]));
  }
}

std::size_t Path::segment_for(double s) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const auto idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, points_.size() - 2);
}

Vec2 Path::point_at(double s) const {
  const std::size_t i = segment_for(s);
  const Vec2 a = points_[i];
  const Vec2 b = points_[i + 1];
  const double len = cumulative_[i + 1] - cumulative_[i];
  const double t = len > 0.0 ? (s - cumulative_[i]) / len : 0.0;
  return a + (b - a) * t;
}

double Path::heading_at(double s) const {
  const std::size_t i = segment_for(s);
  const Vec2 d = points_[i + 1] - points_[i];
  return std::atan2(d.y, d.x);
}

Vec2 Path::normal_at(double s) const {
  const double h = heading_at(s);
  return {-std::sin(h), std::cos(h)};
}

}  // namespace trajformer::scene
