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

#ifndef TRAJFORMER_SCENEGEN_GEOMETRY_HPP_
#define TRAJFORMER_SCENEGEN_GEOMETRY_HPP_

#include <vector>

namespace trajformer::scene {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

double norm(Vec2 v);
Vec2 rotate(Vec2 v, double angle);

// Wraps an angle into [-pi, pi).
double normalize_angle(double angle);

struct EgoPose {
  Vec2 position;
  double yaw = 0.0;
};

// World point to ego frame: translate by -ego position, rotate by -ego yaw.
Vec2 ego_transform(Vec2 world, const EgoPose& ego);
// Inverse of ego_transform.
Vec2 ego_to_world(Vec2 local, const EgoPose& ego);

// Arc-length parameterized polyline. Queries beyond either end extrapolate
// along the end segments.
class Path {
 public:
  explicit Path(std::vector<Vec2> points);

  double length() const { return cumulative_.back(); }
  Vec2 point_at(double s) const;
  double heading_at(double s) const;
  Vec2 normal_at(double s) const;  // unit left normal
  const std::vector<Vec2>& points() const { return points_; }

 private:
  std::size_t segment_for(double s) const;

  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

// Builds a path by integrating a curvature profile from `start` heading
// `heading`; `curvature(s)` is evaluated every `step` metres.
template <typename Curvature>
Path integrate_path(Vec2 start, double heading, double length, double step, Curvature curvature);

}  // namespace trajformer::scene

#include <cmath>

namespace trajformer::scene {

template <typename Curvature>
Path integrate_path(Vec2 start, double heading, double length, double step, Curvature curvature) {
  std::vector<Vec2> pts{start};
  Vec2 p = start;
  for (double s = 0.0; s < length - 1e-9; s += step) {
    const double k = curvature(s + 0.5 * step);
    const double mid = heading + 0.5 * k * step;
    p = p + Vec2{std::cos(mid), std::sin(mid)} * step;
    heading += k * step;
    pts.push_back(p);
  }
  return Path(std::move(pts));
}

}  // namespace trajformer::scene

#endif  // TRAJFORMER_SCENEGEN_GEOMETRY_HPP_
