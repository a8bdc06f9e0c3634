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

#include "trajformer/scenegen/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "trajformer/common/error.hpp"
#include "trajformer/common/hash.hpp"
#include "trajformer/common/rng.hpp"
#include "trajformer/scenegen/geometry.hpp"

namespace trajformer::scene {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLaneWidth = 3.5;
constexpr double kPathStep = 0.5;
constexpr double kBehind = 60.0;  // arc length of the target path behind the origin
constexpr double kAhead = 120.0;
constexpr double kForkRadius = 12.0;

// Everything random about a scene, sampled up front in a fixed order so
// the draw sequence does not depend on which branch is chosen.
struct Blueprint {
  ScenarioKind kind;
  double difficulty;
  double speed;
  double accel_history;
  double accel_future;
  double lateral_amplitude;
  double lateral_omega;
  double speed_limit;
  bool priority;
  double turn_start;
  double turn_radius;
  double turn_sign;
  double fork_distance;
  double fork_angle;
  bool fork_left;
  double stop_distance;
  double stop_offset;
  std::array<Vec2, kHistorySteps> history_jitter;
};

Blueprint sample_blueprint(Rng& rng, ScenarioKind kind, double d) {
  Blueprint b{};
  b.kind = kind;
  b.difficulty = d;
  b.speed = rng.uniform(5.0, 8.0);
  b.accel_history = rng.uniform(-0.5, 0.5) * d;
  b.accel_future = b.accel_history + rng.uniform(-0.6, 0.6) * d;
  b.lateral_amplitude = rng.uniform(-1.0, 1.0) * d;
  b.lateral_omega = rng.uniform(0.5, 1.5) * kPi / 5.0;
  static constexpr std::array<double, 3> kLimits{8.3, 11.1, 13.9};
  b.speed_limit = kLimits[rng.below(kLimits.size())];
  b.priority = rng.bernoulli(0.5);
  b.turn_start = rng.uniform(3.0, 12.0);
  b.turn_radius = rng.uniform(18.0, 35.0);
  b.turn_sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
  b.fork_distance = rng.uniform(4.0, 8.0);
  b.fork_angle = rng.uniform(35.0, 45.0) * kPi / 180.0;
  b.fork_left = rng.bernoulli(0.5);
  b.stop_distance = rng.uniform(12.0, 20.0);
  b.stop_offset = rng.uniform(-1.5, 1.5) * d;
  for (auto& j : b.history_jitter) j = Vec2{rng.normal(), rng.normal()} * (0.2 * d);

  if (kind == ScenarioKind::kFork) {
    // The target must clear the fork by 15 m so the branches separate.
    const double horizon_s = kDefaultHorizon * kStepSeconds;
    const double min_accel =
        2.0 * (b.fork_distance + 15.0 - b.speed * horizon_s) / (horizon_s * horizon_s);
    b.accel_future = std::max(b.accel_future, min_accel);
  }
  return b;
}

// Target centre line starting kBehind metres behind the origin. For forks
// `branch` selects left (+1) or right (-1).
Path target_path(const Blueprint& b, double branch) {
  const double total = kBehind + kAhead;
  switch (b.kind) {
    case ScenarioKind::kTurn: {
      const double start = kBehind + b.turn_start;
      const double end = start + b.turn_radius * kPi / 2.0;
      return integrate_path(Vec2{-kBehind, 0.0}, 0.0, total, kPathStep, [&](double s) {
        return s >= start && s < end ? b.turn_sign / b.turn_radius : 0.0;
      });
    }
    case ScenarioKind::kFork: {
      const double start = kBehind + b.fork_distance;
      const double end = start + kForkRadius * b.fork_angle;
      return integrate_path(Vec2{-kBehind, 0.0}, 0.0, total, kPathStep, [&](double s) {
        return s >= start && s < end ? branch / kForkRadius : 0.0;
      });
    }
    case ScenarioKind::kStraight:
    case ScenarioKind::kStop:
      break;
  }
  return Path({Vec2{-kBehind, 0.0}, Vec2{kAhead, 0.0}});
}

// Arc length travelled t seconds from now (negative t for the past).
double travelled(const Blueprint& b, double t) {
  if (t <= 0.0) return b.speed * t + 0.5 * b.accel_history * t * t;
  if (b.kind == ScenarioKind::kStop) {
    const double stop_at = std::max(b.stop_distance - 3.0 + b.stop_offset, 4.0);
    const double decel = b.speed * b.speed / (2.0 * stop_at);
    const double t_stop = b.speed / decel;
    if (t >= t_stop) return stop_at;
    return b.speed * t - 0.5 * decel * t * t;
  }
  // Constant acceleration with speed clamped to [0, 29] m/s.
  const double a = b.accel_future;
  const double v_cap = kMaxSpeed - 1.0;
  if (a < 0.0) {
    const double t_zero = b.speed / -a;
    if (t >= t_zero) return b.speed * t_zero + 0.5 * a * t_zero * t_zero;
  } else if (a > 0.0) {
    const double t_cap = (v_cap - b.speed) / a;
    if (t >= t_cap) {
      return b.speed * t_cap + 0.5 * a * t_cap * t_cap + v_cap * (t - t_cap);
    }
  }
  return b.speed * t + 0.5 * a * t * t;
}

double lateral(const Blueprint& b, double t) {
  if (t <= 0.0) return 0.0;
  return b.lateral_amplitude * std::sin(b.lateral_omega * t);
}

std::vector<Vec2> future_points(const Blueprint& b, const Path& path, int horizon) {
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(horizon));
  for (int k = 1; k <= horizon; ++k) {
    const double t = k * kStepSeconds;
    const double s = kBehind + travelled(b, t);
    pts.push_back(path.point_at(s) + path.normal_at(s) * lateral(b, t));
  }
  return pts;
}

std::vector<Vec2> sample_polyline(const Path& path, double s0, double s1, double offset,
                                  double step = 1.0) {
  std::vector<Vec2> pts;
  for (double s = s0; s <= s1 + 1e-9; s += step) {
    pts.push_back(path.point_at(s) + path.normal_at(s) * offset);
  }
  return pts;
}

struct LocalScene {
  std::vector<Vec2> positions, velocities, accelerations;
  std::vector<double> yaws;
  std::vector<AgentKind> kinds;
  std::vector<std::vector<std::pair<Vec2, double>>> history;
  struct Element {
    MapElementKind kind;
    std::vector<Vec2> points;
    std::optional<LaneAttributes> lane;
  };
  std::vector<Element> map;
  std::vector<std::pair<Vec2, LightState>> lights;
  std::vector<Vec2> future;
};

void add_agent(LocalScene& ls, Vec2 pos, Vec2 vel, Vec2 acc, double yaw, AgentKind kind,
               std::vector<std::pair<Vec2, double>> history) {
  ls.positions.push_back(pos);
  ls.velocities.push_back(vel);
  ls.accelerations.push_back(acc);
  ls.yaws.push_back(yaw);
  ls.kinds.push_back(kind);
  ls.history.push_back(std::move(history));
}

void add_other_agents(LocalScene& ls, Rng& rng, const Blueprint& b, const Path& path) {
  const auto count = static_cast<int>(std::lround(1.0 + 6.0 * b.difficulty)) +
                     static_cast<int>(rng.below(2));
  for (int i = 0; i < count; ++i) {
    const bool vehicle = rng.bernoulli(0.75);
    Vec2 pos;
    double yaw = 0.0;
    double speed = 0.0;
    if (vehicle) {
      const double s = kBehind + rng.uniform(-8.0, 30.0);
      if (rng.bernoulli(0.6)) {
        // Oncoming traffic in the adjacent lane.
        pos = path.point_at(s) + path.normal_at(s) * kLaneWidth;
        yaw = path.heading_at(s) + kPi;
        speed = rng.uniform(0.0, 10.0);
      } else {
        // Parked at the kerb.
        pos = path.point_at(s) + path.normal_at(s) * -(kLaneWidth * 0.5 + 1.5);
        yaw = path.heading_at(s);
        speed = 0.0;
      }
    } else {
      const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
      pos = Vec2{rng.uniform(-6.0, 24.0), side * rng.uniform(5.0, 12.0)};
      yaw = rng.uniform(-kPi, kPi);
      speed = rng.uniform(0.0, 1.5);
    }
    // Keep clear of the target footprint.
    if (std::abs(pos.x) < 6.0 && std::abs(pos.y) < 2.5) pos.y += pos.y >= 0.0 ? 3.0 : -3.0;
    yaw = normalize_angle(yaw);
    const Vec2 vel{speed * std::cos(yaw), speed * std::sin(yaw)};
    std::vector<std::pair<Vec2, double>> hist;
    for (int j = 1; j <= kHistorySteps; ++j) hist.emplace_back(pos - vel * (j * kStepSeconds), yaw);
    add_agent(ls, pos, vel, Vec2{}, yaw, vehicle ? AgentKind::kVehicle : AgentKind::kPedestrian,
              std::move(hist));
  }
}

LocalScene build_local(std::uint64_t seed, ScenarioKind kind, double d, int horizon,
                       std::vector<std::vector<Vec2>>* candidates) {
  Rng rng(derive_seed(seed, "scene"));
  const Blueprint b = sample_blueprint(rng, kind, d);
  const double chosen_branch = b.fork_left ? 1.0 : -1.0;
  const Path path = target_path(b, chosen_branch);

  LocalScene ls;
  if (candidates) {
    if (kind == ScenarioKind::kFork) {
      candidates->push_back(future_points(b, target_path(b, 1.0), horizon));
      candidates->push_back(future_points(b, target_path(b, -1.0), horizon));
    } else {
      candidates->push_back(future_points(b, path, horizon));
    }
  }
  ls.future = future_points(b, path, horizon);

  // Target.
  std::vector<std::pair<Vec2, double>> hist;
  for (int j = 1; j <= kHistorySteps; ++j) {
    const double s = kBehind + travelled(b, -j * kStepSeconds);
    hist.emplace_back(path.point_at(s) + b.history_jitter[static_cast<std::size_t>(j - 1)],
                      path.heading_at(s));
  }
  add_agent(ls, Vec2{}, Vec2{b.speed, 0.0}, Vec2{b.accel_history, 0.0}, 0.0, AgentKind::kVehicle,
            std::move(hist));

  // Map: lanes, boundaries, crosswalks.
  const LaneAttributes own{1.0f, static_cast<float>(b.speed_limit), b.priority};
  const LaneAttributes oncoming{-1.0f, static_cast<float>(b.speed_limit), !b.priority};
  const double lane_from = kBehind - 20.0;
  const double lane_to = kBehind + 50.0;
  if (kind == ScenarioKind::kFork) {
    const Path left = target_path(b, 1.0);
    const Path right = target_path(b, -1.0);
    const double fork_s = kBehind + b.fork_distance;
    ls.map.push_back({MapElementKind::kLane, sample_polyline(left, lane_from, fork_s, 0.0), own});
    ls.map.push_back({MapElementKind::kLane, sample_polyline(left, fork_s, lane_to, 0.0), own});
    ls.map.push_back({MapElementKind::kLane, sample_polyline(right, fork_s, lane_to, 0.0), own});
    ls.map.push_back(
        {MapElementKind::kLane, sample_polyline(left, lane_from, fork_s, kLaneWidth), oncoming});
    ls.map.push_back({MapElementKind::kRoadBoundary,
                      sample_polyline(left, lane_from, lane_to, kLaneWidth * 1.5), std::nullopt});
    ls.map.push_back({MapElementKind::kRoadBoundary,
                      sample_polyline(right, lane_from, lane_to, -kLaneWidth * 0.5), std::nullopt});
  } else {
    ls.map.push_back({MapElementKind::kLane, sample_polyline(path, lane_from, lane_to, 0.0), own});
    ls.map.push_back(
        {MapElementKind::kLane, sample_polyline(path, lane_from, lane_to, kLaneWidth), oncoming});
    ls.map.push_back({MapElementKind::kRoadBoundary,
                      sample_polyline(path, lane_from, lane_to, kLaneWidth * 1.5), std::nullopt});
    ls.map.push_back({MapElementKind::kRoadBoundary,
                      sample_polyline(path, lane_from, lane_to, -kLaneWidth * 0.5), std::nullopt});
  }
  // Scenery past a fork follows a branch drawn independently of the target's,
  // so the raster does not give the choice away.
  const Path context =
      kind == ScenarioKind::kFork
          ? target_path(b, Rng(derive_seed(seed, "fork-context")).bernoulli(0.5) ? 1.0 : -1.0)
          : path;
  const bool crosswalk = kind == ScenarioKind::kStop || rng.bernoulli(0.3);
  const double crosswalk_s =
      kBehind + (kind == ScenarioKind::kStop ? b.stop_distance + 2.0 : rng.uniform(15.0, 30.0));
  if (crosswalk) {
    const Vec2 c = context.point_at(crosswalk_s);
    const Vec2 n = context.normal_at(crosswalk_s);
    ls.map.push_back({MapElementKind::kCrosswalk,
                      {c + n * (-kLaneWidth * 0.5), c + n * (kLaneWidth * 1.5)},
                      std::nullopt});
  }

  // Traffic lights.
  if (kind == ScenarioKind::kStop) {
    const double s = kBehind + b.stop_distance;
    ls.lights.emplace_back(context.point_at(s) + context.normal_at(s) * -(kLaneWidth * 0.5 + 0.5),
                           LightState::kRed);
  } else if (rng.bernoulli(0.4)) {
    const double s = kBehind + rng.uniform(15.0, 25.0);
    ls.lights.emplace_back(context.point_at(s) + context.normal_at(s) * -(kLaneWidth * 0.5 + 0.5),
                           rng.bernoulli(0.2) ? LightState::kUnknown : LightState::kGreen);
  }

  add_other_agents(ls, rng, b, context);
  return ls;
}

Point2 to_point(Vec2 v) { return {static_cast<float>(v.x), static_cast<float>(v.y)}; }

// Places the local scene at a random world pose and maps it back through
// ego_transform, as a perception stack would report it.
Scene to_scene(const LocalScene& ls, std::uint64_t seed, ScenarioKind kind, float difficulty) {
  Rng pose_rng(derive_seed(seed, "world-pose"));
  const EgoPose ego{{pose_rng.uniform(-500.0, 500.0), pose_rng.uniform(-500.0, 500.0)},
                    pose_rng.uniform(-kPi, kPi)};
  auto point = [&](Vec2 local) { return to_point(ego_transform(ego_to_world(local, ego), ego)); };
  auto vector = [&](Vec2 v) { return to_point(rotate(rotate(v, ego.yaw), -ego.yaw)); };
  auto yaw = [&](double local_yaw) {
    return static_cast<float>(normalize_angle(normalize_angle(local_yaw + ego.yaw) - ego.yaw));
  };

  Scene scene;
  scene.seed = seed;
  scene.kind = kind;
  scene.difficulty = difficulty;
  scene.target_index = 0;
  for (std::size_t i = 0; i < ls.positions.size(); ++i) {
    scene.agents.push_back(Agent{point(ls.positions[i]), vector(ls.velocities[i]),
                                 vector(ls.accelerations[i]), yaw(ls.yaws[i]), ls.kinds[i]});
    std::vector<Pose> hist;
    for (const auto& [p, h] : ls.history[i]) hist.push_back(Pose{point(p), yaw(h)});
    scene.history.push_back(std::move(hist));
  }
  for (const auto& e : ls.map) {
    MapElement el{e.kind, {}, e.lane};
    for (const auto& p : e.points) el.polyline.push_back(point(p));
    scene.map.push_back(std::move(el));
  }
  for (const auto& [p, state] : ls.lights) scene.lights.push_back(TrafficLight{point(p), state});
  for (const auto& p : ls.future) scene.future.points.push_back(point(p));
  return scene;
}

}  // namespace

Scene generate_scene(std::uint64_t seed, ScenarioKind kind, float difficulty, int horizon) {
  if (horizon < 1) fail(ErrorKind::kInvalidArgument, "horizon must be >= 1");
  const float d = std::clamp(difficulty, 0.0f, 1.0f);
  const LocalScene ls = build_local(seed, kind, d, horizon, nullptr);
  Scene scene = to_scene(ls, seed, kind, d);
  validate_scene(scene, horizon);
  return scene;
}

std::vector<GroundTruthTrajectory> candidate_futures(std::uint64_t seed, ScenarioKind kind,
                                                     float difficulty, int horizon) {
  const float d = std::clamp(difficulty, 0.0f, 1.0f);
  std::vector<std::vector<Vec2>> raw;
  const LocalScene ls = build_local(seed, kind, d, horizon, &raw);
  std::vector<GroundTruthTrajectory> out;
  for (const auto& pts : raw) {
    // Reuse the scene mapping so candidates match generate_scene bit for bit.
    LocalScene tmp;
    tmp.future = pts;
    Scene s = to_scene(tmp, seed, kind, d);
    out.push_back(std::move(s.future));
  }
  return out;
}

}  // namespace trajformer::scene
