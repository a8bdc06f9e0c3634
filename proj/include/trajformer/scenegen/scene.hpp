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

#ifndef TRAJFORMER_SCENEGEN_SCENE_HPP_
#define TRAJFORMER_SCENEGEN_SCENE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trajformer::scene {

// Sampling rate shared by history and future.
inline constexpr double kStepSeconds = 0.2;
inline constexpr int kHistorySteps = 25;
inline constexpr int kDefaultHorizon = 25;
inline constexpr double kMaxSpeed = 30.0;
inline constexpr double kMaxStepDisplacement = kMaxSpeed * kStepSeconds;

struct Point2 {
  float x = 0.0f;
  float y = 0.0f;

  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class AgentKind : std::uint8_t { kVehicle = 0, kPedestrian = 1 };

struct Agent {
  Point2 position;      // m, ego frame
  Point2 velocity;      // m/s
  Point2 acceleration;  // m/s^2
  float yaw = 0.0f;     // rad, [-pi, pi)
  AgentKind kind = AgentKind::kVehicle;

  friend bool operator==(const Agent&, const Agent&) = default;
};

enum class MapElementKind : std::uint8_t { kLane = 0, kRoadBoundary = 1, kCrosswalk = 2 };

struct LaneAttributes {
  float direction = 1.0f;    // +1 along the target's travel direction, -1 against
  float speed_limit = 13.9f;  // m/s
  bool priority = false;

  friend bool operator==(const LaneAttributes&, const LaneAttributes&) = default;
};

struct MapElement {
  MapElementKind kind = MapElementKind::kLane;
  std::vector<Point2> polyline;
  std::optional<LaneAttributes> lane;  // present iff kind == kLane

  friend bool operator==(const MapElement&, const MapElement&) = default;
};

enum class LightState : std::uint8_t { kRed = 0, kYellow = 1, kGreen = 2, kUnknown = 3 };

struct TrafficLight {
  Point2 position;
  LightState state = LightState::kUnknown;

  friend bool operator==(const TrafficLight&, const TrafficLight&) = default;
};

struct Pose {
  Point2 position;
  float yaw = 0.0f;

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Future waypoints of the prediction target, one per step.
struct GroundTruthTrajectory {
  std::vector<Point2> points;

  friend bool operator==(const GroundTruthTrajectory&, const GroundTruthTrajectory&) = default;
};

enum class ScenarioKind : std::uint8_t { kStraight = 0, kTurn = 1, kFork = 2, kStop = 3 };

std::string_view to_string(ScenarioKind kind);
// Throws kInvalidArgument for unknown names.
ScenarioKind parse_scenario_kind(std::string_view name);

struct Scene {
  std::uint64_t seed = 0;
  ScenarioKind kind = ScenarioKind::kStraight;
  float difficulty = 0.0f;
  std::vector<Agent> agents;
  std::size_t target_index = 0;
  std::vector<MapElement> map;
  std::vector<TrafficLight> lights;
  // history[a][j - 1] is agent a's pose j steps before now.
  std::vector<std::vector<Pose>> history;
  GroundTruthTrajectory future;

  bool has_target() const noexcept { return target_index < agents.size(); }

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Checks the structural invariants of a scene (target, history and future
// lengths, step bound, yaw range, lane attributes). Throws kInvalidArgument.
void validate_scene(const Scene& scene, int horizon = kDefaultHorizon);

}  // namespace trajformer::scene

#endif  // TRAJFORMER_SCENEGEN_SCENE_HPP_
