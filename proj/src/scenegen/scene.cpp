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

#include "trajformer/scenegen/scene.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trajformer/common/error.hpp"

namespace trajformer::scene {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kStraight: return "straight";
    case ScenarioKind::kTurn: return "turn";
    case ScenarioKind::kFork: return "fork";
    case ScenarioKind::kStop: return "stop";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto kind : {ScenarioKind::kStraight, ScenarioKind::kTurn, ScenarioKind::kFork,
                    ScenarioKind::kStop}) {
    if (to_string(kind) == name) return kind;
  }
  fail(ErrorKind::kInvalidArgument, "unknown scenario kind '" + std::string(name) + "'");
}

void validate_scene(const Scene& scene, int horizon) {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::kInvalidArgument, "invalid scene: " + what);
  };
  check(scene.has_target(), "no prediction target");
  check(scene.history.size() == scene.agents.size(), "history count differs from agent count");
  for (const auto& h : scene.history) {
    check(h.size() == static_cast<std::size_t>(kHistorySteps), "history length");
  }
  check(scene.future.points.size() == static_cast<std::size_t>(horizon), "future length");
  Point2 prev = scene.agents[scene.target_index].position;
  for (const Point2& p : scene.future.points) {
    const double step = std::hypot(p.x - prev.x, p.y - prev.y);
    check(step <= kMaxStepDisplacement + 1e-4, "future step of " + std::to_string(step) + " m");
    prev = p;
  }
  for (const Agent& a : scene.agents) {
    check(a.yaw >= -std::numbers::pi_v<float> && a.yaw < std::numbers::pi_v<float>, "yaw range");
    check(std::hypot(a.velocity.x, a.velocity.y) <= kMaxSpeed + 1e-4, "speed bound");
  }
  for (const MapElement& e : scene.map) {
    check(e.polyline.size() >= 2, "polyline with fewer than two points");
    check(e.lane.has_value() == (e.kind == MapElementKind::kLane), "lane attributes");
  }
}

}  // namespace trajformer::scene
