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

#include "trajformer/scenegen/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trajformer/common/error.hpp"

namespace trajformer::scene {

namespace {

constexpr float kLightReach = 6.0f;  // m of lane painted around a light

class Canvas {
 public:
  explicit Canvas(const RasterConfig& config) : config_(config) {
    raster_.channels = config.channels;
    raster_.height = config.height;
    raster_.width = config.width;
    raster_.meters_per_pixel = config.meters_per_pixel;
    raster_.ego_row = config.ego_row;
    raster_.ego_col = config.ego_col;
    raster_.data.assign(static_cast<std::size_t>(config.channels) * config.height * config.width, 0.0f);
  }

  void paint(int channel, int row, int col, float value) {
    if (row < 0 || row >= config_.height || col < 0 || col >= config_.width) return;
    float& cell = raster_.data[(static_cast<std::size_t>(channel) * config_.height + row) * config_.width + col];
    cell = std::max(cell, std::clamp(value, 0.0f, 1.0f));
  }

  // Pixel-centre coordinates in the ego frame.
  double center_x(int row) const { return (config_.ego_row - row) * static_cast<double>(config_.meters_per_pixel); }
  double center_y(int col) const { return (config_.ego_col - col) * static_cast<double>(config_.meters_per_pixel); }

  // Paints every pixel whose centre lies inside the footprint.
  void footprint(int channel, const Agent& agent, Point2 position, float yaw, float value) {
    const double mpp = config_.meters_per_pixel;
    const double reach = agent.kind == AgentKind::kVehicle
                             ? 0.5 * std::hypot(kVehicleLength, kVehicleWidth)
                             : kPedestrianRadius;
    const PixelPosition c = to_pixel(position, config_);
    const int r0 = static_cast<int>(std::floor(c.row - reach / mpp));
    const int r1 = static_cast<int>(std::ceil(c.row + reach / mpp));
    const int c0 = static_cast<int>(std::floor(c.col - reach / mpp));
    const int c1 = static_cast<int>(std::ceil(c.col + reach / mpp));
    const double cy = std::cos(yaw);
    const double sy = std::sin(yaw);
    for (int row = std::max(r0, 0); row <= std::min(r1, config_.height - 1); ++row) {
      for (int col = std::max(c0, 0); col <= std::min(c1, config_.width - 1); ++col) {
        const double dx = center_x(row) - position.x;
        const double dy = center_y(col) - position.y;
        bool inside = false;
        if (agent.kind == AgentKind::kVehicle) {
          const double along = dx * cy + dy * sy;
          const double across = -dx * sy + dy * cy;
          inside = std::abs(along) <= 0.5 * kVehicleLength && std::abs(across) <= 0.5 * kVehicleWidth;
        } else {
          inside = std::hypot(dx, dy) <= kPedestrianRadius;
        }
        if (inside) paint(channel, row, col, value);
      }
    }
  }

  // Visits the nearest pixel of points sampled every quarter pixel.
  template <typename Visit>
  void trace(const std::vector<Point2>& polyline, Visit visit) const {
    const double step = 0.25 * config_.meters_per_pixel;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
      const Point2 a = polyline[i];
      const Point2 b = polyline[i + 1];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
      for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) / n;
        const Point2 p{static_cast<float>(a.x + (b.x - a.x) * t),
                       static_cast<float>(a.y + (b.y - a.y) * t)};
        const PixelPosition px = to_pixel(p, config_);
        visit(p, static_cast<int>(std::lround(px.row)), static_cast<int>(std::lround(px.col)));
      }
    }
  }

  RasterTensor take() { return std::move(raster_); }

 private:
  RasterConfig config_;
  RasterTensor raster_;
};

float light_value(LightState state) {
  switch (state) {
    case LightState::kRed: return 1.0f;
    case LightState::kYellow: return 0.5f;
    case LightState::kGreen: return 0.25f;
    case LightState::kUnknown: return 0.0f;
  }
  return 0.0f;
}

}  // namespace

void RasterConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::kInvalidArgument, std::string("invalid raster config: ") + what);
  };
  check(channels == kRasterChannelCount, "channel count must be 12");
  check(height > 0 && width > 0, "non-positive extent");
  check(meters_per_pixel > 0.0f && std::isfinite(meters_per_pixel), "meters_per_pixel");
  check(ego_row >= 0 && ego_row < height && ego_col >= 0 && ego_col < width,
        "ego pixel outside the grid");
}

PixelPosition to_pixel(Point2 p, const RasterConfig& config) {
  return {config.ego_row - p.x / static_cast<double>(config.meters_per_pixel),
          config.ego_col - p.y / static_cast<double>(config.meters_per_pixel)};
}

RasterTensor rasterize(const Scene& scene, const RasterConfig& config) {
  config.validate();
  Canvas canvas(config);

  for (std::size_t i = 0; i < scene.agents.size(); ++i) {
    const Agent& a = scene.agents[i];
    const bool target = i == scene.target_index;
    canvas.footprint(target ? kTargetNow : kOtherAgents, a, a.position, a.yaw, 1.0f);
    const float speed = std::hypot(a.velocity.x, a.velocity.y) / 30.0f;
    canvas.footprint(kSpeed, a, a.position, a.yaw, speed);
    const float yaw01 = (a.yaw / std::numbers::pi_v<float> + 1.0f) * 0.5f;
    canvas.footprint(kYaw, a, a.position, a.yaw, yaw01);
    if (target && i < scene.history.size()) {
      const auto& h = scene.history[i];
      constexpr std::pair<int, int> kHistoryChannels[] = {
          {5, kTargetHistory5}, {10, kTargetHistory10}, {20, kTargetHistory20}};
      for (const auto& [steps, channel] : kHistoryChannels) {
        if (static_cast<std::size_t>(steps) <= h.size()) {
          const Pose& pose = h[static_cast<std::size_t>(steps - 1)];
          canvas.footprint(channel, a, pose.position, pose.yaw, 1.0f);
        }
      }
    }
  }

  for (const MapElement& e : scene.map) {
    switch (e.kind) {
      case MapElementKind::kLane: {
        const float limit = e.lane ? e.lane->speed_limit / 30.0f : 0.0f;
        canvas.trace(e.polyline, [&](Point2 p, int row, int col) {
          canvas.paint(kLanes, row, col, 1.0f);
          canvas.paint(kSpeedLimit, row, col, limit);
          for (const TrafficLight& light : scene.lights) {
            if (std::hypot(p.x - light.position.x, p.y - light.position.y) <= kLightReach) {
              canvas.paint(kTrafficLights, row, col, light_value(light.state));
            }
          }
        });
        break;
      }
      case MapElementKind::kRoadBoundary:
        canvas.trace(e.polyline, [&](Point2, int row, int col) { canvas.paint(kRoadBoundaries, row, col, 1.0f); });
        break;
      case MapElementKind::kCrosswalk:
        canvas.trace(e.polyline, [&](Point2, int row, int col) { canvas.paint(kCrosswalks, row, col, 1.0f); });
        break;
    }
  }
  return canvas.take();
}

}  // namespace trajformer::scene
