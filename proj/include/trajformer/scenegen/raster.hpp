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

#ifndef TRAJFORMER_SCENEGEN_RASTER_HPP_
#define TRAJFORMER_SCENEGEN_RASTER_HPP_

#include <vector>

#include "trajformer/scenegen/scene.hpp"

namespace trajformer::scene {

// Fixed channel layout of the bird's-eye-view raster.
enum RasterChannel : int {
  kTargetNow = 0,
  kTargetHistory5 = 1,
  kTargetHistory10 = 2,
  kTargetHistory20 = 3,
  kOtherAgents = 4,
  kSpeed = 5,          // |v| / 30 over agent footprints
  kYaw = 6,            // (yaw / pi + 1) / 2 over agent footprints
  kLanes = 7,
  kRoadBoundaries = 8,
  kCrosswalks = 9,
  kTrafficLights = 10,  // red 1, yellow 0.5, green 0.25 along nearby lanes
  kSpeedLimit = 11,     // limit / 30 along lanes
  kRasterChannelCount = 12,
};

// The ego frame has +x forward and +y left. In the image, forward is up
// (decreasing row) and left is decreasing column.
struct RasterConfig {
  int channels = kRasterChannelCount;
  int height = 64;
  int width = 64;
  float meters_per_pixel = 0.5f;
  int ego_row = 48;
  int ego_col = 32;

  // Throws kInvalidArgument.
  void validate() const;
};

struct RasterTensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  float meters_per_pixel = 0.0f;
  int ego_row = 0;
  int ego_col = 0;
  std::vector<float> data;  // C x H x W

  float at(int c, int row, int col) const {
    return data[(static_cast<std::size_t>(c) * height + row) * width + col];
  }
  friend bool operator==(const RasterTensor&, const RasterTensor&) = default;
};

struct PixelPosition {
  double row = 0.0;
  double col = 0.0;
};

PixelPosition to_pixel(Point2 ego_point, const RasterConfig& config);

// Pure function of (scene, config). Content outside the extent is clipped.
RasterTensor rasterize(const Scene& scene, const RasterConfig& config);

inline constexpr float kVehicleLength = 4.5f;
inline constexpr float kVehicleWidth = 2.0f;
inline constexpr float kPedestrianRadius = 0.7f;

}  // namespace trajformer::scene

#endif  // TRAJFORMER_SCENEGEN_RASTER_HPP_
