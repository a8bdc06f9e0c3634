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

#ifndef TRAJFORMER_CLI_SVG_HPP_
#define TRAJFORMER_CLI_SVG_HPP_

#include <string>

#include "trajformer/metrics/metrics.hpp"
#include "trajformer/model/trajectory_model.hpp"
#include "trajformer/scenegen/scene.hpp"

namespace trajformer::cli {

// Top-down plot in the ego frame (forward is up). The ground truth is a bold
// olive polyline and each hypothesis a coloured polyline whose legend entry
// reads "p=<c_k>, ADE=<ade_k>". Map context is drawn with <path> elements,
// so the document holds exactly K + 1 polylines.
std::string trajectory_svg(const scene::Scene& scene, const model::TrajectoryBundle& prediction,
                           const std::string& title);

// Retained mean error against retention fraction, one polyline.
std::string retention_svg(const metrics::RetentionCurve& curve, const std::string& title);

}  // namespace trajformer::cli

#endif  // TRAJFORMER_CLI_SVG_HPP_
