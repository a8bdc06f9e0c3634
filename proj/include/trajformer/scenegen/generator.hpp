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

#ifndef TRAJFORMER_SCENEGEN_GENERATOR_HPP_
#define TRAJFORMER_SCENEGEN_GENERATOR_HPP_

#include <cstdint>
#include <vector>

#include "trajformer/scenegen/scene.hpp"

namespace trajformer::scene {

// Synthetic driving scene around a single prediction target. Deterministic
// in (seed, kind, difficulty, horizon). The target sits at the ego origin
// heading along +x. Difficulty in [0, 1] adds unobservable acceleration and
// lateral drift to the future, history jitter, and surrounding traffic.
Scene generate_scene(std::uint64_t seed, ScenarioKind kind, float difficulty,
                     int horizon = kDefaultHorizon);

// Every future the target could have followed for these inputs: one for
// most kinds, {left branch, right branch} for forks. generate_scene picks
// one of them.
std::vector<GroundTruthTrajectory> candidate_futures(std::uint64_t seed, ScenarioKind kind,
                                                     float difficulty,
                                                     int horizon = kDefaultHorizon);

}  // namespace trajformer::scene

#endif  // TRAJFORMER_SCENEGEN_GENERATOR_HPP_
