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

#include "trajformer/trainer/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trajformer::train {

double cosine_lr(std::int64_t step, double base_lr, double min_lr, std::int64_t warmup_steps,
                 std::int64_t period, bool restarts) {
  step = std::max<std::int64_t>(step, 0);
  if (step < warmup_steps) {
    return base_lr * static_cast<double>(step) / static_cast<double>(warmup_steps);
  }
  period = std::max<std::int64_t>(period, 1);
  std::int64_t p = step - std::max<std::int64_t>(warmup_steps, 0);
  p = restarts ? p % period : std::min(p, period);
  const double phase = std::numbers::pi * static_cast<double>(p) / static_cast<double>(period);
  return min_lr + 0.5 * (base_lr - min_lr) * (1.0 + std::cos(phase));
}

}  // namespace trajformer::train
