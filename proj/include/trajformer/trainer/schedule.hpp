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

#ifndef TRAJFORMER_TRAINER_SCHEDULE_HPP_
#define TRAJFORMER_TRAINER_SCHEDULE_HPP_

#include <cstdint>

namespace trajformer::train {

// Linear warm-up from 0 to base_lr over warmup_steps, then cosine decay from
// base_lr to min_lr over `period` steps. With restarts the cosine phase
// wraps every period; without, it stays at min_lr once the period is over.
double cosine_lr(std::int64_t step, double base_lr, double min_lr, std::int64_t warmup_steps,
                 std::int64_t period, bool restarts);

struct CosineSchedule {
  double base_lr = 0.0;
  double min_lr = 0.0;
  std::int64_t warmup_steps = 0;
  std::int64_t period = 1;
  bool restarts = false;

  double operator()(std::int64_t step) const {
    return cosine_lr(step, base_lr, min_lr, warmup_steps, period, restarts);
  }
};

}  // namespace trajformer::train

#endif  // TRAJFORMER_TRAINER_SCHEDULE_HPP_
