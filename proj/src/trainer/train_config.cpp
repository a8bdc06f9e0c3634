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

#include "trajformer/trainer/train_config.hpp"

#include <charconv>
#include <string>

#include "trajformer/common/error.hpp"

namespace trajformer::train {

namespace {

constexpr std::string_view kPrefix = "train.";

struct IntField {
  const char* key;
  int TrainConfig::*member;
};

constexpr IntField kIntFields[] = {
    {"epochs_adamw", &TrainConfig::epochs_adamw},
    {"epochs_sgd", &TrainConfig::epochs_sgd},
    {"batch_size", &TrainConfig::batch_size},
};

struct StepField {
  const char* key;
  std::int64_t TrainConfig::*member;
};

constexpr StepField kStepFields[] = {
    {"warmup_steps", &TrainConfig::warmup_steps},
    {"restart_period", &TrainConfig::restart_period},
};

struct RealField {
  const char* key;
  double TrainConfig::*member;
};

constexpr RealField kRealFields[] = {
    {"lr_adamw", &TrainConfig::lr_adamw},
    {"lr_sgd", &TrainConfig::lr_sgd},
    {"weight_decay", &TrainConfig::weight_decay},
    {"momentum", &TrainConfig::momentum},
    {"min_lr", &TrainConfig::min_lr},
    {"grad_clip", &TrainConfig::grad_clip},
    {"lambda", &TrainConfig::lambda},
};

std::string format_real(double v) {
  // Shortest text that reads back to the same value.
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void TrainConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::kInvalidArgument, "invalid train config: " + what);
  };
  check(epochs_adamw >= 0 && epochs_sgd >= 0, "epoch counts must be >= 0");
  check(epochs_adamw + epochs_sgd > 0, "at least one epoch required");
  check(batch_size >= 1, "batch_size must be >= 1");
  check(lr_adamw > 0 && lr_sgd > 0, "learning rates must be > 0");
  check(min_lr >= 0 && min_lr <= lr_adamw && min_lr <= lr_sgd, "min_lr must lie in [0, lr]");
  check(weight_decay >= 0, "weight_decay must be >= 0");
  check(momentum >= 0 && momentum < 1, "momentum must lie in [0, 1)");
  check(warmup_steps >= -1, "warmup_steps must be >= 0 or -1");
  check(restart_period == -1 || restart_period >= 1, "restart_period must be >= 1 or -1");
  check(grad_clip > 0, "grad_clip must be > 0");
  check(lambda >= 0, "lambda must be >= 0");
}

void TrainConfig::apply(const KeyValueConfig& kv) {
  for (const auto& [key, value] : kv.values()) {
    if (!key.starts_with(kPrefix)) continue;
    const std::string name = key.substr(kPrefix.size());
    bool known = false;
    if (name == "preset") {
      preset = value;
      known = true;
    } else if (name == "seed") {
      try {
        std::size_t used = 0;
        seed = std::stoull(value, &used);
        if (used != value.size() || value.starts_with('-')) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        fail(ErrorKind::kMalformedConfig, "bad unsigned value for " + key + ": " + value);
      }
      known = true;
    }
    for (const auto& f : kIntFields) {
      if (name == f.key) {
        const auto v = kv.get_int(key, 0);
        if (v < -1'000'000'000 || v > 1'000'000'000) {
          fail(ErrorKind::kMalformedConfig, "value out of range for " + key);
        }
        this->*f.member = static_cast<int>(v);
        known = true;
      }
    }
    for (const auto& f : kStepFields) {
      if (name == f.key) {
        this->*f.member = kv.get_int(key, 0);
        known = true;
      }
    }
    for (const auto& f : kRealFields) {
      if (name == f.key) {
        this->*f.member = kv.get_double(key, 0.0);
        known = true;
      }
    }
    if (!known) fail(ErrorKind::kMalformedConfig, "unknown train key: " + key);
  }
}

void TrainConfig::write(KeyValueConfig& kv) const {
  const std::string p(kPrefix);
  kv.set(p + "preset", preset);
  kv.set(p + "seed", std::to_string(seed));
  for (const auto& f : kIntFields) kv.set(p + f.key, std::to_string(this->*f.member));
  for (const auto& f : kStepFields) kv.set(p + f.key, std::to_string(this->*f.member));
  for (const auto& f : kRealFields) kv.set(p + f.key, format_real(this->*f.member));
}

TrainConfig TrainConfig::desk() { return TrainConfig{}; }

TrainConfig TrainConfig::paper() {
  TrainConfig c;
  c.preset = "paper";
  c.epochs_adamw = 40;
  c.epochs_sgd = 40;
  c.batch_size = 1024;
  return c;
}

TrainConfig TrainConfig::from_preset(std::string_view name) {
  if (name == "desk") return desk();
  if (name == "paper") return paper();
  fail(ErrorKind::kInvalidArgument, "unknown train preset: " + std::string(name));
}

std::int64_t resolved_warmup(const TrainConfig& config, std::int64_t phase_steps) {
  if (config.warmup_steps >= 0) return config.warmup_steps;
  return phase_steps / 20;
}

std::int64_t resolved_restart_period(const TrainConfig& config, std::int64_t phase_steps) {
  if (config.restart_period >= 1) return config.restart_period;
  const std::int64_t rest = phase_steps - resolved_warmup(config, phase_steps);
  return std::max<std::int64_t>(1, (rest + 1) / 2);
}

}  // namespace trajformer::train
