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

#include "trajformer/scenegen/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <string>

#include "trajformer/common/binary_io.hpp"
#include "trajformer/common/error.hpp"
#include "trajformer/common/hash.hpp"
#include "trajformer/common/rng.hpp"
#include "trajformer/scenegen/generator.hpp"

namespace trajformer::scene {

namespace {

constexpr std::array<char, 7> kMagic = {'S', 'V', 'M', 'P', 'D', 'S', '1'};
// Sanity bounds so a corrupt count cannot trigger a huge allocation.
constexpr std::uint32_t kMaxCount = 1u << 24;
constexpr std::uint32_t kMaxElements = 1u << 20;

void write_point(std::ostream& out, Point2 p) {
  binary::write_f32(out, p.x);
  binary::write_f32(out, p.y);
}

Point2 read_point(std::istream& in, const char* what) {
  Point2 p;
  p.x = binary::read_f32(in, what);
  p.y = binary::read_f32(in, what);
  return p;
}

std::uint32_t read_count(std::istream& in, const char* what) {
  const auto n = binary::read_u32(in, what);
  if (n > kMaxElements) fail(ErrorKind::kMalformedFile, std::string("implausible count for ") + what);
  return n;
}

template <typename Enum>
Enum read_enum(std::istream& in, std::uint8_t limit, const char* what) {
  const auto v = binary::read_u8(in, what);
  if (v > limit) fail(ErrorKind::kMalformedFile, std::string("bad enum value for ") + what);
  return static_cast<Enum>(v);
}

void write_scene(std::ostream& out, const Scene& s) {
  binary::write_u64(out, s.seed);
  binary::write_u8(out, static_cast<std::uint8_t>(s.kind));
  binary::write_f32(out, s.difficulty);
  binary::write_u32(out, static_cast<std::uint32_t>(s.target_index));
  binary::write_u32(out, static_cast<std::uint32_t>(s.agents.size()));
  binary::write_u32(out, static_cast<std::uint32_t>(s.map.size()));
  binary::write_u32(out, static_cast<std::uint32_t>(s.lights.size()));
  const std::size_t steps = s.history.empty() ? 0 : s.history.front().size();
  binary::write_u32(out, static_cast<std::uint32_t>(steps));
  binary::write_u32(out, static_cast<std::uint32_t>(s.future.points.size()));

  for (const Agent& a : s.agents) {
    write_point(out, a.position);
    write_point(out, a.velocity);
    write_point(out, a.acceleration);
    binary::write_f32(out, a.yaw);
    binary::write_f32(out, static_cast<float>(a.kind));
  }
  for (const MapElement& e : s.map) {
    binary::write_u8(out, static_cast<std::uint8_t>(e.kind));
    const LaneAttributes attrs = e.lane.value_or(LaneAttributes{0.0f, 0.0f, false});
    binary::write_f32(out, attrs.direction);
    binary::write_f32(out, attrs.speed_limit);
    binary::write_f32(out, attrs.priority ? 1.0f : 0.0f);
    binary::write_u32(out, static_cast<std::uint32_t>(e.polyline.size()));
    for (Point2 p : e.polyline) write_point(out, p);
  }
  for (const TrafficLight& l : s.lights) {
    write_point(out, l.position);
    binary::write_u8(out, static_cast<std::uint8_t>(l.state));
  }
  for (const auto& track : s.history) {
    if (track.size() != steps) fail(ErrorKind::kInvalidArgument, "ragged history in scene");
    for (const Pose& p : track) {
      write_point(out, p.position);
      binary::write_f32(out, p.yaw);
    }
  }
  for (Point2 p : s.future.points) write_point(out, p);
}

Scene read_scene(std::istream& in) {
  Scene s;
  s.seed = binary::read_u64(in, "scene seed");
  s.kind = read_enum<ScenarioKind>(in, 3, "scenario kind");
  s.difficulty = binary::read_f32(in, "difficulty");
  s.target_index = binary::read_u32(in, "target index");
  const auto n_agents = read_count(in, "agents");
  const auto n_map = read_count(in, "map elements");
  const auto n_lights = read_count(in, "lights");
  const auto steps = read_count(in, "history steps");
  const auto horizon = read_count(in, "future points");

  s.agents.resize(n_agents);
  for (Agent& a : s.agents) {
    a.position = read_point(in, "agent");
    a.velocity = read_point(in, "agent");
    a.acceleration = read_point(in, "agent");
    a.yaw = binary::read_f32(in, "agent");
    const float kind = binary::read_f32(in, "agent");
    if (kind != 0.0f && kind != 1.0f) fail(ErrorKind::kMalformedFile, "bad agent kind");
    a.kind = kind == 0.0f ? AgentKind::kVehicle : AgentKind::kPedestrian;
  }
  s.map.resize(n_map);
  for (MapElement& e : s.map) {
    e.kind = read_enum<MapElementKind>(in, 2, "map element kind");
    LaneAttributes attrs;
    attrs.direction = binary::read_f32(in, "lane attributes");
    attrs.speed_limit = binary::read_f32(in, "lane attributes");
    attrs.priority = binary::read_f32(in, "lane attributes") != 0.0f;
    if (e.kind == MapElementKind::kLane) e.lane = attrs;
    e.polyline.resize(read_count(in, "polyline"));
    for (Point2& p : e.polyline) p = read_point(in, "polyline");
  }
  s.lights.resize(n_lights);
  for (TrafficLight& l : s.lights) {
    l.position = read_point(in, "light");
    l.state = read_enum<LightState>(in, 3, "light state");
  }
  s.history.assign(n_agents, std::vector<Pose>(steps));
  for (auto& track : s.history) {
    for (Pose& p : track) {
      p.position = read_point(in, "history");
      p.yaw = binary::read_f32(in, "history");
    }
  }
  s.future.points.resize(horizon);
  for (Point2& p : s.future.points) p = read_point(in, "future");
  return s;
}

}  // namespace

Dataset make_dataset(const DatasetSpec& spec) {
  std::vector<ScenarioKind> kinds = spec.kinds;
  if (kinds.empty()) {
    kinds = spec.shifted ? std::vector<ScenarioKind>{ScenarioKind::kStop}
                         : std::vector<ScenarioKind>{ScenarioKind::kStraight, ScenarioKind::kTurn,
                                                     ScenarioKind::kFork};
  }
  float lo = spec.shifted ? 0.7f : 0.0f;
  float hi = spec.shifted ? 1.0f : 0.6f;
  if (spec.difficulty_min >= 0.0f) lo = spec.difficulty_min;
  if (spec.difficulty_max >= 0.0f) hi = spec.difficulty_max;
  if (!(lo <= hi) || lo < 0.0f || hi > 1.0f) {
    fail(ErrorKind::kInvalidArgument, "difficulty range must satisfy 0 <= min <= max <= 1");
  }

  Dataset ds;
  ds.scenes.reserve(spec.count);
  for (std::uint32_t i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = spec.seed_base + i;
    Rng rng(derive_seed(seed, "dataset-draw"));
    const ScenarioKind kind = kinds[rng.below(kinds.size())];
    const float difficulty = static_cast<float>(lo == hi ? lo : rng.uniform(lo, hi));
    ds.scenes.push_back(generate_scene(seed, kind, difficulty, spec.horizon));
  }
  return ds;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out.write(kMagic.data(), kMagic.size());
  binary::write_u32(out, static_cast<std::uint32_t>(dataset.scenes.size()));
  for (const Scene& s : dataset.scenes) write_scene(out, s);
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  write_dataset(out, dataset);
  out.flush();
  if (!out) fail(ErrorKind::kIo, "failed writing " + path.string());
}

Dataset read_dataset(std::istream& in) {
  std::array<char, kMagic.size()> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) fail(ErrorKind::kMalformedFile, "not a scene dataset (bad magic)");
  const auto count = binary::read_u32(in, "scene count");
  if (count > kMaxCount) fail(ErrorKind::kMalformedFile, "implausible scene count");
  Dataset ds;
  ds.scenes.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) ds.scenes.push_back(read_scene(in));
  if (in.peek() != std::char_traits<char>::eof()) {
    fail(ErrorKind::kMalformedFile, "trailing bytes after last scene");
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kMissingFile, "dataset not found: " + path.string());
  return read_dataset(in);
}

}  // namespace trajformer::scene
