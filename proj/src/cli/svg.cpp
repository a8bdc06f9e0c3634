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

#include "trajformer/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <sstream>

#include "trajformer/metrics/metrics.hpp"

namespace trajformer::cli {

namespace {

constexpr double kSize = 640.0;
constexpr double kMargin = 40.0;
constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#17becf", "#e377c2", "#8c564b"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Ego frame to screen: forward (+x) is up, left (+y) is left.
struct View {
  double min_x = std::numeric_limits<double>::max();
  double max_x = std::numeric_limits<double>::lowest();
  double min_y = std::numeric_limits<double>::max();
  double max_y = std::numeric_limits<double>::lowest();
  double scale = 1.0;

  void include(scene::Point2 p) {
    min_x = std::min(min_x, double{p.x});
    max_x = std::max(max_x, double{p.x});
    min_y = std::min(min_y, double{p.y});
    max_y = std::max(max_y, double{p.y});
  }
  void finish() {
    const double span = std::max({max_x - min_x, max_y - min_y, 10.0});
    scale = (kSize - 2 * kMargin) / span;
  }
  double sx(scene::Point2 p) const { return kSize / 2 - (p.y - (min_y + max_y) / 2) * scale; }
  double sy(scene::Point2 p) const { return kSize / 2 - (p.x - (min_x + max_x) / 2) * scale; }
  std::string point(scene::Point2 p) const { return fmt(sx(p)) + "," + fmt(sy(p)); }
};

}  // namespace

std::string trajectory_svg(const scene::Scene& scene, const model::TrajectoryBundle& prediction,
                           const std::string& title) {
  View view;
  view.include({0.0f, 0.0f});
  for (const auto& p : scene.future.points) view.include(p);
  for (int k = 0; k < prediction.k; ++k) {
    for (int t = 0; t < prediction.horizon; ++t) view.include(prediction.point(k, t));
  }
  view.finish();
  auto visible = [&](scene::Point2 p) {
    const double x = view.sx(p);
    const double y = view.sy(p);
    return x >= 0 && x <= kSize && y >= 0 && y <= kSize;
  };

  std::ostringstream s;
  s << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kSize << R"(" height=")" << kSize
    << R"(" viewBox="0 0 )" << kSize << ' ' << kSize << "\">\n";
  s << R"(<rect width="100%" height="100%" fill="white"/>)" << "\n";
  s << "<title>" << escape(title) << "</title>\n";

  // Map context as paths, clipped to points on screen.
  for (const auto& m : scene.map) {
    std::string d;
    for (const auto& p : m.polyline) {
      if (!visible(p)) continue;
      d += (d.empty() ? "M" : " L") + view.point(p);
    }
    if (d.empty()) continue;
    const char* colour = m.kind == scene::MapElementKind::kLane ? "#c8c8c8"
                         : m.kind == scene::MapElementKind::kRoadBoundary ? "#606060"
                                                                           : "#e0c080";
    s << R"(<path d=")" << d << R"(" fill="none" stroke=")" << colour
      << R"(" stroke-width="1.5"/>)" << "\n";
  }
  for (std::size_t a = 0; a < scene.agents.size(); ++a) {
    const auto& p = scene.agents[a].position;
    if (!visible(p)) continue;
    const bool target = a == scene.target_index;
    s << R"(<circle cx=")" << fmt(view.sx(p)) << R"(" cy=")" << fmt(view.sy(p)) << R"(" r=")"
      << (target ? 5 : 3) << R"(" fill=")" << (target ? "black" : "#888888") << "\"/>\n";
  }

  std::string gt;
  for (const auto& p : scene.future.points) gt += (gt.empty() ? "" : " ") + view.point(p);
  s << R"(<polyline points=")" << gt
    << R"(" fill="none" stroke="#808000" stroke-width="5" stroke-linecap="round"/>)" << "\n";

  for (int k = 0; k < prediction.k; ++k) {
    std::string pts;
    for (int t = 0; t < prediction.horizon; ++t) {
      pts += (pts.empty() ? "" : " ") + view.point(prediction.point(k, t));
    }
    s << R"(<polyline points=")" << pts << R"(" fill="none" stroke=")"
      << kPalette[static_cast<std::size_t>(k) % kPalette.size()] << R"(" stroke-width="2"/>)"
      << "\n";
  }

  // Legend.
  const double x0 = 12;
  double y = 20;
  s << R"(<text x=")" << x0 << R"(" y=")" << y << R"(" font-family="sans-serif" font-size="13">)"
    << escape(title) << "</text>\n";
  y += 20;
  s << R"(<rect x=")" << x0 << R"(" y=")" << y - 8 << R"(" width="18" height="5" fill="#808000"/>)"
    << R"(<text x=")" << x0 + 24 << R"(" y=")" << y
    << R"(" font-family="sans-serif" font-size="12">ground truth</text>)" << "\n";
  for (int k = 0; k < prediction.k; ++k) {
    y += 18;
    const double ade = metrics::ade(prediction, k, scene.future);
    const std::string label = "p=" + fmt(prediction.confidences[static_cast<std::size_t>(k)], "%.3f") +
                              ", ADE=" + fmt(ade, "%.2f");
    s << R"(<rect x=")" << x0 << R"(" y=")" << y - 7 << R"(" width="18" height="3" fill=")"
      << kPalette[static_cast<std::size_t>(k) % kPalette.size()] << R"("/>)"
      << R"(<text x=")" << x0 + 24 << R"(" y=")" << y
      << R"(" font-family="sans-serif" font-size="12">)" << label << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string retention_svg(const metrics::RetentionCurve& curve, const std::string& title) {
  const double w = kSize, h = kSize * 0.75;
  const double left = 60, right = 20, top = 40, bottom = 50;
  double vmax = 0.0;
  for (double v : curve.values) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;
  auto px = [&](double f) { return left + f * (w - left - right); };
  auto py = [&](double v) { return h - bottom - v / vmax * (h - top - bottom); };

  std::ostringstream s;
  s << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << w << R"(" height=")" << h
    << R"(" viewBox="0 0 )" << w << ' ' << h << "\">\n";
  s << R"(<rect width="100%" height="100%" fill="white"/>)" << "\n";
  s << "<title>" << escape(title) << "</title>\n";
  s << R"(<path d="M)" << fmt(px(0)) << ',' << fmt(py(0)) << " L" << fmt(px(1)) << ','
    << fmt(py(0)) << " M" << fmt(px(0)) << ',' << fmt(py(0)) << " L" << fmt(px(0)) << ','
    << fmt(py(vmax)) << R"(" stroke="black" fill="none"/>)" << "\n";
  std::string pts;
  for (std::size_t i = 0; i < curve.fractions.size(); ++i) {
    pts += (pts.empty() ? "" : " ") + fmt(px(curve.fractions[i])) + "," + fmt(py(curve.values[i]));
  }
  s << R"(<polyline points=")" << pts << R"(" fill="none" stroke="#1f77b4" stroke-width="2"/>)"
    << "\n";
  const auto text = [&](double x, double y, const std::string& t, const char* anchor) {
    s << R"(<text x=")" << fmt(x) << R"(" y=")" << fmt(y) << R"(" text-anchor=")" << anchor
      << R"(" font-family="sans-serif" font-size="12">)" << escape(t) << "</text>\n";
  };
  text(w / 2, 22, title + "  R-AUC=" + fmt(curve.area, "%.4g"), "middle");
  text(w / 2, h - 12, "retention fraction", "middle");
  text(px(0), py(0) + 16, "0", "middle");
  text(px(1), py(0) + 16, "1", "middle");
  text(left - 6, py(vmax) + 4, fmt(vmax, "%.3g"), "end");
  text(left - 6, py(0) + 4, "0", "end");
  s << "</svg>\n";
  return s.str();
}

}  // namespace trajformer::cli
