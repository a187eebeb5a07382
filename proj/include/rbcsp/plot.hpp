#pragma once

#include <optional>
#include <span>
#include <string>

#include "rbcsp/experiments.hpp"

namespace rbcsp {

struct PlotOptions {
  std::string title;
  std::string x_label = "r";
  std::string y_label = "value";
  std::optional<double> threshold;  // drawn as a vertical rule
  std::string threshold_label;
  int width = 640;
  int height = 400;
};

// Single-series line chart: polyline, axis ticks and an optional threshold rule.
std::string render_svg(std::span<const SweepRow> rows, const PlotOptions& options);

}  // namespace rbcsp
