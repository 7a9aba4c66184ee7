#pragma once

// Parameter sets and initial points of the published figures.

#include <optional>
#include <vector>

#include "sisi/model.hpp"

namespace sisi {

struct FigurePreset {
  int figure;
  ModelParams params;
  Vec4 init;
  const char* expected;  // label of the limit the figure shows, "" if none
};

inline const std::vector<FigurePreset>& figure_presets() {
  //                 b     alpha beta1 beta2 k1   k2
  static const std::vector<FigurePreset> presets{
      {1, {0.6, 0.2, 0.5, 0.0, 1.0, 0.3}, {0.1, 0.01, 0.2, 0.69}, "lambda1"},
      {2, {0.1, 0.2, 0.5, 0.0, 1.0, 0.3}, {0.3, 0.2, 0.4, 0.1}, "lambda10"},
      {3, {0.6, 0.1, 0.5, 0.01, 1.2, 1.1}, {0.2, 0.1, 0.3, 0.4}, "lambda1"},
      {4, {0.1, 0.01, 0.8, 0.2, 0.5, 1.2}, {0.2, 0.4, 0.1, 0.3}, "lambda11"},
      // The f/g figures show curves only; they get a centroid start.
      {5, {0.2, 0.3, 0.6, 0.4, 1.0, 1.0}, {0.25, 0.25, 0.25, 0.25}, "lambda11"},
      {6, {0.6, 0.1, 0.5, 0.01, 1.2, 1.1}, {0.25, 0.25, 0.25, 0.25}, "lambda1"},
  };
  return presets;
}

inline std::optional<FigurePreset> figure_preset(int figure) {
  for (const auto& f : figure_presets())
    if (f.figure == figure) return f;
  return std::nullopt;
}

}  // namespace sisi
