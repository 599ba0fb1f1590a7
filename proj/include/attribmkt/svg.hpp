#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "attribmkt/types.hpp"

namespace attribmkt {

/// Self-contained SVG heatmap with a linear three-stop color scale and axis
/// labels. Rows index axis 1 (drawn bottom-up), columns axis 2. Output bytes
/// are deterministic for identical inputs.
struct HeatmapSpec {
  std::string title;
  std::string axis1_label;
  std::string axis2_label;
  std::vector<double> axis1;  // one value per matrix row
  std::vector<double> axis2;  // one value per matrix column
};

void write_svg_heatmap(const std::filesystem::path& path, const Matrix& values,
                       const HeatmapSpec& spec);

}  // namespace attribmkt
