#include "attribmkt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace attribmkt {

namespace {

struct Rgb {
  double r, g, b;
};

// Dark blue -> teal -> yellow, linear between stops.
constexpr Rgb kStops[3] = {{0.267, 0.005, 0.329}, {0.128, 0.567, 0.551}, {0.993, 0.906, 0.144}};

std::string color_hex(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const Rgb lo = t < 0.5 ? kStops[0] : kStops[1];
  const Rgb hi = t < 0.5 ? kStops[1] : kStops[2];
  const double s = t < 0.5 ? 2.0 * t : 2.0 * (t - 0.5);
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x",
                static_cast<int>(std::lround(255.0 * (lo.r + s * (hi.r - lo.r)))),
                static_cast<int>(std::lround(255.0 * (lo.g + s * (hi.g - lo.g)))),
                static_cast<int>(std::lround(255.0 * (lo.b + s * (hi.b - lo.b)))));
  return buffer;
}

std::string short_num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4g", value);
  return buffer;
}

}  // namespace

void write_svg_heatmap(const std::filesystem::path& path, const Matrix& values,
                       const HeatmapSpec& spec) {
  require(values.rows() >= 1 && values.cols() >= 1, "svg: empty value matrix");
  require(spec.axis1.size() == static_cast<size_t>(values.rows()) &&
              spec.axis2.size() == static_cast<size_t>(values.cols()),
          "svg: axis lengths must match the value matrix");

  double lo = values.minCoeff();
  double hi = values.maxCoeff();
  if (!(hi > lo)) hi = lo + 1.0;  // flat maps still render

  const int margin_left = 70, margin_bottom = 50, margin_top = 40, margin_right = 90;
  const int plot_w = 520, plot_h = 520;
  const int width = margin_left + plot_w + margin_right;
  const int height = margin_top + plot_h + margin_bottom;
  const double cell_w = static_cast<double>(plot_w) / static_cast<double>(values.cols());
  const double cell_h = static_cast<double>(plot_h) / static_cast<double>(values.rows());

  std::string out;
  out.reserve(static_cast<size_t>(values.size()) * 64 + 2048);
  char line[256];
  std::snprintf(line, sizeof(line),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  out += line;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">%s</text>\n",
                margin_left, spec.title.c_str());
  out += line;

  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double t = (values(i, j) - lo) / (hi - lo);
      const double x = margin_left + static_cast<double>(j) * cell_w;
      const double y = margin_top + plot_h - static_cast<double>(i + 1) * cell_h;
      std::snprintf(line, sizeof(line),
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                    x, y, cell_w + 0.5, cell_h + 0.5, color_hex(t).c_str());
      out += line;
    }
  }

  // Axis end labels and names.
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
                margin_left, margin_top + plot_h + 18, short_num(spec.axis2.front()).c_str());
  out += line;
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"end\">%s</text>\n",
                margin_left + plot_w, margin_top + plot_h + 18,
                short_num(spec.axis2.back()).c_str());
  out += line;
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                "text-anchor=\"middle\">%s</text>\n",
                margin_left + plot_w / 2, margin_top + plot_h + 38, spec.axis2_label.c_str());
  out += line;
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"end\">%s</text>\n",
                margin_left - 6, margin_top + plot_h, short_num(spec.axis1.front()).c_str());
  out += line;
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"end\">%s</text>\n",
                margin_left - 6, margin_top + 12, short_num(spec.axis1.back()).c_str());
  out += line;
  std::snprintf(line, sizeof(line),
                "<text x=\"16\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                "transform=\"rotate(-90 16 %d)\" text-anchor=\"middle\">%s</text>\n",
                margin_top + plot_h / 2, margin_top + plot_h / 2, spec.axis1_label.c_str());
  out += line;

  // Color scale bar.
  const int bar_x = margin_left + plot_w + 20;
  for (int i = 0; i < 64; ++i) {
    const double t = (63 - i) / 63.0;
    std::snprintf(line, sizeof(line),
                  "<rect x=\"%d\" y=\"%.2f\" width=\"18\" height=\"%.2f\" fill=\"%s\"/>\n", bar_x,
                  margin_top + i * (plot_h / 64.0), plot_h / 64.0 + 0.5, color_hex(t).c_str());
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
                bar_x + 24, margin_top + 12, short_num(hi).c_str());
  out += line;
  std::snprintf(line, sizeof(line),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\">%s</text>\n",
                bar_x + 24, margin_top + plot_h, short_num(lo).c_str());
  out += line;
  out += "</svg>\n";

  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw numerical_error("svg: cannot open " + path.string() + " for writing");
  stream.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!stream) throw numerical_error("svg: write failed for " + path.string());
}

}  // namespace attribmkt
