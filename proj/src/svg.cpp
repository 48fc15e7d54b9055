#include "loewner/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace loewner::io {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

bool usable(double x, double y) {
  return std::isfinite(x) && std::isfinite(y) && x > 0.0 && y > 0.0;
}

}  // namespace

const std::string& palette(std::size_t index) {
  static const std::array<std::string, 6> colors = {"#1f77b4", "#d62728", "#2ca02c",
                                                    "#ff7f0e", "#9467bd", "#17becf"};
  return colors[index % colors.size()];
}

void LogLogPlot::add(Series s) {
  if (s.color.empty()) s.color = palette(series_.size());
  series_.push_back(std::move(s));
}

std::string LogLogPlot::render(int width, int height) const {
  const double left = 80, right = 160, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series_) {
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!usable(s.x[k], s.y[k])) continue;
      xmin = std::min(xmin, std::log10(s.x[k]));
      xmax = std::max(xmax, std::log10(s.x[k]));
      ymin = std::min(ymin, std::log10(s.y[k]));
      ymax = std::max(ymax, std::log10(s.y[k]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  xmin = std::floor(xmin), xmax = std::ceil(xmax);
  ymin = std::floor(ymin), ymax = std::ceil(ymax);
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;

  auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     left + pw / 2, top / 2 + 5, escape(title_));

  // Decade grid; thin out labels when the range is wide.
  const int ystep = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 10)));
  for (int e = static_cast<int>(xmin); e <= static_cast<int>(xmax); ++e) {
    const double x = px(e);
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">1e{4}</text>\n",
        x, top, top + ph, top + ph + 18, e);
  }
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += ystep) {
    const double y = py(e);
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">1e{5}</text>\n",
        left, y, left + pw, left - 6, y + 4, e);
  }
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
      left, top, pw, ph);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2,
                     height - 15, escape(xlabel_));
  out += fmt::format(
      "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">{1}</text>\n",
      top + ph / 2, escape(ylabel_));

  for (std::size_t i = 0; i < series_.size(); ++i) {
    const auto& s = series_[i];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty()) {
        out += fmt::format(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            s.color, pts);
        pts.clear();
      }
    };
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!usable(s.x[k], s.y[k])) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", px(std::log10(s.x[k])), py(std::log10(s.y[k])));
    }
    flush();
    const double ly = top + 10 + 18 * static_cast<double>(i);
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n"
        "<text x=\"{4}\" y=\"{5}\">{6}</text>\n",
        left + pw + 10, ly, left + pw + 30, s.color, left + pw + 35, ly + 4, escape(s.name));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace loewner::io
