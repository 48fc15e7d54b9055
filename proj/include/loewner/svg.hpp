#pragma once

#include <string>
#include <vector>

namespace loewner::io {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
};

/// Log-log line plot. Non-positive or non-finite points break the polyline.
class LogLogPlot {
 public:
  LogLogPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

  void add(Series s);
  std::string render(int width = 800, int height = 500) const;

 private:
  std::string title_;
  std::string xlabel_;
  std::string ylabel_;
  std::vector<Series> series_;
};

/// Default palette, cycled by series index.
const std::string& palette(std::size_t index);

}  // namespace loewner::io
