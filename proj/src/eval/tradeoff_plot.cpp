#include <algorithm>
#include <cmath>

#include "framesift/eval.hpp"

namespace framesift::eval {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string fixed(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const long long scaled = std::llround(v * scale);
  std::string s = std::to_string(std::llabs(scaled));
  if (decimals > 0) {
    if (s.size() <= static_cast<std::size_t>(decimals)) s.insert(0, static_cast<std::size_t>(decimals) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(decimals), ".");
  }
  return (scaled < 0 ? "-" : "") + s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

}  // namespace

std::string tradeoff_csv(std::span<const RetrievalReport> reports) {
  std::string out = "method,frames_sampled,recall,task,k\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cells) {
      if (c.category != kAllCategories) continue;
      out += r.method + "," + std::to_string(r.frames_sampled) + "," + format_number(c.recall) + "," +
             std::string(to_string(c.task)) + "," + std::to_string(c.k) + "\n";
    }
  }
  return out;
}

std::string tradeoff_svg(std::span<const RetrievalReport> reports, Task task, int k) {
  std::size_t max_frames = 1;
  for (const auto& r : reports) max_frames = std::max(max_frames, r.frames_sampled);
  const double x_max = static_cast<double>(max_frames) * 1.05;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + x / x_max * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - y) * plot_h; };

  const std::string title = std::string(to_string(task)) + " retrieval: frame count vs recall@" + std::to_string(k);
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" + fixed(kHeight, 0) +
       "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fixed(kWidth / 2, 1) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
       "</text>\n";
  s += "<line x1=\"" + fixed(kLeft, 1) + "\" y1=\"" + fixed(py(0), 1) + "\" x2=\"" + fixed(kWidth - kRight, 1) +
       "\" y2=\"" + fixed(py(0), 1) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fixed(kLeft, 1) + "\" y1=\"" + fixed(py(0), 1) + "\" x2=\"" + fixed(kLeft, 1) + "\" y2=\"" +
       fixed(py(1), 1) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = i / 5.0;
    s += "<text x=\"" + fixed(kLeft - 6, 1) + "\" y=\"" + fixed(py(yv) + 4, 1) + "\" text-anchor=\"end\">" +
         fixed(yv, 1) + "</text>\n";
    const double xv = x_max * i / 5.0;
    s += "<text x=\"" + fixed(px(xv), 1) + "\" y=\"" + fixed(py(0) + 16, 1) + "\" text-anchor=\"middle\">" +
         fixed(xv, 0) + "</text>\n";
  }
  s += "<text x=\"" + fixed(kLeft + plot_w / 2, 1) + "\" y=\"" + fixed(kHeight - 15, 1) +
       "\" text-anchor=\"middle\">frames sampled</text>\n";
  s += "<text x=\"15\" y=\"" + fixed(kTop + plot_h / 2, 1) + "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
       fixed(kTop + plot_h / 2, 1) + ")\">recall@" + std::to_string(k) + "</text>\n";
  for (const auto& r : reports) {
    const auto* cell = r.find(task, k);
    if (cell == nullptr) continue;
    const double x = px(static_cast<double>(r.frames_sampled)), y = py(cell->recall);
    s += "<circle cx=\"" + fixed(x, 1) + "\" cy=\"" + fixed(y, 1) + "\" r=\"4\" fill=\"steelblue\"><title>" +
         escape(r.method) + "</title></circle>\n";
    s += "<text x=\"" + fixed(x + 6, 1) + "\" y=\"" + fixed(y - 6, 1) + "\" font-size=\"9\">" + escape(r.method) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace framesift::eval
