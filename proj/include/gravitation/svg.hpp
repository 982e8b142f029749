/* Copyright 2026 The gravitation Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GRAVITATION_SVG_HPP
#define GRAVITATION_SVG_HPP

// Tiny static SVG charts: axes, ticks, polylines and bars. Output depends
// only on the data, so identical inputs give identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace gravitation::svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string label_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Frame {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;
  bool log_x = false;

  double px(double x) const {
    const double t = log_x ? (std::log10(x) - std::log10(x_min)) / (std::log10(x_max) - std::log10(x_min))
                           : (x - x_min) / (x_max - x_min);
    return left + t * width;
  }
  double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

class Document {
public:
  Document(double width, double height) {
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
        << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height)
        << "\" font-family=\"sans-serif\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double w = 1.0,
            bool dashed = false) {
    os_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\""
        << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(w) << '"'
        << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 12, const char* anchor = "middle") {
    os_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size)
        << "\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    os_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\""
        << num(h) << "\" fill=\"" << fill << "\"/>\n";
  }

  void polyline(const Frame& f, const Series& s, double w = 2.0) {
    os_ << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << num(w) << '"'
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os_ << (i ? " " : "") << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i]));
    }
    os_ << "\"/>\n";
  }

  void axes(const Frame& f, const std::vector<double>& x_ticks, const std::vector<double>& y_ticks,
            const std::string& x_label, const std::string& y_label, double font = 12) {
    const double bottom = f.top + f.height;
    line(f.left, bottom, f.left + f.width, bottom, "black");
    line(f.left, f.top, f.left, bottom, "black");
    for (double t : x_ticks) {
      const double x = f.px(t);
      line(x, bottom, x, bottom + 4, "black");
      text(x, bottom + 4 + font, label_num(t), font);
    }
    for (double t : y_ticks) {
      const double y = f.py(t);
      line(f.left - 4, y, f.left, y, "black");
      text(f.left - 6, y + font / 3, label_num(t), font, "end");
    }
    if (!x_label.empty()) text(f.left + f.width / 2, bottom + 2.6 * font + 4, x_label, font);
    if (!y_label.empty()) {
      os_ << "<text x=\"" << num(f.left - 3.2 * font) << "\" y=\"" << num(f.top + f.height / 2)
          << "\" font-size=\"" << num(font) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
          << num(f.left - 3.2 * font) << ' ' << num(f.top + f.height / 2) << ")\">" << y_label << "</text>\n";
    }
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

private:
  std::ostringstream os_;
};

inline std::vector<double> linear_ticks(double lo, double hi, int count) {
  std::vector<double> t;
  for (int i = 0; i <= count; ++i) t.push_back(lo + (hi - lo) * i / count);
  return t;
}

/// 1-2-5 ticks per decade inside [lo, hi].
inline std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> t;
  for (int e = static_cast<int>(std::floor(std::log10(lo))); e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double v = m * std::pow(10.0, e);
      if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) t.push_back(v);
    }
  }
  return t;
}

inline std::string line_chart(const std::string& title, const std::vector<Series>& series,
                              const std::string& x_label, const std::string& y_label, bool log_x,
                              double y_min, double y_max) {
  double x_min = series.front().x.front(), x_max = x_min;
  for (const auto& s : series) {
    for (double x : s.x) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
  }
  Document doc(820, 460);
  const Frame f{80, 50, 480, 340, x_min, x_max, y_min, y_max, log_x};
  doc.text(320, 28, title, 16);
  doc.axes(f, log_x ? log_ticks(x_min, x_max) : linear_ticks(x_min, x_max, 5),
           linear_ticks(y_min, y_max, 5), x_label, y_label);
  double legend_y = 70;
  for (const auto& s : series) {
    doc.polyline(f, s);
    doc.line(575, legend_y - 4, 600, legend_y - 4, s.color, 2.0, s.dashed);
    doc.text(606, legend_y, s.label, 12, "start");
    legend_y += 20;
  }
  return doc.finish();
}

struct BarPanel {
  std::string title;
  std::vector<double> values;
};

/// Grid of bar charts sharing the x range 0..values.size()-1; each panel
/// scales its own y axis.
inline std::string bar_panels(const std::string& title, const std::vector<BarPanel>& panels, int columns,
                              const std::string& x_label) {
  const int rows = static_cast<int>((panels.size() + static_cast<std::size_t>(columns) - 1) /
                                    static_cast<std::size_t>(columns));
  const double pw = 260, ph = 190;
  Document doc(columns * pw + 20, rows * ph + 60);
  doc.text((columns * pw + 20) / 2, 28, title, 16);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& p = panels[i];
    const double ox = 20 + static_cast<double>(i % static_cast<std::size_t>(columns)) * pw;
    const double oy = 50 + static_cast<double>(i / static_cast<std::size_t>(columns)) * ph;
    const double top = *std::max_element(p.values.begin(), p.values.end());
    const double n = static_cast<double>(p.values.size());
    const Frame f{ox + 45, oy + 20, pw - 65, ph - 70, -0.5, n - 0.5, 0.0, top > 0 ? top * 1.05 : 1.0};
    doc.text(ox + pw / 2, oy + 12, p.title, 12);
    const double bw = f.width / n;
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      const double x = f.px(static_cast<double>(k)) - bw / 2;
      const double y = f.py(p.values[k]);
      doc.rect(x, y, bw, f.top + f.height - y, "#4c72b0");
    }
    doc.axes(f, linear_ticks(0, n - 1, 4), linear_ticks(0, f.y_max, 2), x_label, "", 10);
  }
  return doc.finish();
}

}  // namespace gravitation::svg

#endif  // GRAVITATION_SVG_HPP
