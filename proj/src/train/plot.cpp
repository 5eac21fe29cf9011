#include "seditor/train/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "seditor/util/error.hpp"

namespace seditor::train {
namespace {

constexpr double kLogFloor = 1e-6;

constexpr int kWidth = 900;
constexpr int kPanelHeight = 220;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 14;
constexpr int kMarginBottom = 34;
constexpr int kLegendHeight = 26;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#ff7f0e", "#9467bd", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

struct Panel {
  std::string title;
  std::function<double(const MetricsRow&)> value;
  bool log_scale = false;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

double panel_value(const Panel& p, const MetricsRow& r) {
  double v = p.value(r);
  if (p.log_scale) v = std::log10(std::max(v, kLogFloor));
  return v;
}

}  // namespace

std::string render_metrics_svg(const std::vector<PlotSeries>& series,
                               std::optional<double> violation_target) {
  const std::vector<Panel> panels = {
      {"success rate", [](const MetricsRow& r) { return r.success_rate; }, false},
      {"mean episode return",
       [](const MetricsRow& r) { return r.mean_episode_return; }, false},
      {"violation rate (log)",
       [](const MetricsRow& r) { return r.violation_rate; }, true},
  };

  // Shared x range over env_steps.
  double x_lo = 0.0;
  double x_hi = 1.0;
  bool have_x = false;
  for (const PlotSeries& s : series) {
    for (const MetricsRow& r : s.rows) {
      const double x = static_cast<double>(r.env_steps);
      if (!have_x) {
        x_lo = x_hi = x;
        have_x = true;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
      }
    }
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;

  std::vector<Range> ranges(panels.size());
  for (std::size_t p = 0; p < panels.size(); ++p) {
    double lo = 0.0, hi = 0.0;
    bool have = false;
    for (const PlotSeries& s : series) {
      for (const MetricsRow& r : s.rows) {
        const double v = panel_value(panels[p], r);
        if (!std::isfinite(v)) continue;
        if (!have) {
          lo = hi = v;
          have = true;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    if (panels[p].log_scale && violation_target) {
      const double t = std::log10(std::max(*violation_target, kLogFloor));
      if (!have) {
        lo = hi = t;
        have = true;
      } else {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
    }
    if (!have) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      hi += 0.5;
      lo -= 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    ranges[p] = {lo - pad, hi + pad};
  }

  const int total_height =
      kLegendHeight +
      static_cast<int>(panels.size()) * (kPanelHeight + kMarginTop + kMarginBottom);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << total_height << "\" viewBox=\"0 0 " << kWidth << " "
      << total_height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Legend row.
  {
    double x = kMarginLeft;
    const double y = kLegendHeight * 0.65;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const char* color = kPalette[i % kPaletteSize];
      svg << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(y - 4)
          << "\" x2=\"" << coord(x + 24) << "\" y2=\"" << coord(y - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      svg << "<text class=\"legend\" x=\"" << coord(x + 30) << "\" y=\""
          << coord(y) << "\" font-size=\"12\" font-family=\"sans-serif\">"
          << escape_xml(series[i].label) << "</text>\n";
      x += 40 + 7.5 * static_cast<double>(series[i].label.size());
    }
  }

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double top =
        kLegendHeight +
        static_cast<double>(p) * (kPanelHeight + kMarginTop + kMarginBottom) +
        kMarginTop;
    const double bottom = top + kPanelHeight;
    const Range& rg = ranges[p];
    auto sx = [&](double x) {
      return kMarginLeft + (x - x_lo) / (x_hi - x_lo) * plot_w;
    };
    auto sy = [&](double v) {
      return bottom - (v - rg.lo) / (rg.hi - rg.lo) * kPanelHeight;
    };

    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << coord(top)
        << "\" width=\"" << coord(plot_w) << "\" height=\"" << kPanelHeight
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << kMarginLeft << "\" y=\"" << coord(top - 3)
        << "\" font-size=\"13\" font-family=\"sans-serif\">"
        << escape_xml(panels[p].title) << "</text>\n";

    // Ticks: 5 on each axis, log panel labels back in linear units.
    for (int t = 0; t <= 4; ++t) {
      const double fx = x_lo + (x_hi - x_lo) * t / 4.0;
      svg << "<line x1=\"" << coord(sx(fx)) << "\" y1=\"" << coord(bottom)
          << "\" x2=\"" << coord(sx(fx)) << "\" y2=\"" << coord(bottom + 4)
          << "\" stroke=\"#888\"/>\n";
      svg << "<text x=\"" << coord(sx(fx)) << "\" y=\"" << coord(bottom + 16)
          << "\" font-size=\"11\" font-family=\"sans-serif\" "
             "text-anchor=\"middle\">"
          << num(fx) << "</text>\n";
      const double fv = rg.lo + (rg.hi - rg.lo) * t / 4.0;
      const double label = panels[p].log_scale ? std::pow(10.0, fv) : fv;
      svg << "<line x1=\"" << coord(kMarginLeft - 4) << "\" y1=\""
          << coord(sy(fv)) << "\" x2=\"" << kMarginLeft << "\" y2=\""
          << coord(sy(fv)) << "\" stroke=\"#888\"/>\n";
      svg << "<text x=\"" << coord(kMarginLeft - 8) << "\" y=\""
          << coord(sy(fv) + 4)
          << "\" font-size=\"11\" font-family=\"sans-serif\" "
             "text-anchor=\"end\">"
          << num(label) << "</text>\n";
    }

    if (panels[p].log_scale && violation_target) {
      const double ty = sy(std::log10(std::max(*violation_target, kLogFloor)));
      svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << coord(ty)
          << "\" x2=\"" << coord(kMarginLeft + plot_w) << "\" y2=\""
          << coord(ty)
          << "\" stroke=\"#444\" stroke-dasharray=\"6,4\" "
             "stroke-width=\"1.5\"/>\n";
      svg << "<text x=\"" << coord(kMarginLeft + plot_w - 4) << "\" y=\""
          << coord(ty - 4)
          << "\" font-size=\"11\" font-family=\"sans-serif\" "
             "text-anchor=\"end\">target "
          << num(*violation_target) << "</text>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
      if (series[i].rows.empty()) continue;
      const char* color = kPalette[i % kPaletteSize];
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (const MetricsRow& r : series[i].rows) {
        const double v = panel_value(panels[p], r);
        svg << coord(sx(static_cast<double>(r.env_steps))) << ','
            << coord(sy(std::clamp(v, rg.lo, rg.hi))) << ' ';
      }
      svg << "\"/>\n";
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace seditor::train
