#include "skelnav/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skelnav/errors.hpp"
#include "skelnav/text_util.hpp"

namespace skelnav {

namespace {

std::string num(double v) { return format_fixed(v, 3); }

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

void open_map(std::ostringstream& os, const OccupancyGrid& grid, double scale) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(grid.width() * scale) << "\" height=\""
     << num(grid.height() * scale) << "\" viewBox=\"0 0 " << grid.width() << ' ' << grid.height() << "\">\n";
  os << "<rect width=\"" << grid.width() << "\" height=\"" << grid.height() << "\" fill=\"white\"/>\n";
  os << "<g fill=\"#333\">\n";
  // One rect per horizontal run of occupied cells keeps files small.
  for (int y = 0; y < grid.height(); ++y) {
    int x = 0;
    while (x < grid.width()) {
      if (!grid.is_occupied(x, y)) {
        ++x;
        continue;
      }
      const int x0 = x;
      while (x < grid.width() && grid.is_occupied(x, y)) ++x;
      os << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << (x - x0) << "\" height=\"1\"/>\n";
    }
  }
  os << "</g>\n";
}

void polyline(std::ostringstream& os, const std::vector<Point>& pts, const std::string& color, double width) {
  if (pts.empty()) return;
  os << "<polyline fill=\"none\" stroke=\"" << escape(color) << "\" stroke-width=\"" << num(width)
     << "\" stroke-linejoin=\"round\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << num(pts[i].x) << ',' << num(pts[i].y);
  os << "\"/>\n";
}

void circle(std::ostringstream& os, Point p, double r, const std::string& color) {
  os << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(r) << "\" fill=\""
     << escape(color) << "\"/>\n";
}

}  // namespace

std::string render_map_svg(const OccupancyGrid& grid, const MapLayers& layers, double scale) {
  std::ostringstream os;
  open_map(os, grid, scale);
  if (layers.skeleton) {
    const auto& m = *layers.skeleton;
    if (m.width() != grid.width() || m.height() != grid.height()) {
      throw DimensionMismatch("skeleton layer does not match the map");
    }
    os << "<g fill=\"#8ecae6\">\n";
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        if (m.at(x, y)) os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"1\" height=\"1\"/>\n";
      }
    }
    os << "</g>\n";
  }
  if (layers.roadmap) {
    const auto& rm = *layers.roadmap;
    os << "<g stroke=\"#999\" stroke-width=\"0.1\">\n";
    for (const auto& e : rm.edges()) {
      const Point a = rm.vertices()[static_cast<std::size_t>(e.a)];
      const Point b = rm.vertices()[static_cast<std::size_t>(e.b)];
      os << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\""
         << num(b.y) << "\"/>\n";
    }
    os << "</g>\n";
  }
  for (const auto& l : layers.lines) polyline(os, l.points, l.color, l.width);
  for (const auto& m : layers.markers) circle(os, m.at, m.radius, m.color);
  os << "</svg>\n";
  return os.str();
}

std::string render_execution_svg(const OccupancyGrid& grid, const Path& planned, const ExecutedTrajectory& traj,
                                 const RiskReport& report, double scale) {
  if (report.flags.size() != traj.samples.size()) throw DimensionMismatch("risk report does not match trajectory");
  std::ostringstream os;
  open_map(os, grid, scale);
  polyline(os, planned.waypoints, "red", 0.3);
  std::vector<Point> executed;
  for (const auto& s : traj.samples) executed.push_back({s.x, s.y});
  polyline(os, executed, "blue", 0.15);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    if (report.flags[i] == RiskFlag::None) continue;
    const auto color = report.flags[i] == RiskFlag::Collision ? "black" : "orange";
    circle(os, {traj.samples[i].x, traj.samples[i].y}, 0.12, color);
  }
  os << "</svg>\n";
  return os.str();
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw ValueError("box plot needs at least one value");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  BoxStats b;
  b.q1 = quantile(0.25);
  b.median = quantile(0.5);
  b.q3 = quantile(0.75);
  const double iqr = b.q3 - b.q1;
  b.whisker_lo = b.q1;
  b.whisker_hi = b.q3;
  for (double v : values) {
    if (v >= b.q1 - 1.5 * iqr) b.whisker_lo = std::min(b.whisker_lo, v);
    if (v <= b.q3 + 1.5 * iqr) b.whisker_hi = std::max(b.whisker_hi, v);
  }
  return b;
}

std::string render_boxplot_svg(const std::string& title, const std::vector<BoxGroup>& groups) {
  constexpr double kWidth = 160.0;
  constexpr double kHeight = 320.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 280.0;
  constexpr double kLeft = 60.0;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& g : groups) {
    for (double v : g.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto ypos = [&](double v) { return kBottom - (v - lo) / (hi - lo) * (kBottom - kTop); };

  const double width = kLeft + kWidth * static_cast<double>(std::max<std::size_t>(groups.size(), 1)) + 20.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(kHeight)
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kBottom
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(ypos(v) + 4) << "\" text-anchor=\"end\">"
       << format_fixed(v, 2) << "</text>\n";
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double cx = kLeft + kWidth * (static_cast<double>(i) + 0.5);
    os << "<text x=\"" << num(cx) << "\" y=\"" << num(kBottom + 20) << "\" text-anchor=\"middle\">"
       << escape(groups[i].label) << "</text>\n";
    if (groups[i].values.empty()) continue;
    const auto b = box_stats(groups[i].values);
    const double half = 30.0;
    os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(ypos(b.whisker_lo)) << "\" x2=\"" << num(cx) << "\" y2=\""
       << num(ypos(b.whisker_hi)) << "\" stroke=\"black\"/>\n";
    os << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(ypos(b.q3)) << "\" width=\"" << num(2 * half)
       << "\" height=\"" << num(ypos(b.q1) - ypos(b.q3)) << "\" fill=\"#cde\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << num(cx - half) << "\" y1=\"" << num(ypos(b.median)) << "\" x2=\"" << num(cx + half)
       << "\" y2=\"" << num(ypos(b.median)) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace skelnav
