#pragma once

// SVG 1.1 figure of an atlas: strips as stacked rectangles with horizontal
// leaves, boundary intervals as thick segments, glued pairs sharing a color.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "striped/core.hpp"

namespace striped {

struct SvgStyle {
  double unit = 60;          // pixels per x unit
  double strip_height = 90;
  double gap = 50;
  double margin = 30;
  int leaf_lines = 3;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
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

inline constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
                                           "#17becf", "#8c564b", "#e377c2", "#bcbd22", "#7f7f7f"};

struct DrawnInterval {
  IntervalId id;
  double lo;
  double hi;
};

/// Interval extents on one side: stored geometry when every interval of the
/// side has it, otherwise unit intervals two units apart centered at 0.
/// Infinite ends are clipped to `reach` beyond the finite data.
inline std::vector<DrawnInterval> side_layout(const StripSpec& strip, Side side) {
  const auto& ids = strip.side(side);
  std::vector<DrawnInterval> out;
  bool have_geom = std::all_of(ids.begin(), ids.end(), [&](const IntervalId& id) { return strip.geom.contains(id); });
  if (!have_geom) {
    const double n = static_cast<double>(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      double lo = 2.0 * static_cast<double>(i) - n + 0.5;
      out.push_back({ids[i], lo, lo + 1});
    }
    return out;
  }
  double min = 0, max = 0;
  bool any = false;
  for (const auto& id : ids) {
    const auto& gi = strip.geom.at(id);
    for (const auto& e : {gi.lo, gi.hi}) {
      if (!e) continue;
      double v = static_cast<double>(*e);
      min = any ? std::min(min, v) : v;
      max = any ? std::max(max, v) : v;
      any = true;
    }
  }
  for (const auto& id : ids) {
    const auto& gi = strip.geom.at(id);
    double lo = gi.lo ? static_cast<double>(*gi.lo) : min - 2;
    double hi = gi.hi ? static_cast<double>(*gi.hi) : max + 2;
    out.push_back({id, lo, hi});
  }
  return out;
}

}  // namespace detail

/// Deterministic for identical input. Does not validate; callers should.
inline std::string render_svg(const StripedAtlas& atlas, const SvgStyle& style = {}) {
  std::map<IntervalId, std::pair<std::string, char>> colored;  // id -> (color, sign)
  for (std::size_t k = 0; k < atlas.gluings.size(); ++k) {
    const auto& g = atlas.gluings[k];
    std::string color = detail::kPalette[k % std::size(detail::kPalette)];
    colored[g.x] = {color, sign_char(g.sign)};
    colored[g.y] = {color, sign_char(g.sign)};
  }

  struct Layout {
    std::vector<detail::DrawnInterval> sides[2];
    double lo;
    double hi;
  };
  std::vector<Layout> layouts;
  double lo_all = -2, hi_all = 2;
  for (const auto& strip : atlas.strips) {
    Layout l{{detail::side_layout(strip, Side::Lower), detail::side_layout(strip, Side::Upper)}, -2, 2};
    for (const auto& side : l.sides) {
      for (const auto& d : side) {
        l.lo = std::min(l.lo, d.lo - 1);
        l.hi = std::max(l.hi, d.hi + 1);
      }
    }
    lo_all = std::min(lo_all, l.lo);
    hi_all = std::max(hi_all, l.hi);
    layouts.push_back(std::move(l));
  }

  const double width = (hi_all - lo_all) * style.unit + 2 * style.margin;
  const double n = static_cast<double>(atlas.strips.size());
  const double height = std::max(1.0, n) * (style.strip_height + style.gap) - style.gap + 2 * style.margin;
  auto px = [&](double x) { return detail::fmt(style.margin + (x - lo_all) * style.unit); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::fmt(width) << "\" height=\""
      << detail::fmt(height) << "\" viewBox=\"0 0 " << detail::fmt(width) << ' ' << detail::fmt(height) << "\">\n"
      << "<style>.strip{fill:#f7f7f7;stroke:#999;stroke-width:1}.leaf{stroke:#bbb;stroke-width:1}"
      << ".interval{stroke-width:5}.free{stroke:#222}text{font-family:sans-serif;font-size:12px}</style>\n";

  for (std::size_t k = 0; k < atlas.strips.size(); ++k) {
    const auto& strip = atlas.strips[k];
    const auto& l = layouts[k];
    const double top = style.margin + static_cast<double>(k) * (style.strip_height + style.gap);
    const double bottom = top + style.strip_height;
    out << "<g id=\"strip-" << detail::xml_escape(strip.id) << "\">\n";
    out << "<rect class=\"strip\" x=\"" << px(l.lo) << "\" y=\"" << detail::fmt(top) << "\" width=\""
        << detail::fmt((l.hi - l.lo) * style.unit) << "\" height=\"" << detail::fmt(style.strip_height) << "\"/>\n";
    for (int i = 1; i <= style.leaf_lines; ++i) {
      double y = top + style.strip_height * i / (style.leaf_lines + 1);
      out << "<line class=\"leaf\" x1=\"" << px(l.lo) << "\" y1=\"" << detail::fmt(y) << "\" x2=\"" << px(l.hi)
          << "\" y2=\"" << detail::fmt(y) << "\"/>\n";
    }
    out << "<text x=\"" << px(l.lo) << "\" y=\"" << detail::fmt(top + style.strip_height / 2) << "\" dx=\"-4\""
        << " text-anchor=\"end\">" << detail::xml_escape(strip.id) << "</text>\n";
    for (Side s : kSides) {
      // Lower side is drawn at the bottom of the rectangle.
      const double y = s == Side::Lower ? bottom : top;
      const double label_y = s == Side::Lower ? bottom + 15 : top - 6;
      for (const auto& d : l.sides[side_index(s)]) {
        auto it = colored.find(d.id);
        out << "<line class=\"interval" << (it == colored.end() ? " free" : "") << "\" x1=\"" << px(d.lo)
            << "\" y1=\"" << detail::fmt(y) << "\" x2=\"" << px(d.hi) << "\" y2=\"" << detail::fmt(y) << '"';
        if (it != colored.end()) out << " stroke=\"" << it->second.first << '"';
        out << "/>\n";
        std::string label = d.id;
        if (it != colored.end()) label += std::string(" (") + it->second.second + ")";
        out << "<text x=\"" << px((d.lo + d.hi) / 2) << "\" y=\"" << detail::fmt(label_y)
            << "\" text-anchor=\"middle\">" << detail::xml_escape(label) << "</text>\n";
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace striped
