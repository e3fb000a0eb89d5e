#pragma once

// Exact piecewise-affine realizations of foliated homeomorphisms between
// strips: affine gluing maps, the two-piece interpolation, the triangle map
// that separates closures of boundary intervals, the extension of interval
// maps to the line, and the level-blended extension to half strips and strips.
//
// Every map preserves the second coordinate and is evaluated exactly.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "striped/core.hpp"
#include "striped/rational.hpp"

namespace striped {

/// t -> slope * t + intercept, slope != 0.
struct AffineMap {
  Rational slope{1};
  Rational intercept{0};

  AffineMap() = default;
  AffineMap(Rational s, Rational b) : slope(std::move(s)), intercept(std::move(b)) {
    if (slope == 0) throw std::invalid_argument("affine map with zero slope");
  }
  static AffineMap identity() { return {}; }

  Rational operator()(const Rational& t) const { return slope * t + intercept; }
  Sign orientation() const { return slope > 0 ? Sign::Plus : Sign::Minus; }
  AffineMap inverse() const { return {Rational(1 / slope), Rational(-intercept / slope)}; }
  /// (*this) o inner
  AffineMap after(const AffineMap& inner) const {
    return {Rational(slope * inner.slope), Rational(slope * inner.intercept + intercept)};
  }
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// Bounded open interval (lo, hi).
struct Segment {
  Rational lo;
  Rational hi;

  bool contains(const Rational& t) const { return lo < t && t < hi; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

inline Segment to_segment(const GeomInterval& gi) {
  if (!gi.bounded()) throw std::invalid_argument("unbounded interval where a bounded one is required");
  if (!(*gi.lo < *gi.hi)) throw std::invalid_argument("empty interval");
  return {*gi.lo, *gi.hi};
}

/// The affine homeomorphism (c,d) -> (a,b) with the given orientation.
inline AffineMap affine_between(const Segment& src, const Segment& dst, Sign sign) {
  if (!(src.lo < src.hi) || !(dst.lo < dst.hi)) throw std::invalid_argument("affine_between: empty interval");
  const Rational width = src.hi - src.lo;
  if (sign == Sign::Plus) {
    Rational slope = (dst.hi - dst.lo) / width;
    return {slope, Rational(dst.lo - slope * src.lo)};
  }
  Rational slope = (dst.lo - dst.hi) / width;
  return {slope, Rational(dst.hi - slope * src.lo)};
}

inline AffineMap affine_between(const GeomInterval& src, const GeomInterval& dst, Sign sign) {
  return affine_between(to_segment(src), to_segment(dst), sign);
}

/// Continuous strictly monotone map of the line, affine between breakpoints.
class PiecewiseMap {
 public:
  PiecewiseMap() : pieces_{AffineMap::identity()} {}
  explicit PiecewiseMap(AffineMap single) : pieces_{std::move(single)} {}

  /// pieces[k] applies on [breakpoints[k-1], breakpoints[k]] (ends unbounded).
  PiecewiseMap(std::vector<Rational> breakpoints, std::vector<AffineMap> pieces)
      : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (pieces_.size() != breakpoints_.size() + 1) throw std::invalid_argument("need one more piece than breakpoints");
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
      if (!(breakpoints_[k] < breakpoints_[k + 1])) throw std::invalid_argument("breakpoints must increase strictly");
    }
    const Sign ori = pieces_.front().orientation();
    for (const auto& p : pieces_) {
      if (p.orientation() != ori) throw std::invalid_argument("piecewise map is not monotone");
    }
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
      if (pieces_[k](breakpoints_[k]) != pieces_[k + 1](breakpoints_[k])) {
        throw std::invalid_argument("piecewise map is discontinuous at a breakpoint");
      }
    }
  }

  static PiecewiseMap identity() { return {}; }

  Rational operator()(const Rational& x) const { return pieces_[piece_index(x)](x); }
  Sign orientation() const { return pieces_.front().orientation(); }
  std::span<const Rational> breakpoints() const { return breakpoints_; }
  std::span<const AffineMap> pieces() const { return pieces_; }

  std::size_t piece_index(const Rational& x) const {
    return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) - breakpoints_.begin());
  }

  /// x -> f(-x).
  PiecewiseMap reflected() const {
    std::vector<Rational> bps;
    std::vector<AffineMap> ps;
    for (auto it = breakpoints_.rbegin(); it != breakpoints_.rend(); ++it) bps.push_back(-*it);
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) ps.push_back(it->after(AffineMap(-1, 0)));
    return {std::move(bps), std::move(ps)};
  }

  /// outer o (*this)
  PiecewiseMap then(const AffineMap& outer) const {
    std::vector<AffineMap> ps;
    for (const auto& p : pieces_) ps.push_back(outer.after(p));
    return {breakpoints_, std::move(ps)};
  }

  friend bool operator==(const PiecewiseMap&, const PiecewiseMap&) = default;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<AffineMap> pieces_;
};

struct Point {
  Rational x;
  Rational y;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Immutable evaluable map of the plane (on its domain).
class MapEvaluator {
 public:
  using Fn = std::function<Point(const Point&)>;
  explicit MapEvaluator(Fn fn) : fn_(std::move(fn)) {}
  static MapEvaluator identity() {
    return MapEvaluator([](const Point& p) { return p; });
  }
  Point operator()(const Point& p) const { return fn_(p); }
  /// outer o (*this)
  MapEvaluator then(MapEvaluator outer) const {
    return MapEvaluator([inner = fn_, outer = std::move(outer)](const Point& p) { return outer(inner(p)); });
  }

 private:
  Fn fn_;
};

/// Two-piece linear interpolation of [a,b] onto [c,d] sending u to v.
/// Requires a < u < b, c < v < d and t in [a,b].
inline Rational two_piece_interpolate(const Rational& a, const Rational& u, const Rational& b, const Rational& c,
                                      const Rational& v, const Rational& d, const Rational& t) {
  if (!(a < u && u < b) || !(c < v && v < d)) throw std::domain_error("interpolation knots out of order");
  if (t < a || t > b) throw std::domain_error("interpolation argument outside [a,b]");
  if (t <= u) return (t - a) / (u - a) * (v - c) + c;
  return (t - u) / (b - u) * (d - v) + v;
}

/// Closed triangle with apex O(0,0) and top side from A(-1,1) to B(1,1),
/// without A and B. Sends the top side onto the segment from A to its
/// midpoint C(0,1), is fixed on the slanted sides, preserves the second
/// coordinate, and maps the curve x = y^2 onto x = 0.
inline Point triangle_map(const Point& p) {
  const Rational& x = p.x;
  const Rational& y = p.y;
  if (y < 0 || y > 1 || x < -y || x > y) throw std::domain_error("point outside the normalized triangle");
  if (y == 1 && (x == -1 || x == 1)) throw std::domain_error("triangle corners A and B are excluded");
  if (y == 0) return p;  // apex
  if (y == 1) return {Rational((x + 1) / 2 - 1), y};
  return {two_piece_interpolate(-y, y * y, y, -y, 0, y, x), y};
}

/// A bounded source interval, its image, and the increasing affine map between them.
struct IntervalPair {
  Segment src;
  Segment dst;
  AffineMap map;
  friend bool operator==(const IntervalPair&, const IntervalPair&) = default;
};

inline IntervalPair make_pair_increasing(Segment src, Segment dst) {
  AffineMap m = affine_between(src, dst, Sign::Plus);
  return {std::move(src), std::move(dst), std::move(m)};
}

namespace detail {

inline void check_pair(const IntervalPair& p) {
  if (!(p.src.lo < p.src.hi) || !(p.dst.lo < p.dst.hi)) throw std::invalid_argument("empty interval in pair");
  if (p.map.orientation() != Sign::Plus) throw std::invalid_argument("pair map must be increasing");
  if (p.map(p.src.lo) != p.dst.lo || p.map(p.src.hi) != p.dst.hi) {
    throw std::invalid_argument("pair map does not send its source interval onto its target");
  }
}

}  // namespace detail

/// Homeomorphism of the line restricting to each pair map, with slope 1 on
/// the two unbounded ends and affine connectors between consecutive
/// intervals. Pairs must have bounded, pairwise disjoint closures on both
/// sides and be similarly ordered. No pairs gives the identity.
inline PiecewiseMap line_extension(std::vector<IntervalPair> pairs) {
  if (pairs.empty()) return PiecewiseMap::identity();
  for (const auto& p : pairs) detail::check_pair(p);
  std::sort(pairs.begin(), pairs.end(), [](const IntervalPair& l, const IntervalPair& r) { return l.src.lo < r.src.lo; });
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
    if (!(pairs[i].src.hi < pairs[i + 1].src.lo)) throw std::invalid_argument("source closures are not disjoint");
    if (!(pairs[i].dst.hi < pairs[i + 1].dst.lo)) {
      throw std::invalid_argument("target closures are not disjoint or not similarly ordered");
    }
  }
  std::vector<Rational> bps;
  std::vector<AffineMap> pieces;
  const auto& first = pairs.front();
  pieces.emplace_back(Rational(1), Rational(first.dst.lo - first.src.lo));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    bps.push_back(p.src.lo);
    pieces.push_back(p.map);
    bps.push_back(p.src.hi);
    if (i + 1 < pairs.size()) {
      const auto& q = pairs[i + 1];
      Rational slope = (q.dst.lo - p.dst.hi) / (q.src.lo - p.src.hi);
      pieces.emplace_back(slope, Rational(p.dst.hi - slope * p.src.hi));
    }
  }
  const auto& last = pairs.back();
  pieces.emplace_back(Rational(1), Rational(last.dst.hi - last.src.hi));
  return {std::move(bps), std::move(pieces)};
}

/// Default blending levels 1 - 2^-j for j = 0..count-1.
inline std::vector<Rational> default_levels(std::size_t count) {
  std::vector<Rational> levels;
  Rational gap(1);
  for (std::size_t j = 0; j < count; ++j) {
    levels.push_back(1 - gap);
    gap /= 2;
  }
  return levels;
}

/// Boundary data of the half strip R x [0,1] (with its top boundary
/// intervals): the map on the bottom line, and either the top boundary
/// intervals with their maps or a map of the whole top line.
struct HalfStripSpec {
  std::vector<Rational> levels;  // empty = default_levels(pairs.size() + 1)
  PiecewiseMap lower_map;
  std::vector<IntervalPair> pairs;        // in enumeration order
  std::optional<PiecewiseMap> top_line;   // exclusive with pairs
};

/// Bijection of the half strip onto its image half strip that preserves
/// height: psi_j on level u_j, linear blending in between, psi_K above u_K,
/// and the pair maps on the top intervals. psi_0 = lower_map and psi_j is the
/// line extension of the first j pairs.
///
/// With a full top line, blends linearly from lower_map at y = 0 to the top
/// map at y = 1.
inline MapEvaluator extend_half_strip(const HalfStripSpec& spec) {
  if (spec.lower_map.orientation() != Sign::Plus) throw std::invalid_argument("lower map must be increasing");
  if (spec.top_line) {
    if (!spec.pairs.empty()) throw std::invalid_argument("top line and top intervals are exclusive");
    if (spec.top_line->orientation() != Sign::Plus) throw std::invalid_argument("top map must be increasing");
    return MapEvaluator([bottom = spec.lower_map, top = *spec.top_line](const Point& p) {
      if (p.y < 0 || p.y > 1) throw std::domain_error("point outside the half strip");
      return Point{Rational((1 - p.y) * bottom(p.x) + p.y * top(p.x)), p.y};
    });
  }
  const std::size_t k = spec.pairs.size();
  std::vector<Rational> levels = spec.levels.empty() ? default_levels(k + 1) : spec.levels;
  if (levels.size() != k + 1 || levels.front() != 0) throw std::invalid_argument("need levels u_0 = 0 < ... < u_K");
  for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
    if (!(levels[j] < levels[j + 1])) throw std::invalid_argument("levels must increase strictly");
  }
  if (!(levels.back() < 1)) throw std::invalid_argument("levels must lie in [0,1)");

  std::vector<PiecewiseMap> psi{spec.lower_map};
  for (std::size_t j = 1; j <= k; ++j) {
    psi.push_back(line_extension({spec.pairs.begin(), spec.pairs.begin() + static_cast<std::ptrdiff_t>(j)}));
  }
  // Validate the complete family once (disjointness etc.).
  if (k > 0) line_extension(spec.pairs);

  return MapEvaluator([levels = std::move(levels), psi = std::move(psi), pairs = spec.pairs](const Point& p) {
    const Rational& y = p.y;
    if (y < 0 || y > 1) throw std::domain_error("point outside the half strip");
    if (y == 1) {
      for (const auto& pair : pairs) {
        if (pair.src.contains(p.x)) return Point{pair.map(p.x), y};
      }
      throw std::domain_error("point on the top line but not on a boundary interval");
    }
    auto j = static_cast<std::size_t>(std::upper_bound(levels.begin(), levels.end(), y) - levels.begin()) - 1;
    if (y == levels[j] || j + 1 == levels.size()) return Point{psi[j](p.x), y};
    Rational weight = (levels[j + 1] - y) / (levels[j + 1] - levels[j]);
    return Point{Rational(weight * psi[j](p.x) + (1 - weight) * psi[j + 1](p.x)), y};
  });
}

/// One side of a strip: its bounded intervals with their maps, or a map of
/// the whole side line. Both empty means the side has no boundary.
struct SideCorrespondence {
  std::vector<IntervalPair> pairs;
  std::optional<PiecewiseMap> line;
};

namespace detail {

inline std::optional<Sign> side_orientation(const SideCorrespondence& side) {
  std::optional<Sign> ori;
  auto merge = [&](Sign s) {
    if (ori && *ori != s) throw std::invalid_argument("boundary correspondence mixes orientations on one side");
    ori = s;
  };
  for (const auto& p : side.pairs) merge(p.map.orientation());
  if (side.line) merge(side.line->orientation());
  return ori;
}

inline IntervalPair reflect_source(const IntervalPair& p) {
  // (x -> map(-x)) on (-hi, -lo).
  return {{Rational(-p.src.hi), Rational(-p.src.lo)}, p.dst, p.map.after(AffineMap(-1, 0))};
}

inline HalfStripSpec half_for(const SideCorrespondence& side, bool reflect) {
  HalfStripSpec spec;
  for (const auto& p : side.pairs) spec.pairs.push_back(reflect ? reflect_source(p) : p);
  if (side.line) spec.top_line = reflect ? side.line->reflected() : *side.line;
  return spec;
}

}  // namespace detail

/// Extension of a monotone boundary correspondence of the strip R x [-1,1]
/// to a height-preserving homeomorphism. The two halves are extended
/// separately and agree on the middle line R x 0, where the map is the
/// identity (or x -> -x for order-reversing correspondences, handled by
/// reflecting first). Intervals and maps on the lower side are given in the
/// strip's own x-coordinates.
inline MapEvaluator extend_strip(const SideCorrespondence& lower, const SideCorrespondence& upper) {
  auto lo = detail::side_orientation(lower);
  auto up = detail::side_orientation(upper);
  if (lo && up && *lo != *up) {
    throw std::invalid_argument("halves disagree on the middle line: sides have opposite orientations");
  }
  const bool reflect = (lo ? *lo : up.value_or(Sign::Plus)) == Sign::Minus;
  MapEvaluator bottom_half = extend_half_strip(detail::half_for(lower, reflect));
  MapEvaluator top_half = extend_half_strip(detail::half_for(upper, reflect));
  return MapEvaluator([=](const Point& p) {
    if (p.y < -1 || p.y > 1) throw std::domain_error("point outside the strip");
    Point q{reflect ? Rational(-p.x) : p.x, p.y};
    if (q.y >= 0) return top_half(q);
    Point r = bottom_half(Point{q.x, Rational(-q.y)});
    return Point{r.x, Rational(-r.y)};
  });
}

/// Half strip R x [0,1) plus bounded top intervals whose closures may touch,
/// after shrinking every interval to its left half.
struct SeparatedHalfStrip {
  std::vector<Segment> intervals;
  std::vector<Rational> apex_levels;  // height of each triangle's apex
  MapEvaluator map;
};

/// Makes the closures of the top intervals pairwise disjoint. Each interval
/// (a,b) gets the triangle with top side from (a,1) to (b,1) and apex
/// ((a+b)/2, u_i), u_i = 1 - 2^-i; the triangle map conjugated onto it sends
/// (a,b) x 1 onto (a,(a+b)/2) x 1, and the result is the composition of all of
/// them (identity outside the triangles, fixed on R x 0).
inline SeparatedHalfStrip separate_closures(std::vector<GeomInterval> top) {
  std::vector<Segment> segs;
  for (const auto& gi : top) {
    if (!gi.bounded()) throw std::invalid_argument("separate_closures: unbounded boundary interval");
    segs.push_back(to_segment(gi));
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& l, const Segment& r) { return l.lo < r.lo; });
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    if (segs[i].hi > segs[i + 1].lo) throw std::invalid_argument("separate_closures: overlapping intervals");
  }
  SeparatedHalfStrip out{{}, default_levels(segs.size() + 1), MapEvaluator::identity()};
  out.apex_levels.erase(out.apex_levels.begin());
  for (const auto& s : segs) out.intervals.push_back({s.lo, Rational((s.lo + s.hi) / 2)});

  struct Triangle {
    Rational mid, half_width, apex;
  };
  std::vector<Triangle> tris;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    tris.push_back({Rational((segs[i].lo + segs[i].hi) / 2), Rational((segs[i].hi - segs[i].lo) / 2), out.apex_levels[i]});
  }
  out.map = MapEvaluator([tris, segs](const Point& p) {
    if (p.y < 0 || p.y > 1) throw std::domain_error("point outside the half strip");
    if (p.y == 1 && std::none_of(segs.begin(), segs.end(), [&](const Segment& s) { return s.contains(p.x); })) {
      throw std::domain_error("point on the top line but not on a boundary interval");
    }
    Point q = p;
    // Triangles meet at most in excluded corners, so at most one moves q.
    for (const auto& t : tris) {
      if (q.y < t.apex) continue;
      Rational ny = (q.y - t.apex) / (1 - t.apex);
      Rational nx = (q.x - t.mid) / t.half_width;
      if (nx < -ny || nx > ny) continue;
      Point image = triangle_map({nx, ny});
      q = {Rational(t.mid + image.x * t.half_width), q.y};
      break;
    }
    return q;
  });
  return out;
}

// ---- affinization --------------------------------------------------------

/// Atlas whose gluing maps (y-interval onto x-interval, keyed by y) are
/// arbitrary monotone piecewise-affine maps rather than just a sign.
struct GeometricAtlas {
  StripedAtlas atlas;
  std::map<IntervalId, PiecewiseMap> gluing_maps;
  friend bool operator==(const GeometricAtlas&, const GeometricAtlas&) = default;
};

struct AffinizationResult {
  GeometricAtlas atlas;
  /// Boundary self-map phi o sigma^-1 of each x-interval; extends over its strip.
  std::map<IntervalId, PiecewiseMap> boundary_corrections;
};

/// Replaces every gluing map by the affine map of the same orientation
/// between the same intervals. Requires model strips only.
inline AffinizationResult affinize_atlas(const GeometricAtlas& input) {
  require_valid(input.atlas);
  for (const auto& strip : input.atlas.strips) {
    if (!is_model_strip(strip)) throw std::invalid_argument("affinize_atlas: strip '" + strip.id + "' is not a model strip");
  }
  std::map<IntervalId, GeomInterval> geom;
  for (const auto& strip : input.atlas.strips) geom.insert(strip.geom.begin(), strip.geom.end());

  AffinizationResult out;
  out.atlas.atlas = input.atlas;
  for (auto& g : out.atlas.atlas.gluings) {
    const Segment x = to_segment(geom.at(g.x));
    const Segment y = to_segment(geom.at(g.y));
    auto it = input.gluing_maps.find(g.y);
    PiecewiseMap phi = it != input.gluing_maps.end() ? it->second : PiecewiseMap(affine_between(y, x, g.sign));
    if (phi.orientation() != g.sign) {
      throw std::invalid_argument("gluing map orientation disagrees with the sign of gluing (" + g.x + "," + g.y + ")");
    }
    const bool ends_match = phi.orientation() == Sign::Plus ? (phi(y.lo) == x.lo && phi(y.hi) == x.hi)
                                                            : (phi(y.lo) == x.hi && phi(y.hi) == x.lo);
    if (!ends_match) throw std::invalid_argument("gluing map does not send '" + g.y + "' onto '" + g.x + "'");
    AffineMap sigma = affine_between(y, x, g.sign);
    out.atlas.gluing_maps.insert_or_assign(g.y, PiecewiseMap(sigma));
    // phi o sigma^-1 on x: compose piecewise map after the affine inverse.
    AffineMap inv = sigma.inverse();
    std::vector<Rational> bps;
    std::vector<AffineMap> pieces;
    auto src_bps = phi.breakpoints();
    auto src_pieces = phi.pieces();
    // Breakpoints pulled back through sigma (order flips with a decreasing sigma).
    std::vector<std::pair<Rational, std::size_t>> pulled;
    for (std::size_t k = 0; k < src_bps.size(); ++k) pulled.emplace_back(sigma(src_bps[k]), k);
    if (sigma.orientation() == Sign::Minus) std::reverse(pulled.begin(), pulled.end());
    for (const auto& [b, k] : pulled) bps.push_back(b);
    for (std::size_t k = 0; k <= src_bps.size(); ++k) {
      std::size_t idx = sigma.orientation() == Sign::Plus ? k : src_bps.size() - k;
      pieces.push_back(src_pieces[idx].after(inv));
    }
    out.boundary_corrections.insert_or_assign(g.x, PiecewiseMap(std::move(bps), std::move(pieces)));
  }
  return out;
}

/// CSV rows "x,y,x',y'" with exact fractions, one per sample point.
inline void sample_csv(std::ostream& out, const MapEvaluator& map, std::span<const Point> points) {
  out << "x,y,x_image,y_image\n";
  for (const auto& p : points) {
    Point q = map(p);
    out << to_fraction_string(p.x) << ',' << to_fraction_string(p.y) << ',' << to_fraction_string(q.x) << ','
        << to_fraction_string(q.y) << '\n';
  }
}

}  // namespace striped
