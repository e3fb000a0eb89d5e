#pragma once

// Strips, boundary intervals, gluings and whole-atlas validation.
//
// A strip is described purely combinatorially by the ordered lists of
// boundary-interval ids on its lower and upper side. Geometry (rational
// endpoints per interval) is optional metadata; only the geometry module
// needs it.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "striped/rational.hpp"

namespace striped {

using StripId = std::string;
using IntervalId = std::string;

enum class Sign : int { Minus = -1, Plus = 1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }
constexpr Sign operator*(Sign a, Sign b) {
  return to_int(a) * to_int(b) > 0 ? Sign::Plus : Sign::Minus;
}
constexpr Sign operator-(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
constexpr char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

/// The two sides of a strip, indexed like the sign s in d_s(lambda).
enum class Side : int { Lower = -1, Upper = 1 };

constexpr Side opposite(Side s) { return s == Side::Lower ? Side::Upper : Side::Lower; }
/// The side a vertical orientation sign sends `s` to: tori * s.
constexpr Side apply(Sign vertical, Side s) { return vertical == Sign::Plus ? s : opposite(s); }
constexpr std::size_t side_index(Side s) { return s == Side::Lower ? 0 : 1; }
constexpr const char* side_name(Side s) { return s == Side::Lower ? "lower" : "upper"; }
inline constexpr Side kSides[] = {Side::Lower, Side::Upper};

/// Open interval (lo, hi); a missing endpoint is infinite.
struct GeomInterval {
  std::optional<Rational> lo;  // nullopt = -inf
  std::optional<Rational> hi;  // nullopt = +inf

  bool bounded() const { return lo.has_value() && hi.has_value(); }
  bool nonempty() const { return !bounded() || *lo < *hi; }
  friend bool operator==(const GeomInterval&, const GeomInterval&) = default;
};

struct StripSpec {
  StripId id;
  std::vector<IntervalId> lower;
  std::vector<IntervalId> upper;
  std::map<IntervalId, GeomInterval> geom;

  const std::vector<IntervalId>& side(Side s) const { return s == Side::Lower ? lower : upper; }
  std::vector<IntervalId>& side(Side s) { return s == Side::Lower ? lower : upper; }
  std::size_t interval_count() const { return lower.size() + upper.size(); }
  friend bool operator==(const StripSpec&, const StripSpec&) = default;
};

/// Gluing of boundary interval y onto x; sign is the orientation of the
/// gluing homeomorphism y -> x.
struct Gluing {
  IntervalId x;
  IntervalId y;
  Sign sign = Sign::Plus;
  friend bool operator==(const Gluing&, const Gluing&) = default;
  friend auto operator<=>(const Gluing&, const Gluing&) = default;
};

struct StripedAtlas {
  std::vector<StripSpec> strips;
  std::vector<Gluing> gluings;
  friend bool operator==(const StripedAtlas&, const StripedAtlas&) = default;
};

struct Violation {
  std::string axiom;
  std::vector<std::string> ids;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
  friend auto operator<=>(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;  // canonically sorted
  bool ok() const { return violations.empty(); }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error(summary(report)), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  static std::string summary(const ValidationReport& r) {
    std::string out = "invalid atlas";
    for (const auto& v : r.violations) out += "; " + v.message;
    return out;
  }
  ValidationReport report_;
};

namespace detail {

inline bool less_hi_lo(const GeomInterval& left, const GeomInterval& right) {
  // left.hi <= right.lo, i.e. left lies weakly before right.
  if (!left.hi || !right.lo) return false;
  return *left.hi <= *right.lo;
}

}  // namespace detail

/// A strip all of whose boundary intervals are bounded with pairwise
/// disjoint closures. Requires complete geometry.
inline bool is_model_strip(const StripSpec& strip) {
  for (Side s : kSides) {
    const auto& ids = strip.side(s);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = strip.geom.find(ids[i]);
      if (it == strip.geom.end() || !it->second.bounded()) return false;
      if (i + 1 < ids.size()) {
        auto next = strip.geom.find(ids[i + 1]);
        if (next == strip.geom.end() || !next->second.bounded()) return false;
        if (!(*it->second.hi < *next->second.lo)) return false;
      }
    }
  }
  return true;
}

inline ValidationReport validate_atlas(const StripedAtlas& atlas) {
  ValidationReport report;
  auto add = [&](std::string axiom, std::vector<std::string> ids, std::string message) {
    report.violations.push_back({std::move(axiom), std::move(ids), std::move(message)});
  };

  std::map<StripId, int> strip_count;
  std::map<IntervalId, int> interval_count;
  for (const auto& strip : atlas.strips) {
    if (strip.id.empty()) add("empty-id", {}, "strip with empty id");
    ++strip_count[strip.id];
    for (Side s : kSides) {
      for (const auto& id : strip.side(s)) {
        if (id.empty()) add("empty-id", {strip.id}, "empty interval id in strip '" + strip.id + "'");
        ++interval_count[id];
      }
    }
  }
  for (const auto& [id, n] : strip_count) {
    if (n > 1) add("duplicate-strip", {id}, "strip '" + id + "' defined " + std::to_string(n) + " times");
  }
  for (const auto& [id, n] : interval_count) {
    if (n > 1) {
      add("duplicate-interval", {id},
          "interval '" + id + "' listed " + std::to_string(n) + " times");
    }
  }

  std::map<IntervalId, int> glue_count;
  for (const auto& g : atlas.gluings) {
    for (const auto* id : {&g.x, &g.y}) {
      if (!interval_count.contains(*id)) {
        add("unknown-interval", {*id}, "gluing references unknown interval '" + *id + "'");
      }
    }
    if (g.x == g.y) {
      add("self-glued", {g.x}, "interval glued to itself: '" + g.x + "'");
      ++glue_count[g.x];
    } else {
      ++glue_count[g.x];
      ++glue_count[g.y];
    }
  }
  for (const auto& [id, n] : glue_count) {
    if (n > 1) add("glued-twice", {id}, "interval glued twice: '" + id + "'");
  }

  for (const auto& strip : atlas.strips) {
    if (strip.geom.empty()) continue;
    std::set<IntervalId> own;
    for (Side s : kSides) own.insert(strip.side(s).begin(), strip.side(s).end());
    for (const auto& [id, gi] : strip.geom) {
      if (!own.contains(id)) {
        add("geometry-unknown-interval", {strip.id, id},
            "geometry given for interval '" + id + "' not on strip '" + strip.id + "'");
      } else if (!gi.nonempty()) {
        add("geometry-empty-interval", {strip.id, id}, "interval '" + id + "' has lo >= hi");
      }
    }
    for (const auto& id : own) {
      if (!strip.geom.contains(id)) {
        add("geometry-incomplete", {strip.id, id},
            "strip '" + strip.id + "' has geometry but none for interval '" + id + "'");
      }
    }
    for (Side s : kSides) {
      const auto& ids = strip.side(s);
      for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
        auto a = strip.geom.find(ids[i]);
        auto b = strip.geom.find(ids[i + 1]);
        if (a == strip.geom.end() || b == strip.geom.end()) continue;
        if (!detail::less_hi_lo(a->second, b->second)) {
          add("geometry-order", {strip.id, ids[i], ids[i + 1]},
              "intervals '" + ids[i] + "' and '" + ids[i + 1] + "' on the " + side_name(s) +
                  " side of '" + strip.id + "' are not disjoint and increasing");
        }
      }
    }
  }

  std::sort(report.violations.begin(), report.violations.end());
  return report;
}

inline void require_valid(const StripedAtlas& atlas) {
  auto report = validate_atlas(atlas);
  if (!report.ok()) throw ValidationError(std::move(report));
}

/// Horizontal: (x,y) -> (-x,y), reverses both sides and reflects geometry.
/// Vertical: (x,y) -> (x,u+v-y), swaps the sides.
inline StripSpec flip_strip(StripSpec strip, bool horizontal, bool vertical) {
  if (horizontal) {
    std::reverse(strip.lower.begin(), strip.lower.end());
    std::reverse(strip.upper.begin(), strip.upper.end());
    for (auto& [id, gi] : strip.geom) {
      std::optional<Rational> lo, hi;
      if (gi.hi) lo = Rational(-*gi.hi);
      if (gi.lo) hi = Rational(-*gi.lo);
      gi = GeomInterval{lo, hi};
    }
  }
  if (vertical) std::swap(strip.lower, strip.upper);
  return strip;
}

struct IntervalLocation {
  std::size_t strip = 0;
  Side side = Side::Lower;
  std::size_t position = 0;
  friend bool operator==(const IntervalLocation&, const IntervalLocation&) = default;
};

/// First occurrence of every interval id.
inline std::map<IntervalId, IntervalLocation> locate_intervals(const StripedAtlas& atlas) {
  std::map<IntervalId, IntervalLocation> where;
  for (std::size_t k = 0; k < atlas.strips.size(); ++k) {
    for (Side s : kSides) {
      const auto& ids = atlas.strips[k].side(s);
      for (std::size_t i = 0; i < ids.size(); ++i) where.try_emplace(ids[i], IntervalLocation{k, s, i});
    }
  }
  return where;
}

enum class IntervalRole { Free, GluedX, GluedY };

inline std::map<IntervalId, IntervalRole> interval_roles(const StripedAtlas& atlas) {
  std::map<IntervalId, IntervalRole> roles;
  for (const auto& strip : atlas.strips) {
    for (Side s : kSides) {
      for (const auto& id : strip.side(s)) roles[id] = IntervalRole::Free;
    }
  }
  for (const auto& g : atlas.gluings) {
    roles[g.x] = IntervalRole::GluedX;
    roles[g.y] = IntervalRole::GluedY;
  }
  return roles;
}

/// Connected components of the strip adjacency given by gluings, each a
/// sorted list of strip indices; components ordered by smallest index.
inline std::vector<std::vector<std::size_t>> connected_components(const StripedAtlas& atlas) {
  const std::size_t n = atlas.strips.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto where = locate_intervals(atlas);
  for (const auto& g : atlas.gluings) {
    auto a = where.find(g.x);
    auto b = where.find(g.y);
    if (a == where.end() || b == where.end()) continue;
    parent[find(a->second.strip)] = find(b->second.strip);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_connected(const StripedAtlas& atlas) {
  return connected_components(atlas).size() <= 1;
}

/// The sub-atlas on the given strips, keeping gluings between them.
inline StripedAtlas restrict_atlas(const StripedAtlas& atlas, const std::vector<std::size_t>& strips) {
  StripedAtlas out;
  std::set<IntervalId> kept;
  for (std::size_t k : strips) {
    out.strips.push_back(atlas.strips.at(k));
    for (Side s : kSides) kept.insert(atlas.strips[k].side(s).begin(), atlas.strips[k].side(s).end());
  }
  for (const auto& g : atlas.gluings) {
    if (kept.contains(g.x) && kept.contains(g.y)) out.gluings.push_back(g);
  }
  return out;
}

}  // namespace striped
