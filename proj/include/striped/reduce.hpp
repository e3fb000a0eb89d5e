#pragma once

// Special leaves, reduced atlases, and contraction of unessential edges.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "striped/core.hpp"

namespace striped {

enum class LeafKind { InteriorGlued, FreeBoundary };

/// Image in the surface of one boundary interval (free) or of a glued pair.
struct LeafClass {
  LeafKind kind = LeafKind::FreeBoundary;
  IntervalId x;
  std::optional<IntervalId> y;  // set iff InteriorGlued
  bool special = false;
  bool boundary = false;
  friend bool operator==(const LeafClass&, const LeafClass&) = default;
};

namespace detail {

inline std::size_t side_size(const StripedAtlas& atlas, const IntervalLocation& loc) {
  return atlas.strips[loc.strip].side(loc.side).size();
}

}  // namespace detail

/// A leaf is special iff one of its intervals is a proper part of its side,
/// i.e. shares the side with another interval.
inline std::vector<LeafClass> classify_leaves(const StripedAtlas& atlas) {
  require_valid(atlas);
  auto where = locate_intervals(atlas);
  std::vector<LeafClass> out;
  std::map<IntervalId, bool> glued;
  for (const auto& g : atlas.gluings) {
    glued[g.x] = glued[g.y] = true;
    bool special = detail::side_size(atlas, where.at(g.x)) >= 2 || detail::side_size(atlas, where.at(g.y)) >= 2;
    out.push_back({LeafKind::InteriorGlued, g.x, g.y, special, false});
  }
  for (const auto& strip : atlas.strips) {
    for (Side s : kSides) {
      for (const auto& id : strip.side(s)) {
        if (glued.contains(id)) continue;
        out.push_back({LeafKind::FreeBoundary, id, std::nullopt, strip.side(s).size() >= 2, true});
      }
    }
  }
  return out;
}

inline bool is_reduced(const StripedAtlas& atlas) {
  for (const auto& leaf : classify_leaves(atlas)) {
    if (!leaf.special && !leaf.boundary) return false;
  }
  return true;
}

/// Gluings joining two whole single-interval sides of distinct strips.
inline std::vector<Gluing> unessential_edges(const StripedAtlas& atlas) {
  require_valid(atlas);
  auto where = locate_intervals(atlas);
  std::vector<Gluing> out;
  for (const auto& g : atlas.gluings) {
    const auto& a = where.at(g.x);
    const auto& b = where.at(g.y);
    if (a.strip != b.strip && detail::side_size(atlas, a) == 1 && detail::side_size(atlas, b) == 1) {
      out.push_back(g);
    }
  }
  return out;
}

/// Merges the two strips joined by an unessential gluing into one strip.
///
/// The strip holding `e.y` is normalized first: reflected horizontally when
/// the gluing reverses orientation (every gluing touching that strip changes
/// sign once per incident interval), and reflected vertically when both glued
/// intervals sit on same-named sides. The merged strip keeps the id of the
/// strip holding `e.x`, stacking the strip whose glued side is upper below
/// the other one.
inline StripedAtlas contract(const StripedAtlas& atlas, const Gluing& e) {
  bool found = false;
  for (const auto& u : unessential_edges(atlas)) found = found || u == e;
  if (!found) throw std::invalid_argument("contract: gluing (" + e.x + "," + e.y + ") is not unessential");

  auto where = locate_intervals(atlas);
  const auto loc_x = where.at(e.x);
  auto loc_y = where.at(e.y);
  StripSpec first = atlas.strips[loc_x.strip];
  StripSpec second = atlas.strips[loc_y.strip];

  std::vector<Gluing> gluings;
  for (const auto& g : atlas.gluings) {
    if (g != e) gluings.push_back(g);
  }
  if (e.sign == Sign::Minus) {
    second = flip_strip(std::move(second), true, false);
    std::map<IntervalId, bool> on_second;
    for (Side s : kSides) {
      for (const auto& id : second.side(s)) on_second[id] = true;
    }
    for (auto& g : gluings) {
      if (on_second.contains(g.x)) g.sign = -g.sign;
      if (on_second.contains(g.y)) g.sign = -g.sign;
    }
  }
  if (loc_x.side == loc_y.side) {
    second = flip_strip(std::move(second), false, true);
    loc_y.side = opposite(loc_y.side);
  }

  StripSpec merged;
  merged.id = first.id;
  const StripSpec& bottom = loc_x.side == Side::Upper ? first : second;
  const StripSpec& top = loc_x.side == Side::Upper ? second : first;
  merged.lower = bottom.lower;
  merged.upper = top.upper;
  for (const auto* strip : {&bottom, &top}) {
    for (const auto& [id, gi] : strip->geom) {
      if (id != e.x && id != e.y) merged.geom.emplace(id, gi);
    }
  }

  StripedAtlas out;
  for (std::size_t k = 0; k < atlas.strips.size(); ++k) {
    if (k == loc_x.strip) out.strips.push_back(merged);
    else if (k != loc_y.strip) out.strips.push_back(atlas.strips[k]);
  }
  out.gluings = std::move(gluings);
  return out;
}

enum class ReducedOutcome { Reduced, Cylinder, Moebius };

inline const char* outcome_name(ReducedOutcome o) {
  switch (o) {
    case ReducedOutcome::Reduced: return "reduced";
    case ReducedOutcome::Cylinder: return "cylinder";
    case ReducedOutcome::Moebius: return "moebius";
  }
  return "?";
}

struct ContractionStep {
  Gluing edge;
  StripId kept;
  StripId removed;
};

struct ReducedForm {
  ReducedOutcome outcome = ReducedOutcome::Reduced;
  StripedAtlas atlas;
  std::vector<ContractionStep> trace;
};

/// Picks which of the currently unessential edges to contract next.
using EdgeChooser = std::function<std::size_t(std::span<const Gluing>)>;

namespace detail {

inline std::optional<ReducedOutcome> terminal_shape(const StripedAtlas& atlas) {
  if (atlas.strips.size() != 1 || atlas.gluings.size() != 1) return std::nullopt;
  const auto& s = atlas.strips.front();
  if (s.lower.size() != 1 || s.upper.size() != 1) return std::nullopt;
  const auto& g = atlas.gluings.front();
  bool pairs = (g.x == s.lower[0] && g.y == s.upper[0]) || (g.x == s.upper[0] && g.y == s.lower[0]);
  if (!pairs) return std::nullopt;
  return g.sign == Sign::Plus ? ReducedOutcome::Cylinder : ReducedOutcome::Moebius;
}

}  // namespace detail

inline ReducedForm reduce_atlas(const StripedAtlas& atlas, const EdgeChooser& choose) {
  require_valid(atlas);
  if (!is_connected(atlas)) throw std::invalid_argument("reduce_atlas requires a connected atlas");
  ReducedForm form;
  form.atlas = atlas;
  for (auto edges = unessential_edges(form.atlas); !edges.empty(); edges = unessential_edges(form.atlas)) {
    std::size_t pick = choose(edges);
    if (pick >= edges.size()) throw std::out_of_range("edge chooser returned an invalid index");
    const Gluing e = edges[pick];
    auto locs = locate_intervals(form.atlas);
    ContractionStep step{e, form.atlas.strips[locs.at(e.x).strip].id, form.atlas.strips[locs.at(e.y).strip].id};
    form.atlas = contract(form.atlas, e);
    form.trace.push_back(std::move(step));
  }
  form.outcome = detail::terminal_shape(form.atlas).value_or(ReducedOutcome::Reduced);
  return form;
}

inline ReducedForm reduce_atlas(const StripedAtlas& atlas) {
  return reduce_atlas(atlas, [](std::span<const Gluing>) { return std::size_t{0}; });
}

/// One reduction per connected component, in component order.
inline std::vector<ReducedForm> reduce_components(const StripedAtlas& atlas) {
  require_valid(atlas);
  std::vector<ReducedForm> out;
  for (const auto& comp : connected_components(atlas)) out.push_back(reduce_atlas(restrict_atlas(atlas, comp)));
  return out;
}

struct ConditionsReport {
  bool str_atlas = true;
  bool sigma_loc_fin = true;
  bool sat_nbh = true;
  std::vector<Gluing> same_side_gluings;
  std::map<std::string, std::string> derived;
};

/// Combinatorial condition checks; the topological conditions are only
/// reported through their known equivalences for finite striped atlases.
inline ConditionsReport check_conditions(const StripedAtlas& atlas) {
  require_valid(atlas);
  ConditionsReport r;
  auto where = locate_intervals(atlas);
  for (const auto& g : atlas.gluings) {
    const auto& a = where.at(g.x);
    const auto& b = where.at(g.y);
    if (a.strip == b.strip && a.side == b.side) r.same_side_gluings.push_back(g);
  }
  r.sat_nbh = r.same_side_gluings.empty();
  const std::string verdict = r.sat_nbh ? "holds" : "fails";
  const std::string why = " (derived: equivalent to SatNbh under SigmaLocFin)";
  r.derived["PrjLocTriv"] = verdict + why;
  r.derived["CrossSect"] = verdict + why;
  r.derived["SatNbh"] = verdict + " (no gluing joins two intervals of one side of one strip)";
  return r;
}

inline nlohmann::json to_json(const Gluing& g) {
  return {{"x", g.x}, {"y", g.y}, {"sign", to_int(g.sign)}};
}

inline nlohmann::json to_json(const LeafClass& leaf) {
  nlohmann::json j{{"kind", leaf.kind == LeafKind::InteriorGlued ? "interior-glued" : "free-boundary"},
                   {"x", leaf.x},
                   {"special", leaf.special},
                   {"boundary", leaf.boundary}};
  if (leaf.y) j["y"] = *leaf.y;
  return j;
}

inline nlohmann::json to_json(const ConditionsReport& r) {
  nlohmann::json same = nlohmann::json::array();
  for (const auto& g : r.same_side_gluings) same.push_back(to_json(g));
  return {{"StrAtlas", r.str_atlas},
          {"SigmaLocFin", r.sigma_loc_fin},
          {"SatNbh", r.sat_nbh},
          {"same_side_gluings", same},
          {"derived", r.derived}};
}

}  // namespace striped
