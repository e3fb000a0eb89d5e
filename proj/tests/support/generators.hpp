#pragma once

// Seeded random atlases, geometric atlases and monotone maps for property tests.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "striped/striped.hpp"

namespace striped::testing {

struct AtlasParams {
  std::size_t min_strips = 1;
  std::size_t max_strips = 4;
  std::size_t max_per_side = 3;
  double glue_probability = 0.6;
  /// Chance that a side gets exactly one interval (drives unessential edges).
  double single_side_bias = 0.0;
  bool geometry = false;
  std::size_t max_intervals = std::numeric_limits<std::size_t>::max();
};

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Rational in [lo, lo + span] with denominator in {1, 2, 3, 4}.
inline Rational random_rational(std::mt19937_64& rng, long long lo, long long span) {
  long long den = static_cast<long long>(uniform(rng, 1, 4));
  long long num = static_cast<long long>(uniform(rng, 0, static_cast<std::size_t>(span * den)));
  return make_rational(lo * den + num, den);
}

/// Bounded, increasing, pairwise disjoint closures.
inline std::vector<GeomInterval> random_model_side(std::mt19937_64& rng, std::size_t count) {
  std::vector<GeomInterval> out;
  Rational cursor = random_rational(rng, -6, 3);
  for (std::size_t i = 0; i < count; ++i) {
    Rational lo = cursor + random_rational(rng, 0, 2) + make_rational(1, 4);
    Rational hi = lo + random_rational(rng, 0, 2) + make_rational(1, 3);
    out.push_back({lo, hi});
    cursor = hi;
  }
  return out;
}

inline StripedAtlas random_atlas(std::mt19937_64& rng, const AtlasParams& p) {
  StripedAtlas atlas;
  const std::size_t strips = uniform(rng, p.min_strips, p.max_strips);
  std::size_t next = 0;
  std::size_t total = 0;
  for (std::size_t k = 0; k < strips; ++k) {
    StripSpec s;
    s.id = "S" + std::to_string(k);
    for (Side side : kSides) {
      std::size_t n = coin(rng, p.single_side_bias) ? 1 : uniform(rng, 0, p.max_per_side);
      n = std::min(n, p.max_intervals - total);
      total += n;
      auto geom = random_model_side(rng, n);
      for (std::size_t i = 0; i < n; ++i) {
        std::string id = "i" + std::to_string(next++);
        s.side(side).push_back(id);
        if (p.geometry) s.geom[id] = geom[i];
      }
    }
    atlas.strips.push_back(std::move(s));
  }
  std::vector<IntervalId> ids;
  for (const auto& s : atlas.strips) {
    for (Side side : kSides) ids.insert(ids.end(), s.side(side).begin(), s.side(side).end());
  }
  std::shuffle(ids.begin(), ids.end(), rng);
  for (std::size_t i = 0; i + 1 < ids.size(); i += 2) {
    if (!coin(rng, p.glue_probability)) continue;
    atlas.gluings.push_back({ids[i], ids[i + 1], coin(rng, 0.5) ? Sign::Plus : Sign::Minus});
  }
  return atlas;
}

inline StripedAtlas random_connected_atlas(std::mt19937_64& rng, const AtlasParams& p) {
  for (;;) {
    StripedAtlas a = random_atlas(rng, p);
    if (is_connected(a)) return a;
  }
}

/// Monotone piecewise-affine map of the line sending `src` onto `dst`,
/// increasing for Plus and decreasing for Minus, with up to two interior
/// breakpoints inside `src`.
inline PiecewiseMap random_interval_map(std::mt19937_64& rng, const Segment& src, const Segment& dst, Sign sign) {
  const std::size_t inner = uniform(rng, 0, 2);
  auto cut = [&](const Segment& s) {
    std::vector<Rational> ts{s.lo};
    for (std::size_t i = 1; i <= inner; ++i) {
      Rational frac = make_rational(static_cast<long long>(i), static_cast<long long>(inner + 1));
      Rational jitter = make_rational(static_cast<long long>(uniform(rng, 0, 4)) - 2, 12 * static_cast<long long>(inner + 1));
      ts.push_back(s.lo + (frac + jitter) * (s.hi - s.lo));
    }
    ts.push_back(s.hi);
    return ts;
  };
  std::vector<Rational> knots = cut(src);
  std::vector<Rational> values = cut(dst);
  if (sign == Sign::Minus) std::reverse(values.begin(), values.end());
  std::vector<AffineMap> pieces;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    Rational slope = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
    pieces.emplace_back(slope, Rational(values[i] - slope * knots[i]));
  }
  std::vector<Rational> bps(knots.begin() + 1, knots.end() - 1);
  return PiecewiseMap(std::move(bps), std::move(pieces));
}

/// Model-strip atlas with arbitrary monotone gluing maps.
inline GeometricAtlas random_geometric_atlas(std::mt19937_64& rng, AtlasParams p) {
  p.geometry = true;
  GeometricAtlas out;
  out.atlas = random_atlas(rng, p);
  std::map<IntervalId, GeomInterval> geom;
  for (const auto& s : out.atlas.strips) geom.insert(s.geom.begin(), s.geom.end());
  for (const auto& g : out.atlas.gluings) {
    out.gluing_maps[g.y] = random_interval_map(rng, to_segment(geom.at(g.y)), to_segment(geom.at(g.x)), g.sign);
  }
  return out;
}

}  // namespace striped::testing
