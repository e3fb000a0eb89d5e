#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "striped/graph.hpp"
#include "support/examples.hpp"
#include "support/generators.hpp"

using namespace striped;
using namespace striped::testing;

namespace {

std::size_t half_edge(const StripedGraph& g, const std::string& name) {
  for (std::size_t h = 0; h < g.half_edge_count(); ++h) {
    if (g.half_edges[h].name == name) return h;
  }
  throw std::out_of_range(name);
}

// Conditions restated over (vertex, side, position) triples, without the
// library's per-side vectors.
bool conditions_hold(const StripedGraph& g, const GraphMorphism& m) {
  for (std::size_t h = 0; h < g.half_edge_count(); ++h) {
    const auto& src = g.half_edges[h];
    const auto& dst = g.half_edges[m.eps[h]];
    if (dst.vertex != m.nu[src.vertex]) return false;
    if (static_cast<int>(dst.side) != to_int(m.tori[src.vertex]) * static_cast<int>(src.side)) return false;
    for (std::size_t k = 0; k < g.half_edge_count(); ++k) {
      const auto& other = g.half_edges[k];
      if (k == h || other.vertex != src.vertex || other.side != src.side) continue;
      const auto& other_dst = g.half_edges[m.eps[k]];
      bool before = src.position < other.position;
      bool image_before = dst.position < other_dst.position;
      if ((m.lori[src.vertex] == Sign::Plus) != (before == image_before)) return false;
    }
    if (g.xi[m.eps[h]] != m.eps[g.xi[h]]) return false;
    if (g.closed(h)) {
      std::size_t mu = g.vertex_of(g.xi[h]);
      if (to_int(m.lori[src.vertex]) * to_int(g.sigma[h]) != to_int(g.sigma[m.eps[h]]) * to_int(m.lori[mu])) {
        return false;
      }
    }
  }
  return true;
}

GraphMorphism random_candidate(std::mt19937_64& rng, const StripedGraph& g) {
  GraphMorphism m = identity_morphism(g);
  std::shuffle(m.nu.begin(), m.nu.end(), rng);
  std::shuffle(m.eps.begin(), m.eps.end(), rng);
  for (auto& s : m.lori) s = coin(rng, 0.5) ? Sign::Plus : Sign::Minus;
  for (auto& s : m.tori) s = coin(rng, 0.5) ? Sign::Plus : Sign::Minus;
  return m;
}

}  // namespace

TEST(BuildGraph, OpenStrip) {
  auto g = build_graph(open_strip());
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.half_edge_count(), 0u);
}

TEST(BuildGraph, TwoIntervalStrip) {
  auto g = build_graph(two_interval_strip());
  ASSERT_EQ(g.half_edge_count(), 2u);
  EXPECT_TRUE(g.d(0, Side::Lower).empty());
  std::size_t a = half_edge(g, "a"), b = half_edge(g, "b");
  EXPECT_EQ(g.d(0, Side::Upper), (std::vector<std::size_t>{a, b}));
  EXPECT_FALSE(g.closed(a));
  EXPECT_FALSE(g.closed(b));
}

TEST(BuildGraph, Cylinder) {
  auto g = build_graph(cylinder());
  std::size_t a = half_edge(g, "a"), b = half_edge(g, "b");
  EXPECT_EQ(g.xi[a], b);
  EXPECT_EQ(g.xi[b], a);
  EXPECT_EQ(g.sigma[a], Sign::Plus);
  EXPECT_EQ(g.sigma[b], Sign::Plus);
}

TEST(BuildGraph, RejectsInvalidAtlas) {
  StripedAtlas a{{{"S", {"a"}, {}, {}}}, {{"a", "a", Sign::Plus}}};
  EXPECT_THROW(build_graph(a), ValidationError);
}

TEST(BuildGraph, InvariantsProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = build_graph(random_atlas(rng, {}));
    EXPECT_TRUE(graph_invariant_violations(g).empty());
  }
}

TEST(CheckMorphism, IdentityIsOk) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = build_graph(random_atlas(rng, {}));
    EXPECT_TRUE(check_morphism(g, g, identity_morphism(g)).ok());
  }
}

TEST(CheckMorphism, CylinderSwap) {
  auto g = build_graph(cylinder());
  GraphMorphism m = identity_morphism(g);
  std::swap(m.eps[0], m.eps[1]);
  m.tori[0] = Sign::Minus;
  EXPECT_TRUE(check_morphism(g, g, m).ok());
  m.tori[0] = Sign::Plus;
  auto verdict = check_morphism(g, g, m);
  EXPECT_FALSE(verdict.ok());
  EXPECT_TRUE(verdict.violates('a'));
}

TEST(CheckMorphism, TwoIntervalStripCannotFlipVertically) {
  auto g = build_graph(two_interval_strip());
  GraphMorphism m = identity_morphism(g);
  m.tori[0] = Sign::Minus;
  auto verdict = check_morphism(g, g, m);
  EXPECT_FALSE(verdict.malformed);
  EXPECT_TRUE(verdict.violates('a'));
}

TEST(CheckMorphism, MalformedIsDistinct) {
  auto g = build_graph(two_interval_strip());
  GraphMorphism m = identity_morphism(g);
  m.eps = {0, 0};
  auto verdict = check_morphism(g, g, m);
  EXPECT_TRUE(verdict.malformed);
  EXPECT_FALSE(verdict.ok());
  EXPECT_TRUE(verdict.conditions.empty());
}

TEST(CheckMorphism, ReportsEveryViolatedCondition) {
  // Tree: swapping only the glued partners of x1 breaks (b) and (a) at once.
  auto g = build_graph(tree());
  GraphMorphism m = identity_morphism(g);
  std::size_t x1 = half_edge(g, "x1"), x2 = half_edge(g, "x2");
  std::swap(m.eps[x1], m.eps[x2]);
  auto verdict = check_morphism(g, g, m);
  EXPECT_TRUE(verdict.violates('a'));
  EXPECT_TRUE(verdict.violates('b'));
}

TEST(CheckMorphism, SignCompatibilityOnRandomGraphs) {
  // Both orders of every closed edge give the same answer.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = build_graph(random_atlas(rng, {}));
    GraphMorphism m = random_candidate(rng, g);
    for (std::size_t x = 0; x < g.half_edge_count(); ++x) {
      if (!g.closed(x) || !g.closed(m.eps[x]) || g.xi[m.eps[x]] != m.eps[g.xi[x]]) continue;
      EXPECT_EQ(sign_compatible(g, g, m, x), sign_compatible(g, g, m, g.xi[x]));
    }
  }
}

TEST(CheckMorphism, AgreesWithRestatedConditionsProperty) {
  std::mt19937_64 rng(6);
  AtlasParams small;
  small.max_strips = 2;
  small.max_per_side = 2;
  int accepted = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    auto g = build_graph(random_atlas(rng, small));
    GraphMorphism m = random_candidate(rng, g);
    bool ok = check_morphism(g, g, m).ok();
    accepted += ok;
    EXPECT_EQ(ok, conditions_hold(g, m));
  }
  EXPECT_GT(accepted, 50);
}

TEST(Compose, Laws) {
  auto g = build_graph(cylinder());
  GraphMorphism unit = identity_morphism(g);
  GraphMorphism swap = unit;
  std::swap(swap.eps[0], swap.eps[1]);
  swap.tori[0] = Sign::Minus;
  EXPECT_EQ(compose(unit, swap), swap);
  EXPECT_EQ(compose(swap, unit), swap);
  EXPECT_EQ(compose(swap, swap), unit);
  EXPECT_EQ(invert(unit), unit);
  EXPECT_EQ(invert(swap), swap);

  GraphMorphism neg = unit;
  neg.lori[0] = Sign::Minus;
  EXPECT_EQ(compose(neg, neg).lori, std::vector<Sign>{Sign::Plus});
}

TEST(Compose, DomainMismatchThrows) {
  auto g1 = build_graph(cylinder());
  auto g2 = build_graph(tree());
  EXPECT_THROW(compose(identity_morphism(g1), identity_morphism(g2)), std::invalid_argument);
}

TEST(Compose, LawConsistentInverseNeedsShiftedSigns) {
  // nu swaps two vertices with different lori values: the inverse that keeps
  // lori unshifted does not give the unit, the shifted one does.
  GraphMorphism a;
  a.nu = {1, 0};
  a.eps = {};
  a.lori = {Sign::Minus, Sign::Plus};
  a.tori = {Sign::Plus, Sign::Minus};
  GraphMorphism unshifted{{1, 0}, {}, a.lori, a.tori};
  GraphMorphism unit{{0, 1}, {}, {Sign::Plus, Sign::Plus}, {Sign::Plus, Sign::Plus}};
  EXPECT_NE(compose(a, unshifted), unit);
  EXPECT_EQ(compose(a, invert(a)), unit);
  EXPECT_EQ(compose(invert(a), a), unit);
}

TEST(Wreath, ProjectionIsHomomorphismOnRandomTuples) {
  // Holds for arbitrary tuples, not only automorphisms.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = build_graph(random_atlas(rng, {}));
    GraphMorphism a = random_candidate(rng, g), b = random_candidate(rng, g);
    EXPECT_EQ(project(compose(a, b)), wreath_multiply(project(a), project(b)));
  }
}

TEST(Json, GraphIsDeterministicAndSorted) {
  auto g = build_graph(tree());
  auto j = to_json(g);
  EXPECT_EQ(j.dump(), to_json(build_graph(tree())).dump());
  EXPECT_EQ(j["vertices"], nlohmann::json::array({"A", "B", "C"}));
  EXPECT_EQ(j["xi"]["x1"], "y1");
  EXPECT_EQ(j["half_edges"]["x2"]["position"], 1);
}
