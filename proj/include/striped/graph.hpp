#pragma once

// The decorated graph (vertices, ordered half-edges, gluing involution,
// gluing orientation) of a striped atlas, and the morphism algebra on it.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "striped/core.hpp"

namespace striped {

struct HalfEdge {
  std::string name;
  std::size_t vertex = 0;
  Side side = Side::Lower;
  std::size_t position = 0;
  friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

struct StripedGraph {
  std::vector<std::string> vertices;
  std::vector<HalfEdge> half_edges;
  std::vector<std::size_t> xi;
  /// Orientation of the closed edge through each half-edge; Plus on fixed points.
  std::vector<Sign> sigma;
  /// Ordered half-edges per vertex, indexed by side_index().
  std::vector<std::array<std::vector<std::size_t>, 2>> sides;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t half_edge_count() const { return half_edges.size(); }
  const std::vector<std::size_t>& d(std::size_t v, Side s) const { return sides[v][side_index(s)]; }
  bool closed(std::size_t h) const { return xi[h] != h; }
  std::size_t vertex_of(std::size_t h) const { return half_edges[h].vertex; }

  friend bool operator==(const StripedGraph&, const StripedGraph&) = default;
};

inline StripedGraph build_graph(const StripedAtlas& atlas) {
  require_valid(atlas);
  StripedGraph g;
  std::map<IntervalId, std::size_t> index;
  g.sides.resize(atlas.strips.size());
  for (std::size_t v = 0; v < atlas.strips.size(); ++v) {
    const auto& strip = atlas.strips[v];
    g.vertices.push_back(strip.id);
    for (Side s : kSides) {
      const auto& ids = strip.side(s);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        index[ids[i]] = g.half_edges.size();
        g.sides[v][side_index(s)].push_back(g.half_edges.size());
        g.half_edges.push_back({ids[i], v, s, i});
      }
    }
  }
  g.xi.resize(g.half_edges.size());
  for (std::size_t h = 0; h < g.xi.size(); ++h) g.xi[h] = h;
  g.sigma.assign(g.half_edges.size(), Sign::Plus);
  for (const auto& gl : atlas.gluings) {
    std::size_t a = index.at(gl.x), b = index.at(gl.y);
    g.xi[a] = b;
    g.xi[b] = a;
    g.sigma[a] = g.sigma[b] = gl.sign;
  }
  return g;
}

/// Structural invariants of a graph; empty when all hold.
inline std::vector<std::string> graph_invariant_violations(const StripedGraph& g) {
  std::vector<std::string> out;
  const std::size_t m = g.half_edge_count();
  if (g.xi.size() != m || g.sigma.size() != m || g.sides.size() != g.vertex_count()) {
    out.push_back("size mismatch");
    return out;
  }
  for (std::size_t h = 0; h < m; ++h) {
    if (g.xi[h] >= m || g.xi[g.xi[h]] != h) out.push_back("xi is not an involution at " + g.half_edges[h].name);
    else if (g.sigma[h] != g.sigma[g.xi[h]]) out.push_back("sigma differs across edge at " + g.half_edges[h].name);
    if (g.half_edges[h].vertex >= g.vertex_count()) out.push_back("dangling half-edge " + g.half_edges[h].name);
  }
  std::vector<int> seen(m, 0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (Side s : kSides) {
      const auto& ds = g.d(v, s);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& he = g.half_edges.at(ds[i]);
        if (he.vertex != v || he.side != s || he.position != i) {
          out.push_back("position gap or mismatch at " + he.name);
        }
        ++seen[ds[i]];
      }
    }
  }
  for (std::size_t h = 0; h < m; ++h) {
    if (seen[h] != 1) out.push_back("half-edge " + g.half_edges[h].name + " not in exactly one side");
  }
  return out;
}

inline bool is_connected(const StripedGraph& g) {
  if (g.vertex_count() <= 1) return true;
  std::vector<std::vector<std::size_t>> adj(g.vertex_count());
  for (std::size_t h = 0; h < g.half_edge_count(); ++h) {
    if (g.closed(h)) adj[g.vertex_of(h)].push_back(g.vertex_of(g.xi[h]));
  }
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == g.vertex_count();
}

/// Candidate or validated tuple (nu, eps, lori, tori) between two graphs,
/// stored as index maps.
struct GraphMorphism {
  std::vector<std::size_t> nu;
  std::vector<std::size_t> eps;
  std::vector<Sign> lori;
  std::vector<Sign> tori;
  friend bool operator==(const GraphMorphism&, const GraphMorphism&) = default;
  friend auto operator<=>(const GraphMorphism&, const GraphMorphism&) = default;
};

struct MorphismVerdict {
  bool malformed = false;
  std::set<char> conditions;  // subset of {'a','b','c'}
  std::vector<std::string> violations;

  bool ok() const { return !malformed && violations.empty(); }
  bool violates(char condition) const { return conditions.contains(condition); }
};

namespace detail {

inline bool is_bijection(const std::vector<std::size_t>& map, std::size_t codomain) {
  if (map.size() != codomain) return false;
  std::vector<bool> hit(codomain, false);
  for (std::size_t v : map) {
    if (v >= codomain || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

inline std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& p) {
  std::vector<std::size_t> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv.at(p[i]) = i;
  return inv;
}

}  // namespace detail

/// Sign compatibility on the closed edge {x, xi(x)}, read in the order (x, xi(x)):
/// lori(lambda) * sigma(X,Y) == sigma'(eps X, eps Y) * lori(mu).
inline bool sign_compatible(const StripedGraph& g, const StripedGraph& g2, const GraphMorphism& m,
                            std::size_t x) {
  std::size_t y = g.xi[x];
  std::size_t lambda = g.vertex_of(x), mu = g.vertex_of(y);
  return m.lori[lambda] * g.sigma[x] == g2.sigma[m.eps[x]] * m.lori[mu];
}

inline MorphismVerdict check_morphism(const StripedGraph& g, const StripedGraph& g2,
                                      const GraphMorphism& m) {
  MorphismVerdict verdict;
  auto malformed = [&](const std::string& why) {
    verdict.malformed = true;
    verdict.violations.push_back("malformed: " + why);
  };
  if (!detail::is_bijection(m.nu, g2.vertex_count()) || m.nu.size() != g.vertex_count()) {
    malformed("nu is not a bijection of vertices");
  }
  if (!detail::is_bijection(m.eps, g2.half_edge_count()) || m.eps.size() != g.half_edge_count()) {
    malformed("eps is not a bijection of half-edges");
  }
  if (m.lori.size() != g.vertex_count() || m.tori.size() != g.vertex_count()) {
    malformed("sign maps must be defined on every vertex");
  }
  if (verdict.malformed) return verdict;

  auto fail = [&](char cond, std::string what) {
    verdict.conditions.insert(cond);
    verdict.violations.push_back(std::string(1, cond) + ": " + std::move(what));
  };

  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (Side s : kSides) {
      const auto& src = g.d(v, s);
      const auto& dst = g2.d(m.nu[v], apply(m.tori[v], s));
      const std::string where = "vertex " + g.vertices[v] + " side " + side_name(s);
      if (src.size() != dst.size()) {
        fail('a', where + " cannot map onto a side of different size");
        continue;
      }
      const std::size_t k = src.size();
      for (std::size_t i = 0; i < k; ++i) {
        std::size_t expected = m.lori[v] == Sign::Plus ? dst[i] : dst[k - 1 - i];
        if (m.eps[src[i]] != expected) {
          bool inside = std::find(dst.begin(), dst.end(), m.eps[src[i]]) != dst.end();
          fail('a', where + (inside ? " is not monotone as lori requires" : " is not mapped onto the prescribed side"));
          break;
        }
      }
    }
  }

  for (std::size_t h = 0; h < g.half_edge_count(); ++h) {
    if (g2.xi[m.eps[h]] != m.eps[g.xi[h]]) {
      fail('b', "xi-equivariance fails at " + g.half_edges[h].name);
    }
  }

  for (std::size_t x = 0; x < g.half_edge_count(); ++x) {
    std::size_t y = g.xi[x];
    if (y <= x) continue;
    // Only meaningful when eps carries the edge onto a closed edge; (b) reports otherwise.
    if (g2.xi[m.eps[x]] != m.eps[y] || !g2.closed(m.eps[x])) continue;
    if (!sign_compatible(g, g2, m, x) || !sign_compatible(g, g2, m, y)) {
      fail('c', "sign compatibility fails on edge {" + g.half_edges[x].name + "," + g.half_edges[y].name + "}");
    }
  }
  return verdict;
}

inline GraphMorphism identity_morphism(const StripedGraph& g) {
  GraphMorphism m;
  m.nu.resize(g.vertex_count());
  m.eps.resize(g.half_edge_count());
  for (std::size_t i = 0; i < m.nu.size(); ++i) m.nu[i] = i;
  for (std::size_t i = 0; i < m.eps.size(); ++i) m.eps[i] = i;
  m.lori.assign(g.vertex_count(), Sign::Plus);
  m.tori.assign(g.vertex_count(), Sign::Plus);
  return m;
}

/// The product `second * first`: apply `first`, then `second`.
inline GraphMorphism compose(const GraphMorphism& second, const GraphMorphism& first) {
  if (!detail::is_bijection(first.nu, second.nu.size()) ||
      !detail::is_bijection(first.eps, second.eps.size()) ||
      second.lori.size() != second.nu.size() || second.tori.size() != second.nu.size() ||
      first.lori.size() != first.nu.size() || first.tori.size() != first.nu.size()) {
    throw std::invalid_argument("compose: codomain of the first morphism is not the domain of the second");
  }
  GraphMorphism out;
  out.nu.resize(first.nu.size());
  out.lori.resize(first.nu.size());
  out.tori.resize(first.nu.size());
  for (std::size_t v = 0; v < first.nu.size(); ++v) {
    std::size_t w = first.nu[v];
    out.nu[v] = second.nu[w];
    out.lori[v] = second.lori[w] * first.lori[v];
    out.tori[v] = second.tori[w] * first.tori[v];
  }
  out.eps.resize(first.eps.size());
  for (std::size_t h = 0; h < first.eps.size(); ++h) out.eps[h] = second.eps[first.eps[h]];
  return out;
}

/// Inverse consistent with compose(): (nu^-1, eps^-1, lori o nu^-1, tori o nu^-1).
inline GraphMorphism invert(const GraphMorphism& m) {
  if (!detail::is_bijection(m.nu, m.nu.size()) || !detail::is_bijection(m.eps, m.eps.size()) ||
      m.lori.size() != m.nu.size() || m.tori.size() != m.nu.size()) {
    throw std::invalid_argument("invert: malformed morphism");
  }
  GraphMorphism out;
  out.nu = detail::inverse_permutation(m.nu);
  out.eps = detail::inverse_permutation(m.eps);
  out.lori.resize(m.nu.size());
  out.tori.resize(m.nu.size());
  for (std::size_t v = 0; v < m.nu.size(); ++v) {
    out.lori[v] = m.lori[out.nu[v]];
    out.tori[v] = m.tori[out.nu[v]];
  }
  return out;
}

/// Image of a morphism in (Z2^2 wr_Lambda Sigma(Lambda)) x Sigma(H).
struct WreathImage {
  std::vector<std::array<Sign, 2>> signs;  // (lori, tori) per vertex
  std::vector<std::size_t> vertex_perm;
  std::vector<std::size_t> half_edge_perm;
  friend bool operator==(const WreathImage&, const WreathImage&) = default;
};

inline WreathImage project(const GraphMorphism& m) {
  WreathImage w;
  for (std::size_t v = 0; v < m.nu.size(); ++v) w.signs.push_back({m.lori[v], m.tori[v]});
  w.vertex_perm = m.nu;
  w.half_edge_perm = m.eps;
  return w;
}

/// (a', nu')(a, nu) = ((a' o nu) * a, nu' o nu), times composition in Sigma(H).
inline WreathImage wreath_multiply(const WreathImage& left, const WreathImage& right) {
  WreathImage w;
  const std::size_t n = right.vertex_perm.size();
  w.signs.resize(n);
  w.vertex_perm.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& shifted = left.signs.at(right.vertex_perm[v]);
    w.signs[v] = {shifted[0] * right.signs[v][0], shifted[1] * right.signs[v][1]};
    w.vertex_perm[v] = left.vertex_perm.at(right.vertex_perm[v]);
  }
  w.half_edge_perm.resize(right.half_edge_perm.size());
  for (std::size_t h = 0; h < right.half_edge_perm.size(); ++h) {
    w.half_edge_perm[h] = left.half_edge_perm.at(right.half_edge_perm[h]);
  }
  return w;
}

// ---- canonical JSON ------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json to_json(const StripedGraph& g) {
  using nlohmann::json;
  json half_edges = json::object();
  json xi = json::object();
  for (std::size_t h = 0; h < g.half_edge_count(); ++h) {
    const auto& he = g.half_edges[h];
    half_edges[he.name] = {{"vertex", g.vertices[he.vertex]},
                           {"side", to_int(static_cast<Sign>(he.side))},
                           {"position", he.position}};
    xi[he.name] = g.half_edges[g.xi[h]].name;
  }
  std::vector<json> edges;
  for (std::size_t h = 0; h < g.half_edge_count(); ++h) {
    std::size_t k = g.xi[h];
    if (k == h) continue;
    std::string a = g.half_edges[h].name, b = g.half_edges[k].name;
    if (a > b) continue;
    edges.push_back({{"edge", {a, b}}, {"sigma", to_int(g.sigma[h])}});
  }
  std::sort(edges.begin(), edges.end(), [](const json& l, const json& r) { return l.dump() < r.dump(); });
  std::vector<std::string> vertices = g.vertices;
  std::sort(vertices.begin(), vertices.end());
  return json{{"vertices", vertices}, {"half_edges", half_edges}, {"xi", xi}, {"closed_edges", edges}};
}

inline nlohmann::json to_json(const StripedGraph& g, const StripedGraph& g2, const GraphMorphism& m) {
  using nlohmann::json;
  json nu = json::object(), eps = json::object(), lori = json::object(), tori = json::object();
  for (std::size_t v = 0; v < m.nu.size(); ++v) {
    nu[g.vertices[v]] = g2.vertices[m.nu[v]];
    lori[g.vertices[v]] = to_int(m.lori[v]);
    tori[g.vertices[v]] = to_int(m.tori[v]);
  }
  for (std::size_t h = 0; h < m.eps.size(); ++h) eps[g.half_edges[h].name] = g2.half_edges[m.eps[h]].name;
  return json{{"nu", nu}, {"eps", eps}, {"lori", lori}, {"tori", tori}};
}

}  // namespace striped
