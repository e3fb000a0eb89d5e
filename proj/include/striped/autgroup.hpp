#pragma once

// Isomorphism search between decorated graphs, the automorphism group,
// an exhaustive oracle for it, and small-group identification.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "striped/graph.hpp"

namespace striped {

namespace detail {

class IsomorphismSearch {
 public:
  using Visitor = std::function<bool(const GraphMorphism&)>;

  IsomorphismSearch(const StripedGraph& g, const StripedGraph& g2, Visitor visit)
      : g_(g), g2_(g2), visit_(std::move(visit)) {}

  void run() {
    if (g_.vertex_count() != g2_.vertex_count() || g_.half_edge_count() != g2_.half_edge_count()) return;
    const std::size_t n = g_.vertex_count();
    order_ = bfs_order();
    current_.nu.assign(n, kUnset);
    current_.lori.assign(n, Sign::Plus);
    current_.tori.assign(n, Sign::Plus);
    current_.eps.assign(g_.half_edge_count(), kUnset);
    used_.assign(n, false);
    assigned_.assign(n, false);
    stop_ = false;
    extend(0);
  }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  // Vertices in BFS order along closed edges so neighbours are fixed early.
  std::vector<std::size_t> bfs_order() const {
    const std::size_t n = g_.vertex_count();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> order;
    for (std::size_t root = 0; root < n; ++root) {
      if (seen[root]) continue;
      seen[root] = true;
      std::size_t head = order.size();
      order.push_back(root);
      while (head < order.size()) {
        std::size_t v = order[head++];
        for (Side s : kSides) {
          for (std::size_t h : g_.d(v, s)) {
            std::size_t w = g_.vertex_of(g_.xi[h]);
            if (!seen[w]) {
              seen[w] = true;
              order.push_back(w);
            }
          }
        }
      }
    }
    return order;
  }

  static std::pair<std::size_t, std::size_t> signature(const StripedGraph& g, std::size_t v) {
    auto a = g.d(v, Side::Lower).size(), b = g.d(v, Side::Upper).size();
    return {std::min(a, b), std::max(a, b)};
  }

  // Unique monotone bijection on each side, then local checks of (b), (c).
  bool place(std::size_t v, std::size_t target, Sign lori, Sign tori) {
    for (Side s : kSides) {
      const auto& src = g_.d(v, s);
      const auto& dst = g2_.d(target, apply(tori, s));
      if (src.size() != dst.size()) return false;
      for (std::size_t i = 0; i < src.size(); ++i) {
        current_.eps[src[i]] = lori == Sign::Plus ? dst[i] : dst[src.size() - 1 - i];
      }
    }
    current_.nu[v] = target;
    current_.lori[v] = lori;
    current_.tori[v] = tori;
    assigned_[v] = true;
    for (Side s : kSides) {
      for (std::size_t x : g_.d(v, s)) {
        std::size_t image = current_.eps[x];
        std::size_t partner = g_.xi[x];
        if (partner == x) {
          if (g2_.xi[image] != image) return false;
          continue;
        }
        if (!g2_.closed(image)) return false;
        std::size_t mu = g_.vertex_of(partner);
        if (assigned_[mu]) {
          if (g2_.xi[image] != current_.eps[partner]) return false;
          if (!sign_compatible(g_, g2_, current_, x)) return false;
        } else {
          std::size_t mu_image = g2_.vertex_of(g2_.xi[image]);
          if (used_[mu_image] || mu_image == target) return false;
        }
      }
    }
    return true;
  }

  void unplace(std::size_t v) {
    for (Side s : kSides) {
      for (std::size_t x : g_.d(v, s)) current_.eps[x] = kUnset;
    }
    current_.nu[v] = kUnset;
    assigned_[v] = false;
  }

  void extend(std::size_t depth) {
    if (stop_) return;
    if (depth == order_.size()) {
      if (check_morphism(g_, g2_, current_).ok()) stop_ = !visit_(current_);
      return;
    }
    const std::size_t v = order_[depth];
    const auto sig = signature(g_, v);
    for (std::size_t target = 0; target < g2_.vertex_count() && !stop_; ++target) {
      if (used_[target] || signature(g2_, target) != sig) continue;
      used_[target] = true;
      for (Sign tori : {Sign::Plus, Sign::Minus}) {
        for (Sign lori : {Sign::Plus, Sign::Minus}) {
          if (place(v, target, lori, tori)) extend(depth + 1);
          unplace(v);
          if (stop_) break;
        }
        if (stop_) break;
      }
      used_[target] = false;
    }
  }

  const StripedGraph& g_;
  const StripedGraph& g2_;
  Visitor visit_;
  std::vector<std::size_t> order_;
  GraphMorphism current_;
  std::vector<bool> used_;
  std::vector<bool> assigned_;
  bool stop_ = false;
};

}  // namespace detail

/// Calls `visit` for every isomorphism g -> g2 until it returns false.
inline void for_each_isomorphism(const StripedGraph& g, const StripedGraph& g2,
                                 const std::function<bool(const GraphMorphism&)>& visit) {
  detail::IsomorphismSearch(g, g2, visit).run();
}

inline std::optional<GraphMorphism> find_isomorphism(const StripedGraph& g, const StripedGraph& g2) {
  std::optional<GraphMorphism> found;
  for_each_isomorphism(g, g2, [&](const GraphMorphism& m) {
    found = m;
    return false;
  });
  return found;
}

struct AutSet {
  StripedGraph graph;
  std::vector<GraphMorphism> elements;  // sorted by serialized form

  std::size_t order() const { return elements.size(); }
  bool contains(const GraphMorphism& m) const {
    return std::find(elements.begin(), elements.end(), m) != elements.end();
  }
};

inline std::string serialized_key(const StripedGraph& g, const GraphMorphism& m) {
  return to_json(g, g, m).dump();
}

inline AutSet make_autset(const StripedGraph& g, std::vector<GraphMorphism> elements) {
  std::vector<std::pair<std::string, GraphMorphism>> keyed;
  keyed.reserve(elements.size());
  for (auto& m : elements) keyed.emplace_back(serialized_key(g, m), std::move(m));
  std::sort(keyed.begin(), keyed.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& l, const auto& r) { return l.first == r.first; }),
              keyed.end());
  AutSet out{g, {}};
  for (auto& [key, m] : keyed) out.elements.push_back(std::move(m));
  return out;
}

inline AutSet automorphisms(const StripedGraph& g) {
  std::vector<GraphMorphism> found;
  for_each_isomorphism(g, g, [&](const GraphMorphism& m) {
    found.push_back(m);
    return true;
  });
  return make_autset(g, std::move(found));
}

struct OracleBounds {
  std::size_t max_vertices = 5;
  std::size_t max_half_edges = 10;
};

class OracleBoundsError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// How much the oracle trims its enumeration of half-edge bijections.
enum class OracleMode {
  /// Only tries half-edge images incident to the image vertex and
  /// commuting with the involutions; every surviving tuple is filtered by
  /// check_morphism.
  Pruned,
  /// Every bijection of half-edges, no filtering before check_morphism.
  Exhaustive,
};

/// Independent oracle: enumerates whole tuples (nu, eps, lori, tori) and
/// keeps the ones check_morphism accepts.
inline AutSet automorphisms_bruteforce(const StripedGraph& g, OracleBounds bounds = {},
                                       OracleMode mode = OracleMode::Pruned) {
  const std::size_t n = g.vertex_count(), m = g.half_edge_count();
  if (n > bounds.max_vertices || m > bounds.max_half_edges) {
    throw OracleBoundsError("graph exceeds oracle bounds (" + std::to_string(n) + " vertices, " +
                            std::to_string(m) + " half-edges)");
  }
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<GraphMorphism> found;
  GraphMorphism cand;
  cand.nu.resize(n);
  std::iota(cand.nu.begin(), cand.nu.end(), 0);
  cand.eps.assign(m, kUnset);
  cand.lori.resize(n);
  cand.tori.resize(n);
  std::vector<bool> used(m, false);

  auto try_signs = [&] {
    const std::size_t combos = std::size_t{1} << (2 * n);
    for (std::size_t mask = 0; mask < combos; ++mask) {
      for (std::size_t v = 0; v < n; ++v) {
        cand.lori[v] = (mask >> (2 * v)) & 1 ? Sign::Minus : Sign::Plus;
        cand.tori[v] = (mask >> (2 * v + 1)) & 1 ? Sign::Minus : Sign::Plus;
      }
      if (check_morphism(g, g, cand).ok()) found.push_back(cand);
    }
  };

  std::function<void(std::size_t)> assign_eps = [&](std::size_t h) {
    if (h == m) {
      try_signs();
      return;
    }
    for (std::size_t image = 0; image < m; ++image) {
      if (used[image]) continue;
      if (mode == OracleMode::Pruned) {
        if (g.vertex_of(image) != cand.nu[g.vertex_of(h)]) continue;
        std::size_t partner = g.xi[h];
        if (partner == h && g.xi[image] != image) continue;
        if (partner < h && g.xi[image] != cand.eps[partner]) continue;
      }
      used[image] = true;
      cand.eps[h] = image;
      assign_eps(h + 1);
      cand.eps[h] = kUnset;
      used[image] = false;
    }
  };

  do {
    assign_eps(0);
  } while (std::next_permutation(cand.nu.begin(), cand.nu.end()));
  return make_autset(g, std::move(found));
}

// ---- group structure -----------------------------------------------------

inline std::size_t element_order(const GraphMorphism& m) {
  const GraphMorphism unit = [&] {
    GraphMorphism u;
    u.nu.resize(m.nu.size());
    std::iota(u.nu.begin(), u.nu.end(), 0);
    u.eps.resize(m.eps.size());
    std::iota(u.eps.begin(), u.eps.end(), 0);
    u.lori.assign(m.nu.size(), Sign::Plus);
    u.tori.assign(m.nu.size(), Sign::Plus);
    return u;
  }();
  GraphMorphism power = m;
  std::size_t k = 1;
  while (power != unit) {
    power = compose(m, power);
    ++k;
  }
  return k;
}

/// Subgroup generated by `gens` inside the automorphisms of `g`.
inline std::set<GraphMorphism> generated_subgroup(const StripedGraph& g, const std::vector<GraphMorphism>& gens) {
  std::set<GraphMorphism> group{identity_morphism(g)};
  std::vector<GraphMorphism> frontier{identity_morphism(g)};
  while (!frontier.empty()) {
    std::vector<GraphMorphism> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        auto y = compose(s, x);
        if (group.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return group;
}

/// Element-order multiset: order -> number of elements of that order.
using OrderProfile = std::map<std::size_t, std::size_t>;

struct SmallGroupEntry {
  const char* name;
  std::size_t order;
  bool abelian;
  OrderProfile profile;
};

/// Every group of order <= 15 and every abelian group of order 16. The
/// pair (abelian, profile) is unique within each order here; non-abelian
/// groups of order 16 are left unidentified.
inline const std::vector<SmallGroupEntry>& small_group_table() {
  static const std::vector<SmallGroupEntry> table = {
      {"trivial", 1, true, {{1, 1}}},
      {"Z2", 2, true, {{1, 1}, {2, 1}}},
      {"Z3", 3, true, {{1, 1}, {3, 2}}},
      {"Z4", 4, true, {{1, 1}, {2, 1}, {4, 2}}},
      {"Z2 x Z2", 4, true, {{1, 1}, {2, 3}}},
      {"Z5", 5, true, {{1, 1}, {5, 4}}},
      {"Z6", 6, true, {{1, 1}, {2, 1}, {3, 2}, {6, 2}}},
      {"S3", 6, false, {{1, 1}, {2, 3}, {3, 2}}},
      {"Z7", 7, true, {{1, 1}, {7, 6}}},
      {"Z8", 8, true, {{1, 1}, {2, 1}, {4, 2}, {8, 4}}},
      {"Z4 x Z2", 8, true, {{1, 1}, {2, 3}, {4, 4}}},
      {"Z2 x Z2 x Z2", 8, true, {{1, 1}, {2, 7}}},
      {"D4", 8, false, {{1, 1}, {2, 5}, {4, 2}}},
      {"Q8", 8, false, {{1, 1}, {2, 1}, {4, 6}}},
      {"Z9", 9, true, {{1, 1}, {3, 2}, {9, 6}}},
      {"Z3 x Z3", 9, true, {{1, 1}, {3, 8}}},
      {"Z10", 10, true, {{1, 1}, {2, 1}, {5, 4}, {10, 4}}},
      {"D5", 10, false, {{1, 1}, {2, 5}, {5, 4}}},
      {"Z11", 11, true, {{1, 1}, {11, 10}}},
      {"Z12", 12, true, {{1, 1}, {2, 1}, {3, 2}, {4, 2}, {6, 2}, {12, 4}}},
      {"Z6 x Z2", 12, true, {{1, 1}, {2, 3}, {3, 2}, {6, 6}}},
      {"A4", 12, false, {{1, 1}, {2, 3}, {3, 8}}},
      {"D6", 12, false, {{1, 1}, {2, 7}, {3, 2}, {6, 2}}},
      {"Dic3", 12, false, {{1, 1}, {2, 1}, {3, 2}, {4, 6}, {6, 2}}},
      {"Z13", 13, true, {{1, 1}, {13, 12}}},
      {"Z14", 14, true, {{1, 1}, {2, 1}, {7, 6}, {14, 6}}},
      {"D7", 14, false, {{1, 1}, {2, 7}, {7, 6}}},
      {"Z15", 15, true, {{1, 1}, {3, 2}, {5, 4}, {15, 8}}},
      {"Z16", 16, true, {{1, 1}, {2, 1}, {4, 2}, {8, 4}, {16, 8}}},
      {"Z8 x Z2", 16, true, {{1, 1}, {2, 3}, {4, 4}, {8, 8}}},
      {"Z4 x Z4", 16, true, {{1, 1}, {2, 3}, {4, 12}}},
      {"Z4 x Z2 x Z2", 16, true, {{1, 1}, {2, 7}, {4, 8}}},
      {"Z2 x Z2 x Z2 x Z2", 16, true, {{1, 1}, {2, 15}}},
  };
  return table;
}

inline std::string identify_small_group(std::size_t order, bool abelian, const OrderProfile& profile) {
  for (const auto& entry : small_group_table()) {
    if (entry.order == order && entry.abelian == abelian && entry.profile == profile) return entry.name;
  }
  return "order " + std::to_string(order) + ", unidentified";
}

enum class HomotopyType { Contractible, Circle };

inline const char* homotopy_note(HomotopyType t) { return t == HomotopyType::Circle ? "S^1" : "contractible"; }

struct GroupReport {
  std::size_t order = 0;
  std::vector<GraphMorphism> generators;
  bool abelian = true;
  std::string structure_name;
  OrderProfile order_profile;
  std::string homotopy_note;
};

namespace detail {

inline std::vector<GraphMorphism> smallest_generating_set(const AutSet& autos) {
  const auto& elems = autos.elements;
  const std::size_t n = elems.size();
  if (n <= 1) return {};
  // Exhaustive search by size while the number of subsets stays small.
  constexpr double kBudget = 20000;
  std::vector<std::size_t> pick;
  std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t slot, std::size_t from) -> bool {
    if (slot == pick.size()) {
      std::vector<GraphMorphism> gens;
      for (std::size_t i : pick) gens.push_back(elems[i]);
      return generated_subgroup(autos.graph, gens).size() == n;
    }
    for (std::size_t i = from; i < n; ++i) {
      pick[slot] = i;
      if (choose(slot + 1, i + 1)) return true;
    }
    return false;
  };
  for (std::size_t k = 1; k <= 4 && k < n; ++k) {
    double subsets = 1;
    for (std::size_t i = 0; i < k; ++i) subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (subsets > kBudget) break;
    pick.assign(k, 0);
    if (choose(0, 0)) {
      std::vector<GraphMorphism> gens;
      for (std::size_t i : pick) gens.push_back(elems[i]);
      return gens;
    }
  }
  // Greedy fallback.
  std::vector<GraphMorphism> gens;
  std::size_t reached = 1;
  for (const auto& e : elems) {
    if (reached == n) break;
    auto with = gens;
    with.push_back(e);
    std::size_t size = generated_subgroup(autos.graph, with).size();
    if (size > reached) {
      gens = std::move(with);
      reached = size;
    }
  }
  return gens;
}

}  // namespace detail

/// Requires a connected graph; the homotopy type comes from the reduction
/// outcome of the atlas the graph was built from.
inline GroupReport group_report(const AutSet& autos, HomotopyType homotopy) {
  if (!is_connected(autos.graph)) {
    throw std::invalid_argument("group report requires a connected graph; report components separately");
  }
  GroupReport r;
  r.order = autos.order();
  for (std::size_t i = 0; i < autos.elements.size() && r.abelian; ++i) {
    for (std::size_t j = i + 1; j < autos.elements.size(); ++j) {
      if (compose(autos.elements[i], autos.elements[j]) != compose(autos.elements[j], autos.elements[i])) {
        r.abelian = false;
        break;
      }
    }
  }
  for (const auto& e : autos.elements) ++r.order_profile[element_order(e)];
  r.structure_name = r.order <= 16 ? identify_small_group(r.order, r.abelian, r.order_profile)
                                   : "order " + std::to_string(r.order) + ", unidentified";
  r.generators = detail::smallest_generating_set(autos);
  r.homotopy_note = homotopy_note(homotopy);
  return r;
}

/// table[i][j] = index of elements[i] * elements[j].
inline std::vector<std::vector<std::size_t>> cayley_table(const AutSet& autos) {
  std::map<GraphMorphism, std::size_t> index;
  for (std::size_t i = 0; i < autos.elements.size(); ++i) index[autos.elements[i]] = i;
  std::vector<std::vector<std::size_t>> table(autos.order(), std::vector<std::size_t>(autos.order()));
  for (std::size_t i = 0; i < autos.order(); ++i) {
    for (std::size_t j = 0; j < autos.order(); ++j) {
      table[i][j] = index.at(compose(autos.elements[i], autos.elements[j]));
    }
  }
  return table;
}

inline nlohmann::json to_json(const AutSet& autos) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& m : autos.elements) elements.push_back(to_json(autos.graph, autos.graph, m));
  return {{"order", autos.order()}, {"elements", elements}};
}

inline nlohmann::json to_json(const GroupReport& r, const StripedGraph& g) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& m : r.generators) gens.push_back(to_json(g, g, m));
  nlohmann::json profile = nlohmann::json::object();
  for (const auto& [ord, count] : r.order_profile) profile[std::to_string(ord)] = count;
  return {{"order", r.order},
          {"abelian", r.abelian},
          {"structure_name", r.structure_name},
          {"element_orders", profile},
          {"generators", gens},
          {"homotopy_note", r.homotopy_note}};
}

}  // namespace striped
