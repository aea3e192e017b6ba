#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hdmole/smiles.hpp"

namespace hdmole {

namespace {

struct EdgeList {
  // adjacency as (neighbor, bond order)
  std::vector<std::vector<std::pair<std::uint32_t, std::uint8_t>>> adj;
  std::vector<Atom> atoms;

  std::size_t size() const { return atoms.size(); }
};

/// Morgan-style partition refinement: labels start from (element, aromatic,
/// degree) and are resharpened by sorted neighborhood signatures until the
/// partition stabilizes. Exact multiset comparison, no hashing.
std::vector<std::uint32_t> refine(const EdgeList& g,
                                  std::vector<std::uint32_t> labels) {
  const std::size_t n = g.size();
  for (;;) {
    using Sig = std::pair<std::uint32_t,
                          std::vector<std::pair<std::uint8_t, std::uint32_t>>>;
    std::vector<Sig> sigs(n);
    for (std::size_t v = 0; v < n; ++v) {
      auto& neigh = sigs[v].second;
      sigs[v].first = labels[v];
      neigh.reserve(g.adj[v].size());
      for (const auto& [w, order] : g.adj[v]) {
        neigh.emplace_back(order, labels[w]);
      }
      std::sort(neigh.begin(), neigh.end());
    }
    std::map<Sig, std::uint32_t> ranks;
    for (const auto& s : sigs) ranks.emplace(s, 0);
    std::uint32_t next = 0;
    for (auto& [sig, rank] : ranks) rank = next++;
    std::vector<std::uint32_t> fresh(n);
    for (std::size_t v = 0; v < n; ++v) fresh[v] = ranks[sigs[v]];
    if (fresh == labels) return labels;
    labels = std::move(fresh);
  }
}

std::vector<std::uint32_t> initial_labels(const EdgeList& g) {
  const std::size_t n = g.size();
  using Init = std::tuple<std::string, bool, std::size_t>;
  std::vector<Init> init(n);
  for (std::size_t v = 0; v < n; ++v) {
    init[v] = {g.atoms[v].element, g.atoms[v].aromatic, g.adj[v].size()};
  }
  std::map<Init, std::uint32_t> ranks;
  for (const auto& i : init) ranks.emplace(i, 0);
  std::uint32_t next = 0;
  for (auto& [key, rank] : ranks) rank = next++;
  std::vector<std::uint32_t> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = ranks[init[v]];
  return labels;
}

bool is_discrete(const std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> sorted(labels);
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

/// Serializes the graph under a discrete labeling: atoms by label rank, then
/// sorted edge triples. This string is the candidate canonical key.
std::string serialize(const EdgeList& g,
                      const std::vector<std::uint32_t>& labels) {
  const std::size_t n = g.size();
  std::vector<std::uint32_t> rank(n);
  for (std::size_t v = 0; v < n; ++v) rank[v] = labels[v];
  std::vector<std::uint32_t> order(n);
  for (std::size_t v = 0; v < n; ++v) order[rank[v]] = static_cast<std::uint32_t>(v);

  std::string out;
  for (std::size_t r = 0; r < n; ++r) {
    const Atom& a = g.atoms[order[r]];
    if (r) out.push_back(',');
    out += a.element;
    if (a.aromatic) out.push_back('\'');
  }
  out.push_back('|');
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint8_t>> edges;
  for (std::uint32_t v = 0; v < n; ++v) {
    for (const auto& [w, order_] : g.adj[v]) {
      if (rank[v] < rank[w]) edges.emplace_back(rank[v], rank[w], order_);
    }
  }
  std::sort(edges.begin(), edges.end());
  bool first = true;
  for (const auto& [a, b, o] : edges) {
    if (!first) out.push_back(',');
    first = false;
    out += std::to_string(a);
    out.push_back('-');
    out += std::to_string(b);
    out.push_back(':');
    out += std::to_string(static_cast<unsigned>(o));
  }
  return out;
}

/// Individualization-refinement: whenever the refined partition still has a
/// tied class, split each member out in turn and keep the lexicographically
/// smallest serialization. Exact on automorphic graphs (benzene and friends).
std::string canonical_key(const EdgeList& g, std::vector<std::uint32_t> labels) {
  labels = refine(g, labels);
  if (is_discrete(labels)) return serialize(g, labels);

  std::uint32_t target = 0;
  bool found = false;
  std::vector<std::size_t> class_size(g.size(), 0);
  for (const auto l : labels) ++class_size[l];
  for (std::uint32_t l = 0; l < class_size.size() && !found; ++l) {
    if (class_size[l] > 1) {
      target = l;
      found = true;
    }
  }

  std::string best;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (labels[v] != target) continue;
    auto split = labels;
    split[v] = static_cast<std::uint32_t>(g.size());  // force into its own cell
    const std::string candidate = canonical_key(g, std::move(split));
    if (best.empty() || candidate < best) best = candidate;
  }
  return best;
}

}  // namespace

ScaffoldKey murcko_scaffold(const MolGraph& g) {
  const std::size_t n = g.atoms.size();
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> degree(n, 0);
  for (const auto& b : g.bonds) {
    ++degree[b.a];
    ++degree[b.b];
  }
  std::vector<std::vector<std::uint32_t>> neighbors(n);
  for (const auto& b : g.bonds) {
    neighbors[b.a].push_back(b.b);
    neighbors[b.b].push_back(b.a);
  }

  // Iteratively delete terminal atoms; ring atoms never drop below degree 2,
  // so what survives is exactly the ring systems plus their linkers.
  std::vector<std::uint32_t> worklist;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (degree[v] <= 1) worklist.push_back(v);
  }
  while (!worklist.empty()) {
    const auto v = worklist.back();
    worklist.pop_back();
    if (!alive[v]) continue;
    alive[v] = false;
    for (const auto w : neighbors[v]) {
      if (alive[w] && --degree[w] <= 1) worklist.push_back(w);
    }
  }

  std::vector<std::uint32_t> remap(n, 0);
  EdgeList scaffold;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (alive[v]) {
      remap[v] = static_cast<std::uint32_t>(scaffold.atoms.size());
      scaffold.atoms.push_back(g.atoms[v]);
    }
  }
  if (scaffold.atoms.empty()) return {};
  scaffold.adj.resize(scaffold.atoms.size());
  for (const auto& b : g.bonds) {
    if (alive[b.a] && alive[b.b]) {
      const auto order = static_cast<std::uint8_t>(b.order);
      scaffold.adj[remap[b.a]].push_back({remap[b.b], order});
      scaffold.adj[remap[b.b]].push_back({remap[b.a], order});
    }
  }
  return canonical_key(scaffold, initial_labels(scaffold));
}

}  // namespace hdmole
