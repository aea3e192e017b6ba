#include "hdmole/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <unordered_map>

#include "hdmole/error.hpp"

namespace hdmole {

namespace {

bool is_organic_upper(char c) {
  switch (c) {
    case 'B': case 'C': case 'N': case 'O':
    case 'P': case 'S': case 'F': case 'I':
      return true;
    default:
      return false;
  }
}

bool is_aromatic_lower(char c) {
  switch (c) {
    case 'b': case 'c': case 'n': case 'o': case 'p': case 's':
      return true;
    default:
      return false;
  }
}

std::string capitalize(std::string sym) {
  if (!sym.empty()) sym[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sym[0])));
  return sym;
}

struct RingOpen {
  std::uint32_t atom;
  std::optional<BondOrder> bond;
  std::size_t offset;
};

struct Parser {
  std::string_view s;
  std::size_t i = 0;
  MolGraph g;
  std::int64_t prev = -1;
  std::optional<BondOrder> pending;
  std::vector<std::int64_t> branch_stack;
  std::unordered_map<unsigned, RingOpen> rings;

  void add_bond(std::uint32_t a, std::uint32_t b, BondOrder order,
                std::size_t offset) {
    if (a == b) throw MalformedSmilesError("ring bond forms a self-loop", offset);
    for (const auto& bond : g.bonds) {
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
        throw MalformedSmilesError("duplicate bond between atoms", offset);
      }
    }
    g.bonds.push_back({a, b, order});
  }

  BondOrder implicit_order(std::uint32_t a, std::uint32_t b) const {
    return (g.atoms[a].aromatic && g.atoms[b].aromatic) ? BondOrder::kAromatic
                                                        : BondOrder::kSingle;
  }

  void finish_atom(Atom atom, std::size_t offset) {
    g.atoms.push_back(std::move(atom));
    const auto idx = static_cast<std::uint32_t>(g.atoms.size() - 1);
    if (prev >= 0) {
      const auto p = static_cast<std::uint32_t>(prev);
      add_bond(p, idx, pending.value_or(implicit_order(p, idx)), offset);
    }
    pending.reset();
    prev = idx;
  }

  void ring_closure(unsigned number, std::size_t offset) {
    if (prev < 0) {
      throw MalformedSmilesError("ring closure before any atom", offset);
    }
    const auto here = static_cast<std::uint32_t>(prev);
    const auto it = rings.find(number);
    if (it == rings.end()) {
      rings.emplace(number, RingOpen{here, pending, offset});
    } else {
      const RingOpen open = it->second;
      rings.erase(it);
      const BondOrder order = open.bond.value_or(
          pending.value_or(implicit_order(open.atom, here)));
      add_bond(open.atom, here, order, offset);
    }
    pending.reset();
  }

  Atom parse_bracket_atom() {
    const std::size_t start = i;  // at '['
    const std::size_t close = s.find(']', i);
    if (close == std::string_view::npos) {
      throw MalformedSmilesError("unclosed bracket atom", start);
    }
    std::size_t p = i + 1;
    while (p < close && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;  // isotope
    if (p >= close || (!std::isalpha(static_cast<unsigned char>(s[p])) && s[p] != '*')) {
      throw MalformedSmilesError("bracket atom without element symbol", start);
    }
    Atom atom;
    if (s[p] == '*') {
      atom.element = "*";
      atom.aromatic = false;
    } else {
      const bool lower = std::islower(static_cast<unsigned char>(s[p])) != 0;
      std::string sym(1, s[p]);
      // Greedy two-letter symbol; a following lowercase letter extends it.
      if (p + 1 < close && std::islower(static_cast<unsigned char>(s[p + 1]))) {
        sym.push_back(s[p + 1]);
      }
      atom.element = capitalize(sym);
      atom.aromatic = lower;
    }
    // Charge, H-count, stereo and atom maps are consumed and dropped.
    i = close + 1;
    return atom;
  }

  MolGraph run() {
    while (i < s.size()) {
      const char c = s[i];
      if (c == ' ' || c == '\t') break;  // SMILES ends at whitespace
      if (c == '[') {
        const std::size_t offset = i;
        Atom atom = parse_bracket_atom();
        finish_atom(std::move(atom), offset);
      } else if (is_organic_upper(c)) {
        std::string sym(1, c);
        if ((c == 'C' && i + 1 < s.size() && s[i + 1] == 'l') ||
            (c == 'B' && i + 1 < s.size() && s[i + 1] == 'r')) {
          sym.push_back(s[i + 1]);
        }
        const std::size_t offset = i;
        i += sym.size();
        finish_atom({sym, false}, offset);
      } else if (is_aromatic_lower(c)) {
        const std::size_t offset = i;
        ++i;
        finish_atom({capitalize(std::string(1, c)), true}, offset);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_closure(static_cast<unsigned>(c - '0'), i);
        ++i;
      } else if (c == '%') {
        if (i + 2 >= s.size() ||
            !std::isdigit(static_cast<unsigned char>(s[i + 1])) ||
            !std::isdigit(static_cast<unsigned char>(s[i + 2]))) {
          throw MalformedSmilesError("'%' ring closure needs two digits", i);
        }
        ring_closure(static_cast<unsigned>((s[i + 1] - '0') * 10 + (s[i + 2] - '0')), i);
        i += 3;
      } else if (c == '-') {
        pending = BondOrder::kSingle;
        ++i;
      } else if (c == '=') {
        pending = BondOrder::kDouble;
        ++i;
      } else if (c == '#') {
        pending = BondOrder::kTriple;
        ++i;
      } else if (c == ':') {
        pending = BondOrder::kAromatic;
        ++i;
      } else if (c == '/' || c == '\\') {
        pending = BondOrder::kSingle;  // stereo direction discarded
        ++i;
      } else if (c == '(') {
        if (prev < 0) throw MalformedSmilesError("branch before any atom", i);
        branch_stack.push_back(prev);
        ++i;
      } else if (c == ')') {
        if (branch_stack.empty()) {
          throw MalformedSmilesError("unmatched ')'", i);
        }
        prev = branch_stack.back();
        branch_stack.pop_back();
        ++i;
      } else if (c == '.') {
        prev = -1;
        pending.reset();
        ++i;
      } else {
        throw MalformedSmilesError(std::string("unexpected character '") + c + "'", i);
      }
    }
    if (!branch_stack.empty()) {
      throw MalformedSmilesError("unclosed branch", s.size());
    }
    if (!rings.empty()) {
      throw MalformedSmilesError("unclosed ring closure",
                                 rings.begin()->second.offset);
    }
    if (g.atoms.empty()) {
      throw MalformedSmilesError("no atoms", 0);
    }
    return std::move(g);
  }
};

std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adjacency(
    const MolGraph& g) {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(
      g.atoms.size());
  for (std::uint32_t bi = 0; bi < g.bonds.size(); ++bi) {
    adj[g.bonds[bi].a].push_back({g.bonds[bi].b, bi});
    adj[g.bonds[bi].b].push_back({g.bonds[bi].a, bi});
  }
  return adj;
}

/// Keep only the connected component with the most atoms (ties: the one
/// containing the lowest original atom index).
MolGraph largest_component(MolGraph g) {
  if (g.atoms.empty()) return g;
  const auto adj = adjacency(g);
  std::vector<std::int32_t> comp(g.atoms.size(), -1);
  std::int32_t ncomp = 0;
  for (std::uint32_t v = 0; v < g.atoms.size(); ++v) {
    if (comp[v] >= 0) continue;
    std::vector<std::uint32_t> stack{v};
    comp[v] = ncomp;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& [w, bi] : adj[u]) {
        if (comp[w] < 0) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
      }
    }
    ++ncomp;
  }
  if (ncomp == 1) return g;
  std::vector<std::size_t> sizes(ncomp, 0);
  for (const auto c : comp) ++sizes[static_cast<std::size_t>(c)];
  const auto best = static_cast<std::int32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  MolGraph out;
  std::vector<std::uint32_t> remap(g.atoms.size(), 0);
  for (std::uint32_t v = 0; v < g.atoms.size(); ++v) {
    if (comp[v] == best) {
      remap[v] = static_cast<std::uint32_t>(out.atoms.size());
      out.atoms.push_back(std::move(g.atoms[v]));
    }
  }
  for (const auto& b : g.bonds) {
    if (comp[b.a] == best) {
      out.bonds.push_back({remap[b.a], remap[b.b], b.order});
    }
  }
  return out;
}

/// Flags Kekule aromatic rings: every simple 6-cycle whose bonds alternate
/// single/double becomes an aromatic ring, so C1=CC=CC=C1 keys the same as
/// c1ccccc1. Lowercase-written rings are already flagged by the parser.
void perceive_kekule_aromatics(MolGraph& g) {
  const auto adj = adjacency(g);
  const std::size_t n = g.atoms.size();
  if (n < 6) return;

  std::vector<std::uint32_t> path;
  std::vector<std::uint32_t> path_bonds;
  std::vector<bool> on_path(n, false);

  auto try_mark = [&](std::uint32_t closing_bond) {
    std::vector<std::uint32_t> cycle_bonds = path_bonds;
    cycle_bonds.push_back(closing_bond);
    if (cycle_bonds.size() != 6) return;
    bool alternates = true;
    for (std::size_t k = 0; k < 6 && alternates; ++k) {
      const BondOrder a = g.bonds[cycle_bonds[k]].order;
      const BondOrder b = g.bonds[cycle_bonds[(k + 1) % 6]].order;
      const bool ok = (a == BondOrder::kSingle && b == BondOrder::kDouble) ||
                      (a == BondOrder::kDouble && b == BondOrder::kSingle);
      if (!ok) alternates = false;
    }
    if (!alternates) return;
    for (const auto bi : cycle_bonds) g.bonds[bi].order = BondOrder::kAromatic;
    for (const auto v : path) g.atoms[v].aromatic = true;
  };

  // Enumerate simple cycles of length 6 anchored at their minimum atom index;
  // direction deduplicated by requiring path[1] < path.back().
  std::function<void(std::uint32_t, std::uint32_t)> dfs =
      [&](std::uint32_t root, std::uint32_t v) {
        for (const auto& [w, bi] : adj[v]) {
          if (w == root && path.size() == 6) {
            if (path[1] < path.back()) try_mark(bi);
          } else if (w > root && !on_path[w] && path.size() < 6) {
            path.push_back(w);
            path_bonds.push_back(bi);
            on_path[w] = true;
            dfs(root, w);
            on_path[w] = false;
            path_bonds.pop_back();
            path.pop_back();
          }
        }
      };

  for (std::uint32_t root = 0; root < n; ++root) {
    path.assign(1, root);
    path_bonds.clear();
    std::fill(on_path.begin(), on_path.end(), false);
    on_path[root] = true;
    dfs(root, root);
  }
}

}  // namespace

MolGraph parse_smiles(std::string_view smiles) {
  if (smiles.empty()) throw MalformedSmilesError("empty SMILES", 0);
  Parser parser;
  parser.s = smiles;
  MolGraph g = parser.run();
  g = largest_component(std::move(g));
  perceive_kekule_aromatics(g);
  return g;
}

}  // namespace hdmole
