#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hdmole {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  std::string element;   // capitalized symbol ("C", "Cl", "Se", ...)
  bool aromatic = false;
};

struct Bond {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  BondOrder order = BondOrder::kSingle;
};

/// Molecular graph. Bond endpoints are valid atom indices, no self-loops,
/// no duplicate bonds.
struct MolGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
};

/// Parses the SMILES grammar subset: organic-subset atoms and their aromatic
/// lowercase forms, bracket atoms (element kept, charge/H-count/stereo
/// consumed and dropped), bonds - = # : and implicit, branches, ring closures
/// (digit and %nn). Dot-separated inputs keep the component with the most
/// atoms. Kekule 6-rings with alternating single/double bonds are flagged
/// aromatic so they key identically to their lowercase forms.
///
/// Throws MalformedSmilesError (with byte offset) on unclosed brackets,
/// branches, or ring closures.
MolGraph parse_smiles(std::string_view smiles);

/// Canonical textual key for the molecule's Bemis-Murcko scaffold (ring
/// systems plus linkers); empty string for acyclic molecules. Two molecules
/// with graph-isomorphic scaffolds map to the same key.
using ScaffoldKey = std::string;

ScaffoldKey murcko_scaffold(const MolGraph& g);

}  // namespace hdmole
