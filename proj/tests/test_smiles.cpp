#include "hdmole/smiles.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "hdmole/error.hpp"

using namespace hdmole;

namespace {

std::size_t count_order(const MolGraph& g, BondOrder order) {
  return static_cast<std::size_t>(
      std::count_if(g.bonds.begin(), g.bonds.end(),
                    [order](const Bond& b) { return b.order == order; }));
}

}  // namespace

TEST_CASE("linear chain") {
  const MolGraph g = parse_smiles("CCO");
  CHECK(g.atoms.size() == 3);
  CHECK(g.bonds.size() == 2);
  CHECK(count_order(g, BondOrder::kSingle) == 2);
}

TEST_CASE("cyclopropane ring closure pairing") {
  const MolGraph g = parse_smiles("C1CC1");
  CHECK(g.atoms.size() == 3);
  CHECK(g.bonds.size() == 3);
}

TEST_CASE("malformed inputs carry a byte offset") {
  CHECK_THROWS_AS(parse_smiles("C("), MalformedSmilesError);
  CHECK_THROWS_AS(parse_smiles("C1CC"), MalformedSmilesError);
  CHECK_THROWS_AS(parse_smiles("C[NH"), MalformedSmilesError);
  CHECK_THROWS_AS(parse_smiles("CC)"), MalformedSmilesError);
  CHECK_THROWS_AS(parse_smiles(""), MalformedSmilesError);
  CHECK_THROWS_AS(parse_smiles("C$C"), MalformedSmilesError);
  try {
    parse_smiles("CC[Zn");
  } catch (const MalformedSmilesError& e) {
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("branches, bonds, and bracket atoms") {
  const MolGraph g = parse_smiles("CC(=O)[O-]");
  CHECK(g.atoms.size() == 4);
  CHECK(g.bonds.size() == 3);
  CHECK(count_order(g, BondOrder::kDouble) == 1);
  CHECK(g.atoms[3].element == "O");

  const MolGraph h = parse_smiles("[NH4+]");
  CHECK(h.atoms.size() == 1);
  CHECK(h.atoms[0].element == "N");
  CHECK_FALSE(h.atoms[0].aromatic);

  const MolGraph se = parse_smiles("C[Se]C");
  CHECK(se.atoms[1].element == "Se");
}

TEST_CASE("aromatic lowercase ring") {
  const MolGraph g = parse_smiles("c1ccccc1");
  CHECK(g.atoms.size() == 6);
  CHECK(g.bonds.size() == 6);
  CHECK(count_order(g, BondOrder::kAromatic) == 6);
  for (const auto& a : g.atoms) CHECK(a.aromatic);
}

TEST_CASE("Kekule benzene is perceived aromatic") {
  const MolGraph g = parse_smiles("C1=CC=CC=C1");
  CHECK(count_order(g, BondOrder::kAromatic) == 6);
  for (const auto& a : g.atoms) CHECK(a.aromatic);
}

TEST_CASE("dot components keep the largest") {
  const MolGraph g = parse_smiles("[Na+].CCO");
  CHECK(g.atoms.size() == 3);
  const MolGraph h = parse_smiles("CCO.[Na+]");
  CHECK(h.atoms.size() == 3);
}

TEST_CASE("stereo markers are consumed") {
  const MolGraph g = parse_smiles("C/C=C\\C");
  CHECK(g.atoms.size() == 4);
  CHECK(count_order(g, BondOrder::kDouble) == 1);
  const MolGraph h = parse_smiles("C[C@@H](N)O");
  CHECK(h.atoms.size() == 4);
}

TEST_CASE("percent ring closures") {
  const MolGraph g = parse_smiles("C%12CC%12");
  CHECK(g.atoms.size() == 3);
  CHECK(g.bonds.size() == 3);
}

TEST_CASE("duplicate ring bonds and self-loops are rejected") {
  CHECK_THROWS_AS(parse_smiles("C11"), MalformedSmilesError);
  CHECK_THROWS_AS(parse_smiles("C12CC12C"), MalformedSmilesError);
}

TEST_CASE("acyclic molecules have an empty scaffold key") {
  CHECK(murcko_scaffold(parse_smiles("CCO")).empty());
  CHECK(murcko_scaffold(parse_smiles("CC(C)CC(=O)O")).empty());
  CHECK(murcko_scaffold(parse_smiles("C")).empty());
}

TEST_CASE("toluene and ethylbenzene share a scaffold key") {
  const ScaffoldKey toluene = murcko_scaffold(parse_smiles("Cc1ccccc1"));
  const ScaffoldKey ethylbenzene = murcko_scaffold(parse_smiles("CCc1ccccc1"));
  CHECK_FALSE(toluene.empty());
  CHECK(toluene == ethylbenzene);
}

TEST_CASE("aromatic and Kekule benzene key identically") {
  CHECK(murcko_scaffold(parse_smiles("c1ccccc1")) ==
        murcko_scaffold(parse_smiles("C1=CC=CC=C1")));
}

TEST_CASE("different ring systems key differently") {
  const auto benzene = murcko_scaffold(parse_smiles("c1ccccc1"));
  const auto cyclohexane = murcko_scaffold(parse_smiles("C1CCCCC1"));
  const auto pyridine = murcko_scaffold(parse_smiles("c1ccncc1"));
  const auto naphthalene = murcko_scaffold(parse_smiles("c1ccc2ccccc2c1"));
  const std::set<ScaffoldKey> keys{benzene, cyclohexane, pyridine, naphthalene};
  CHECK(keys.size() == 4);
}

TEST_CASE("scaffold keeps linkers between rings") {
  // biphenylmethane: two rings joined by one carbon; the linker survives.
  const auto bridged = murcko_scaffold(parse_smiles("c1ccccc1Cc1ccccc1"));
  const auto biphenyl = murcko_scaffold(parse_smiles("c1ccccc1-c1ccccc1"));
  CHECK_FALSE(bridged.empty());
  CHECK(bridged != biphenyl);
}

TEST_CASE("scaffold pruning reaches a fixpoint with no stray terminals") {
  // Decorations of the same core all collapse to the same key.
  const std::vector<std::string> decorated{
      "c1ccccc1",      "Cc1ccccc1",        "CCCc1ccccc1",
      "OC(=O)c1ccccc1", "NCc1ccccc1",      "FC(F)(F)c1ccccc1",
  };
  const auto base = murcko_scaffold(parse_smiles(decorated[0]));
  for (const auto& s : decorated) {
    CAPTURE(s);
    CHECK(murcko_scaffold(parse_smiles(s)) == base);
  }
}

TEST_CASE("key stability under equivalent rewritings") {
  // Pairs of different-but-equivalent SMILES; keys must match within pair.
  const std::vector<std::pair<std::string, std::string>> fixture{
      {"c1ccccc1", "c1ccccc1"},
      {"c1ccccc1C", "Cc1ccccc1"},
      {"C1CCCCC1", "C1CCCCC1C"},
      {"c1ccc(cc1)O", "Oc1ccccc1"},
      {"c1ccncc1", "n1ccccc1"},
      {"C1=CC=CC=C1O", "Oc1ccccc1"},
      {"c1ccc2ccccc2c1", "c1ccc2c(c1)cccc2"},
      {"C1CC1CC2CC2", "C2CC2CC1CC1"},
      {"c1ccsc1", "s1cccc1"},
      {"O=C1CCCCC1", "C1CCCCC1=O"},
      {"c1ccc2[nH]ccc2c1", "c1ccc2c(c1)cc[nH]2"},
      {"C1CN(CCO1)C", "CN1CCOCC1"},
      {"c1ccc(cc1)-c1ccccc1", "c1ccc(-c2ccccc2)cc1"},
      {"C(c1ccccc1)c1ccccc1", "c1ccccc1Cc1ccccc1"},
      {"O1CCOCC1", "C1COCCO1"},
  };
  for (const auto& [left, right] : fixture) {
    CAPTURE(left);
    CAPTURE(right);
    CHECK(murcko_scaffold(parse_smiles(left)) ==
          murcko_scaffold(parse_smiles(right)));
  }
}

TEST_CASE("scaffold of a scaffold is itself") {
  // A decorated molecule keys to its bare core, and an all-ring molecule
  // (its own scaffold) keys to itself under relabeling.
  const auto key1 = murcko_scaffold(parse_smiles("CCc1ccc(CN)cc1"));
  const auto key2 = murcko_scaffold(parse_smiles("c1ccccc1"));
  CHECK(key1 == key2);
  const auto decalin = murcko_scaffold(parse_smiles("C1CCC2CCCCC2C1"));
  const auto relabeled = murcko_scaffold(parse_smiles("C2CCC1CCCCC1C2"));
  CHECK(decalin == relabeled);
}
