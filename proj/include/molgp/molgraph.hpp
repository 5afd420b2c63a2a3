// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace molgp {

// Bond-order codes are fixed (they feed the identifier hashes):
// single=1, double=2, triple=3, aromatic=4.
enum class BondOrder : int {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct AtomRecord {
  int atomic_number = 0;
  int formal_charge = 0;
  // Attached hydrogens, from a bracket spec or implicit valence filling.
  // Hydrogens are never graph nodes.
  int h_count = 0;
  bool is_aromatic = false;
  std::optional<int> isotope;
};

struct BondRecord {
  // Endpoint atom indices, normalised so a < b.
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;
};

// Immutable heavy-atom molecular graph. Construction validates that bond
// endpoints are distinct and in range and that no bond is duplicated, then
// precomputes adjacency, connected components and ring membership (a bond is
// in a ring iff it is not a bridge).
class MolGraph {
 public:
  MolGraph(std::vector<AtomRecord> atoms, std::vector<BondRecord> bonds);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  int component_count() const { return component_count_; }

  const AtomRecord& atom(int i) const { return atoms_[i]; }
  const BondRecord& bond(int i) const { return bonds_[i]; }
  const std::vector<AtomRecord>& atoms() const { return atoms_; }
  const std::vector<BondRecord>& bonds() const { return bonds_; }

  // (neighbour atom index, bond index) pairs.
  const std::vector<std::pair<int, int>>& neighbors(int atom) const { return adjacency_[atom]; }
  int degree(int atom) const { return static_cast<int>(adjacency_[atom].size()); }

  bool atom_in_ring(int atom) const { return atom_in_ring_[atom]; }
  bool bond_in_ring(int bond) const { return bond_in_ring_[bond]; }

 private:
  std::vector<AtomRecord> atoms_;
  std::vector<BondRecord> bonds_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::vector<bool> atom_in_ring_;
  std::vector<bool> bond_in_ring_;
  int component_count_ = 0;
};

}  // namespace molgp
