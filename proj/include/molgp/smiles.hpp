// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "molgp/molgraph.hpp"

namespace molgp {

class SmilesError : public std::runtime_error {
 public:
  SmilesError(std::size_t position, const std::string& message)
      : std::runtime_error("SMILES error at position " + std::to_string(position) + ": " +
                           message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Parses a practical SMILES subset into a heavy-atom graph:
// organic-subset bare atoms (B C N O P S F Cl Br I), aromatic lowercase
// (b c n o p s, plus se/as in brackets), bracket atoms with
// isotope/element/H-count/charge, bond symbols - = # : / \, branches,
// ring closures (digits and %nn) and dot-separated components.
// Stereo markers are accepted and discarded. Hydrogens become atom
// attributes (bracket count, or implicit standard-valence filling for bare
// atoms), never graph nodes.
MolGraph parse_smiles(std::string_view text);

// Radius-0 Morgan identifiers: one FNV-1a hash per atom over the tuple
// (atomic number, heavy-neighbour count, attached H, formal charge,
// aromaticity, ring membership). Equal tuples hash equal.
std::vector<std::uint64_t> initial_atom_invariants(const MolGraph& mol);

}  // namespace molgp
