// SPDX-License-Identifier: Apache-2.0
#include "molgp/molgraph.hpp"

#include <algorithm>
#include <set>
#include <stack>
#include <stdexcept>
#include <string>

namespace molgp {

namespace {

// Iterative bridge finding (Tarjan low-link). Marks every non-bridge bond as
// a ring bond; any endpoint of a ring bond is a ring atom.
void find_ring_bonds(const std::vector<std::vector<std::pair<int, int>>>& adjacency,
                     int atom_count,
                     std::vector<bool>& bond_in_ring,
                     int& component_count) {
  std::vector<int> disc(atom_count, -1);
  std::vector<int> low(atom_count, 0);
  int timer = 0;
  component_count = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t edge_pos;
  };

  for (int root = 0; root < atom_count; ++root) {
    if (disc[root] != -1) {
      continue;
    }
    ++component_count;
    std::stack<Frame> stack;
    stack.push({root, -1, 0});
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& frame = stack.top();
      if (frame.edge_pos < adjacency[frame.atom].size()) {
        const auto [next_atom, via_bond] = adjacency[frame.atom][frame.edge_pos++];
        if (via_bond == frame.parent_bond) {
          continue;
        }
        if (disc[next_atom] == -1) {
          disc[next_atom] = low[next_atom] = timer++;
          stack.push({next_atom, via_bond, 0});
        } else {
          low[frame.atom] = std::min(low[frame.atom], disc[next_atom]);
          bond_in_ring[via_bond] = true;  // back edge closes a cycle
        }
      } else {
        const Frame done = frame;
        stack.pop();
        if (!stack.empty()) {
          Frame& up = stack.top();
          low[up.atom] = std::min(low[up.atom], low[done.atom]);
          if (low[done.atom] <= disc[up.atom]) {
            bond_in_ring[done.parent_bond] = true;
          }
        }
      }
    }
  }

}

}  // namespace

MolGraph::MolGraph(std::vector<AtomRecord> atoms, std::vector<BondRecord> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = static_cast<int>(atoms_.size());
  std::set<std::pair<int, int>> seen;
  for (auto& bond : bonds_) {
    if (bond.a > bond.b) {
      std::swap(bond.a, bond.b);
    }
    if (bond.a == bond.b) {
      throw std::invalid_argument("bond endpoints must be distinct");
    }
    if (bond.a < 0 || bond.b >= n) {
      throw std::invalid_argument("bond endpoint out of range");
    }
    if (!seen.insert({bond.a, bond.b}).second) {
      throw std::invalid_argument("duplicate bond between atoms " + std::to_string(bond.a) +
                                  " and " + std::to_string(bond.b));
    }
  }

  adjacency_.assign(n, {});
  for (int bi = 0; bi < static_cast<int>(bonds_.size()); ++bi) {
    adjacency_[bonds_[bi].a].push_back({bonds_[bi].b, bi});
    adjacency_[bonds_[bi].b].push_back({bonds_[bi].a, bi});
  }

  atom_in_ring_.assign(n, false);
  bond_in_ring_.assign(bonds_.size(), false);
  find_ring_bonds(adjacency_, n, bond_in_ring_, component_count_);
  for (std::size_t bi = 0; bi < bonds_.size(); ++bi) {
    if (bond_in_ring_[bi]) {
      atom_in_ring_[bonds_[bi].a] = true;
      atom_in_ring_[bonds_[bi].b] = true;
    }
  }
}

}  // namespace molgp
