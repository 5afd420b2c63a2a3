// SPDX-License-Identifier: Apache-2.0
#include "molgp/fingerprint.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "molgp/hashing.hpp"
#include "molgp/smiles.hpp"

namespace molgp {

SparseFingerprint::SparseFingerprint(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].second == 0) {
      throw std::invalid_argument("fingerprint counts must be positive");
    }
    if (i > 0 && entries_[i].first == entries_[i - 1].first) {
      throw std::invalid_argument("duplicate fingerprint identifier");
    }
    total_count_ += entries_[i].second;
  }
}

std::uint32_t SparseFingerprint::count_of(std::uint64_t id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, std::uint64_t v) { return e.first < v; });
  if (it != entries_.end() && it->first == id) {
    return it->second;
  }
  return 0;
}

std::uint64_t DenseFingerprint::total_count() const {
  std::uint64_t total = 0;
  for (std::uint32_t c : counts) {
    total += c;
  }
  return total;
}

namespace {

// Covered-bond bitmask, one word per 64 bonds.
using BondMask = std::vector<std::uint64_t>;

void set_bit(BondMask& mask, int bit) { mask[bit / 64] |= (1ULL << (bit % 64)); }

void or_into(BondMask& mask, const BondMask& other) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] |= other[i];
  }
}

}  // namespace

SparseFingerprint morgan_sparse(const MolGraph& mol, int radius) {
  if (radius < 0 || radius > 10) {
    throw std::invalid_argument("radius must be in [0, 10]");
  }
  const int n = mol.atom_count();
  std::map<std::uint64_t, std::uint32_t> counts;

  std::vector<std::uint64_t> ids = initial_atom_invariants(mol);
  for (std::uint64_t id : ids) {
    ++counts[id];
  }

  if (radius > 0 && n > 0 && mol.bond_count() > 0) {
    const std::size_t words = static_cast<std::size_t>((mol.bond_count() + 63) / 64);
    std::vector<BondMask> covered(n, BondMask(words, 0));
    std::set<BondMask> retained_sets;

    struct Environment {
      BondMask mask;
      std::uint64_t id;
      int atom;

      bool operator<(const Environment& other) const {
        if (mask != other.mask) return mask < other.mask;
        if (id != other.id) return id < other.id;
        return atom < other.atom;
      }
    };

    std::vector<std::uint64_t> next_ids(n);
    std::vector<BondMask> next_covered(n);

    for (int layer = 1; layer <= radius; ++layer) {
      std::vector<Environment> round;
      round.reserve(n);
      for (int a = 0; a < n; ++a) {
        if (mol.degree(a) == 0) {
          continue;  // isolated atoms contribute only their radius-0 identifier
        }
        BondMask mask = covered[a];
        std::vector<std::pair<std::uint64_t, std::uint64_t>> neighbours;
        neighbours.reserve(mol.neighbors(a).size());
        for (const auto& [nbr, bond_index] : mol.neighbors(a)) {
          set_bit(mask, bond_index);
          or_into(mask, covered[nbr]);
          neighbours.emplace_back(static_cast<std::uint64_t>(mol.bond(bond_index).order),
                                  ids[nbr]);
        }
        std::sort(neighbours.begin(), neighbours.end());

        Fnv1a64 hash;
        hash.feed_u64(static_cast<std::uint64_t>(layer));
        hash.feed_u64(ids[a]);
        for (const auto& [code, nbr_id] : neighbours) {
          hash.feed_u64(code);
          hash.feed_u64(nbr_id);
        }
        next_ids[a] = hash.value();
        next_covered[a] = mask;
        round.push_back(Environment{std::move(mask), next_ids[a], a});
      }

      std::sort(round.begin(), round.end());
      for (const auto& env : round) {
        if (retained_sets.insert(env.mask).second) {
          ++counts[env.id];
        }
      }

      for (int a = 0; a < n; ++a) {
        if (mol.degree(a) > 0) {
          ids[a] = next_ids[a];
          covered[a] = next_covered[a];
        }
      }
    }
  }

  std::vector<SparseFingerprint::Entry> entries(counts.begin(), counts.end());
  return SparseFingerprint(std::move(entries));
}

DenseFingerprint fold(const SparseFingerprint& fp, int dim) {
  if (dim < 1) {
    throw std::invalid_argument("fold dim must be >= 1");
  }
  DenseFingerprint dense;
  dense.counts.assign(static_cast<std::size_t>(dim), 0);
  for (const auto& [id, count] : fp.entries()) {
    dense.counts[id % static_cast<std::uint64_t>(dim)] += count;
  }
  return dense;
}

SortSliceVocabulary sortslice_fit(std::span<const SparseFingerprint> corpus, int dim,
                                  std::string_view corpus_description) {
  if (corpus.empty()) {
    throw std::invalid_argument("sortslice_fit needs a non-empty corpus");
  }
  if (dim < 1) {
    throw std::invalid_argument("vocabulary dim must be >= 1");
  }

  std::unordered_map<std::uint64_t, std::uint32_t> support;
  for (const auto& fp : corpus) {
    for (const auto& [id, count] : fp.entries()) {
      ++support[id];  // presence per fingerprint, not multiplicity
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranked;  // (id, support)
  ranked.reserve(support.size());
  for (const auto& [id, votes] : support) {
    ranked.emplace_back(id, votes);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& lhs, const auto& rhs) {
    if (lhs.second != rhs.second) return lhs.second > rhs.second;
    return lhs.first < rhs.first;
  });

  const int effective_dim = std::min<int>(dim, static_cast<int>(ranked.size()));
  std::vector<std::uint64_t> ids(effective_dim);
  for (int i = 0; i < effective_dim; ++i) {
    ids[i] = ranked[i].first;
  }

  std::ostringstream provenance;
  if (!corpus_description.empty()) {
    provenance << corpus_description;
  } else {
    provenance << "corpus of " << corpus.size() << " fingerprints";
  }
  if (effective_dim < dim) {
    provenance << " (requested dim " << dim << ", shrunk to " << effective_dim << ")";
  }
  return SortSliceVocabulary(std::move(ids), provenance.str());
}

SortSliceVocabulary::SortSliceVocabulary(std::vector<std::uint64_t> ordered_ids,
                                         std::string provenance)
    : ordered_ids_(std::move(ordered_ids)), provenance_(std::move(provenance)) {
  slots_.reserve(ordered_ids_.size());
  for (int i = 0; i < static_cast<int>(ordered_ids_.size()); ++i) {
    if (!slots_.emplace(ordered_ids_[i], i).second) {
      throw std::invalid_argument("vocabulary contains a duplicate identifier");
    }
  }
}

std::optional<int> SortSliceVocabulary::slot_of(std::uint64_t id) const {
  auto it = slots_.find(id);
  if (it == slots_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void SortSliceVocabulary::write(std::ostream& out) const {
  out << "dim=" << dim() << "\n";
  out << "corpus=" << provenance_ << "\n";
  for (std::uint64_t id : ordered_ids_) {
    out << id << "\n";
  }
}

void SortSliceVocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write vocabulary file: " + path.string());
  }
  write(out);
}

SortSliceVocabulary SortSliceVocabulary::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim=", 0) != 0) {
    throw std::runtime_error("vocabulary file: missing dim= header");
  }
  const long declared_dim = std::stol(line.substr(4));
  if (!std::getline(in, line) || line.rfind("corpus=", 0) != 0) {
    throw std::runtime_error("vocabulary file: missing corpus= header");
  }
  std::string provenance = line.substr(7);
  std::vector<std::uint64_t> ids;
  ids.reserve(static_cast<std::size_t>(declared_dim));
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    ids.push_back(std::stoull(line));
  }
  if (static_cast<long>(ids.size()) != declared_dim) {
    throw std::runtime_error("vocabulary file: identifier count does not match dim");
  }
  return SortSliceVocabulary(std::move(ids), std::move(provenance));
}

SortSliceVocabulary SortSliceVocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read vocabulary file: " + path.string());
  }
  return read(in);
}

DenseFingerprint sortslice_encode(const SparseFingerprint& fp, const SortSliceVocabulary& vocab) {
  DenseFingerprint dense;
  dense.counts.assign(static_cast<std::size_t>(vocab.dim()), 0);
  for (const auto& [id, count] : fp.entries()) {
    if (auto slot = vocab.slot_of(id)) {
      dense.counts[*slot] = count;
    }
  }
  return dense;
}

std::string format_fingerprint(const SparseFingerprint& fp) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [id, count] : fp.entries()) {
    if (!first) out << ' ';
    out << id << ':' << count;
    first = false;
  }
  return out.str();
}

std::string format_fingerprint(const DenseFingerprint& fp) {
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < fp.dim(); ++i) {
    if (fp.counts[i] == 0) continue;
    if (!first) out << ' ';
    out << i << ':' << fp.counts[i];
    first = false;
  }
  return out.str();
}

}  // namespace molgp
