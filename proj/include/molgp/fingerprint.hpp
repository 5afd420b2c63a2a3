// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "molgp/molgraph.hpp"

namespace molgp {

// Exact count fingerprint: identifier -> positive count, kept as entries
// sorted by identifier. The total count is cached for similarity kernels.
class SparseFingerprint {
 public:
  using Entry = std::pair<std::uint64_t, std::uint32_t>;

  SparseFingerprint() = default;
  explicit SparseFingerprint(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t total_count() const { return total_count_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // 0 when the identifier is absent.
  std::uint32_t count_of(std::uint64_t id) const;

  bool operator==(const SparseFingerprint&) const = default;

 private:
  std::vector<Entry> entries_;
  std::uint64_t total_count_ = 0;
};

// Fixed-length count vector (hash-folded or Sort&Slice encoded).
struct DenseFingerprint {
  std::vector<std::uint32_t> counts;

  int dim() const { return static_cast<int>(counts.size()); }
  std::uint64_t total_count() const;

  bool operator==(const DenseFingerprint&) const = default;
};

// Identifier vocabulary ordered by descending corpus support (ties by
// ascending identifier). Persisted as a small text file, see save()/load().
class SortSliceVocabulary {
 public:
  SortSliceVocabulary(std::vector<std::uint64_t> ordered_ids, std::string provenance);

  const std::vector<std::uint64_t>& ordered_ids() const { return ordered_ids_; }
  int dim() const { return static_cast<int>(ordered_ids_.size()); }
  const std::string& provenance() const { return provenance_; }

  std::optional<int> slot_of(std::uint64_t id) const;

  // File format: two header lines `dim=<n>` and `corpus=<string>`, then one
  // decimal identifier per line in vocabulary order.
  void save(const std::filesystem::path& path) const;
  static SortSliceVocabulary load(const std::filesystem::path& path);
  void write(std::ostream& out) const;
  static SortSliceVocabulary read(std::istream& in);

 private:
  std::vector<std::uint64_t> ordered_ids_;
  std::string provenance_;
  std::unordered_map<std::uint64_t, int> slots_;
};

// Morgan count fingerprint at the given radius (0..10). Iteration 0 emits
// the initial atom invariants; iteration r hashes (r, own identifier, sorted
// (bond code, neighbour identifier) pairs). Environments are deduplicated by
// their covered bond set: among environments covering the same bond set the
// smallest identifier is kept, and a set already covered at an earlier
// iteration is never re-counted.
SparseFingerprint morgan_sparse(const MolGraph& mol, int radius);

// Modulo folding: slot(id) = id mod dim; colliding counts are summed.
DenseFingerprint fold(const SparseFingerprint& fp, int dim);

// Builds the vocabulary of the `dim` highest-support identifiers. Support is
// the number of corpus fingerprints containing the identifier (presence, not
// multiplicity). If fewer distinct identifiers exist the vocabulary shrinks
// and the provenance records it.
SortSliceVocabulary sortslice_fit(std::span<const SparseFingerprint> corpus, int dim,
                                  std::string_view corpus_description = "");

// Slot i receives the count of vocab.ordered_ids()[i]; identifiers outside
// the vocabulary are dropped.
DenseFingerprint sortslice_encode(const SparseFingerprint& fp, const SortSliceVocabulary& vocab);

// Dump line format: `id:count` pairs, space separated, ids ascending. Dense
// fingerprints list only populated slots.
std::string format_fingerprint(const SparseFingerprint& fp);
std::string format_fingerprint(const DenseFingerprint& fp);

}  // namespace molgp
