#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aakmer/assoc_array.hpp"
#include "aakmer/degree.hpp"
#include "aakmer/seqio.hpp"

namespace aakmer::refdb {

enum class InputKind : std::uint32_t { dna = 0, protein = 1 };

inline constexpr std::uint32_t kFormatVersion = 1;

struct Meta {
  std::uint32_t k = kmer::kDefaultK;
  InputKind kind = InputKind::dna;
  // Seconds since the epoch; taken from SOURCE_DATE_EPOCH when set, else 0,
  // so that rebuilding from the same inputs gives the same file.
  std::uint64_t build_time = 0;
  std::uint64_t source_digest = 0;

  bool operator==(const Meta&) const = default;
};

struct ReferenceDB {
  AssocArray array;
  std::vector<std::string> organisms;        // distinct names, sorted
  std::vector<std::uint32_t> organism_index;  // per row, into `organisms`
  // Presence degrees of the unfiltered array; kept as-is by apply_filter.
  DegreeTable degrees;
  std::optional<degree::FilterSpec> filter;
  // Columns retained by the filter; empty optional when unfiltered.
  std::optional<KmerSet> keep;
  Meta meta;

  const std::string& organism_of(std::size_t row) const {
    return organisms[organism_index[row]];
  }

  bool operator==(const ReferenceDB&) const = default;
};

// reference id -> organism
using OrganismMap = std::unordered_map<std::string, std::string>;

// Two tab-separated columns; blank lines and lines starting with '#' are
// skipped.
OrganismMap read_organism_tsv(std::istream& in);

// Row label and organism of a reference. A header token "id|organism" gives
// both; an entry in `organisms` for the id overrides the header organism.
std::pair<std::string, std::string> resolve_reference(const std::string& token,
                                                      const OrganismMap& organisms);

ReferenceDB build(std::span<const seqio::Read> references, const OrganismMap& organisms,
                  InputKind kind, int k = kmer::kDefaultK);

// Keeps only the columns selected by `spec`. Filters do not compose: an
// already filtered db is rejected.
ReferenceDB apply_filter(const ReferenceDB& db, const degree::FilterSpec& spec);

std::vector<std::uint8_t> serialize(const ReferenceDB& db);
ReferenceDB deserialize(std::span<const std::uint8_t> bytes);

void save(const ReferenceDB& db, const std::string& path);
ReferenceDB load(const std::string& path);

}  // namespace aakmer::refdb
