#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aakmer/assoc_array.hpp"
#include "aakmer/refdb.hpp"

namespace aakmer::identify {

inline constexpr std::string_view kUnclassified = "unclassified";

struct Thresholds {
  std::uint32_t min_shared = 2;
  double min_margin = 0.0;
  std::uint32_t min_reads = 10;
};

struct ReadCall {
  std::string read_id;
  std::string organism;
  std::uint64_t score = 0;
  std::uint32_t shared_kmers = 0;
  // Best score minus the best score of any other organism; +inf when no other
  // organism scored.
  double margin = 0.0;

  bool classified() const { return organism != kUnclassified; }
  bool operator==(const ReadCall&) const = default;
};

struct OrganismReport {
  std::string organism;
  std::uint64_t reads_assigned = 0;
  double fraction_of_classified = 0.0;
  bool detected = false;

  bool operator==(const OrganismReport&) const = default;
};

// Applies the db's keep-set to the sample, then multiplies against the db.
// Throws InputError when the sample's column space differs from the db's.
MatchMatrix score_sample(const AssocArray& sample, const refdb::ReferenceDB& db,
                         Weighting weighting = Weighting::binary);

// Scores are first reduced to one per organism (its best reference). A tie
// for the top score between organisms leaves the read unclassified, as do
// too few shared k-mers or too small a margin.
ReadCall call_read(std::string read_id, std::span<const MatchEntry> row,
                   const refdb::ReferenceDB& db, const Thresholds& thresholds);

std::vector<ReadCall> call_reads(const MatchMatrix& scores, const refdb::ReferenceDB& db,
                                 const Thresholds& thresholds);

// Sorted by reads_assigned descending, then organism name.
std::vector<OrganismReport> aggregate(std::span<const ReadCall> calls, std::uint32_t min_reads);

void write_calls_tsv(std::span<const ReadCall> calls, std::ostream& out);
void write_report_tsv(std::span<const OrganismReport> reports, std::ostream& out);
std::vector<ReadCall> read_calls_tsv(std::istream& in);
std::vector<OrganismReport> read_report_tsv(std::istream& in);

}  // namespace aakmer::identify
