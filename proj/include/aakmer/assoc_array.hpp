#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aakmer/kmer.hpp"
#include "aakmer/seqio.hpp"

namespace aakmer {

using Count = std::uint32_t;

// Cell counts saturate here instead of wrapping.
inline constexpr Count kMaxCount = std::numeric_limits<Count>::max();

inline Count saturating_add(Count a, std::uint64_t b) {
  const std::uint64_t sum = static_cast<std::uint64_t>(a) + b;
  return sum > kMaxCount ? kMaxCount : static_cast<Count>(sum);
}

struct Entry {
  KmerId col;
  Count count;

  bool operator==(const Entry&) const = default;
};

// Entries of one row, strictly ascending by column.
using Row = std::vector<Entry>;

// Sorts and run-length encodes a multiset of k-mer ids into a row.
Row make_row(std::vector<KmerId> ids);

// Sorted set of columns.
using KmerSet = std::vector<KmerId>;

enum class DegreeMode { presence, occurrence };

// Degree per k-mer over the rows of an array. Only columns with nonzero
// degree are listed, ascending by k-mer id.
struct DegreeTable {
  DegreeMode mode = DegreeMode::presence;
  std::vector<std::pair<KmerId, std::uint64_t>> degrees;

  std::size_t size() const { return degrees.size(); }
  bool empty() const { return degrees.empty(); }
  std::optional<std::uint64_t> degree(KmerId id) const;

  bool operator==(const DegreeTable&) const = default;
};

// Sparse labeled matrix: rows are sequence labels, columns are k-mer ids,
// values are positive counts. A single writer builds it; afterwards it is
// read-only and may be shared between threads.
class AssocArray {
 public:
  explicit AssocArray(std::uint32_t columns = kmer::vocabulary_size(kmer::kDefaultK));

  std::uint32_t columns() const { return columns_; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t nnz() const;
  // Sum of all counts.
  std::uint64_t mass() const;

  const std::vector<std::string>& row_labels() const { return labels_; }
  const std::string& label(std::size_t row) const { return labels_[row]; }
  std::span<const Entry> row(std::size_t i) const { return rows_[i]; }
  std::optional<std::size_t> find_row(std::string_view label) const;

  // Adds `delta` to cell (label, col), creating the row and cell as needed.
  void accumulate(std::string_view label, KmerId col, Count delta = 1);

  // Appends a new row; throws InputError if the label already exists.
  std::size_t append_row(std::string label, Row row = {});

  // Accumulates every cell of `other` into this array. Rows unknown here are
  // appended in `other`'s order.
  void merge(const AssocArray& other);

  bool operator==(const AssocArray& other) const {
    return columns_ == other.columns_ && labels_ == other.labels_ && rows_ == other.rows_;
  }

 private:
  std::size_t row_index(std::string_view label);
  void check_column(KmerId col) const;

  std::uint32_t columns_;
  std::vector<std::string> labels_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

// One row per read; a cell counts the k-mer over all six frames of the read.
AssocArray from_reads(std::span<const seqio::Read> reads, const kmer::KmerCodec& codec);
AssocArray from_reads_serial(std::span<const seqio::Read> reads, const kmer::KmerCodec& codec);

// Same, for protein records: k-mers are taken from the residues directly.
AssocArray from_proteins(std::span<const seqio::Read> proteins, const kmer::KmerCodec& codec);

// All k-mer ids a read contributes, in frame order.
std::vector<KmerId> read_kmers(const seqio::Read& read, const kmer::KmerCodec& codec);

DegreeTable column_sums(const AssocArray& arr, DegreeMode mode = DegreeMode::presence);

// Drops cells whose column is not in `keep`. Emptied rows stay.
AssocArray select_columns(const AssocArray& arr, const KmerSet& keep);

enum class Weighting { binary, counts };

struct MatchEntry {
  std::uint32_t ref;
  std::uint64_t score;
  std::uint32_t shared;  // distinct shared k-mers, whatever the weighting

  bool operator==(const MatchEntry&) const = default;
};

// Row i holds the nonzero scores of sample row i, ascending by reference row.
struct MatchMatrix {
  std::vector<std::string> sample_labels;
  std::vector<std::string> ref_labels;
  std::vector<std::vector<MatchEntry>> rows;
  // Scalar multiply-adds performed: one per (sample cell, reference cell)
  // pair sharing a column. Deterministic proxy for scoring time.
  std::uint64_t comparisons = 0;

  bool operator==(const MatchMatrix&) const = default;
};

// Scores every row of `a` against every row of `b` over shared columns.
// binary: number of shared distinct columns; counts: sum of a(i,k)*b(j,k).
MatchMatrix multiply_transpose(const AssocArray& a, const AssocArray& b,
                               Weighting weighting = Weighting::binary);

}  // namespace aakmer
