#include "aakmer/assoc_array.hpp"

#include <algorithm>

#include "aakmer/error.hpp"
#include "aakmer/kernels.hpp"
#include "aakmer/translate.hpp"

namespace aakmer {

Row make_row(std::vector<KmerId> ids) {
  std::sort(ids.begin(), ids.end());
  Row row;
  for (std::size_t i = 0; i < ids.size();) {
    std::size_t j = i;
    while (j < ids.size() && ids[j] == ids[i]) ++j;
    row.push_back({ids[i], saturating_add(0, j - i)});
    i = j;
  }
  return row;
}

std::optional<std::uint64_t> DegreeTable::degree(KmerId id) const {
  const auto it = std::lower_bound(degrees.begin(), degrees.end(), id,
                                   [](const auto& entry, KmerId k) { return entry.first < k; });
  if (it == degrees.end() || it->first != id) return std::nullopt;
  return it->second;
}

AssocArray::AssocArray(std::uint32_t columns) : columns_(columns) {}

std::size_t AssocArray::nnz() const {
  std::size_t n = 0;
  for (const Row& r : rows_) n += r.size();
  return n;
}

std::uint64_t AssocArray::mass() const {
  std::uint64_t m = 0;
  for (const Row& r : rows_) {
    for (const Entry& e : r) m += e.count;
  }
  return m;
}

std::optional<std::size_t> AssocArray::find_row(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void AssocArray::check_column(KmerId col) const {
  if (col >= columns_) {
    throw InputError("column " + std::to_string(col) + " outside [0, " + std::to_string(columns_) +
                     ")");
  }
}

std::size_t AssocArray::row_index(std::string_view label) {
  if (auto found = find_row(label)) return *found;
  return append_row(std::string(label));
}

std::size_t AssocArray::append_row(std::string label, Row row) {
  if (index_.count(label) != 0) throw InputError("duplicate row label '" + label + "'");
  for (std::size_t i = 0; i < row.size(); ++i) {
    check_column(row[i].col);
    if (row[i].count == 0 || (i > 0 && row[i - 1].col >= row[i].col)) {
      throw InputError("row '" + label + "' is not a strictly ascending list of positive counts");
    }
  }
  const std::size_t index = rows_.size();
  index_.emplace(label, index);
  labels_.push_back(std::move(label));
  rows_.push_back(std::move(row));
  return index;
}

void AssocArray::accumulate(std::string_view label, KmerId col, Count delta) {
  if (delta == 0) throw InputError("accumulate delta must be positive");
  check_column(col);
  Row& row = rows_[row_index(label)];
  const auto it = std::lower_bound(row.begin(), row.end(), col,
                                   [](const Entry& e, KmerId k) { return e.col < k; });
  if (it != row.end() && it->col == col) {
    it->count = saturating_add(it->count, delta);
  } else {
    row.insert(it, Entry{col, delta});
  }
}

void AssocArray::merge(const AssocArray& other) {
  if (other.columns_ != columns_) throw InputError("cannot merge arrays of different column spaces");
  for (std::size_t i = 0; i < other.rows_.size(); ++i) {
    const auto found = find_row(other.labels_[i]);
    if (!found) {
      append_row(other.labels_[i], other.rows_[i]);
      continue;
    }
    // Two-way merge of sorted rows.
    const Row& mine = rows_[*found];
    const Row& theirs = other.rows_[i];
    Row merged;
    merged.reserve(mine.size() + theirs.size());
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < mine.size() || b < theirs.size()) {
      if (b == theirs.size() || (a < mine.size() && mine[a].col < theirs[b].col)) {
        merged.push_back(mine[a++]);
      } else if (a == mine.size() || theirs[b].col < mine[a].col) {
        merged.push_back(theirs[b++]);
      } else {
        merged.push_back({mine[a].col, saturating_add(mine[a].count, theirs[b].count)});
        ++a;
        ++b;
      }
    }
    rows_[*found] = std::move(merged);
  }
}

std::vector<KmerId> read_kmers(const seqio::Read& read, const kmer::KmerCodec& codec) {
  std::vector<KmerId> ids;
  ids.reserve(2 * read.seq.size());
  for (const auto& fragment : translate::six_frame(read)) {
    codec.extract_into(fragment.residues, ids);
  }
  return ids;
}

namespace {

AssocArray assemble(std::span<const seqio::Read> reads, std::vector<Row> rows,
                    std::uint32_t columns) {
  AssocArray arr(columns);
  for (std::size_t i = 0; i < reads.size(); ++i) arr.append_row(reads[i].id, std::move(rows[i]));
  return arr;
}

}  // namespace

AssocArray from_reads(std::span<const seqio::Read> reads, const kmer::KmerCodec& codec) {
  return assemble(reads, kernels::read_rows(reads, codec), codec.vocabulary());
}

AssocArray from_reads_serial(std::span<const seqio::Read> reads, const kmer::KmerCodec& codec) {
  return assemble(reads, kernels::read_rows_serial(reads, codec), codec.vocabulary());
}

AssocArray from_proteins(std::span<const seqio::Read> proteins, const kmer::KmerCodec& codec) {
  AssocArray arr(codec.vocabulary());
  for (const seqio::Read& p : proteins) arr.append_row(p.id, make_row(codec.extract(p.seq)));
  return arr;
}

DegreeTable column_sums(const AssocArray& arr, DegreeMode mode) {
  std::vector<std::uint64_t> dense(arr.columns(), 0);
  for (std::size_t i = 0; i < arr.num_rows(); ++i) {
    for (const Entry& e : arr.row(i)) dense[e.col] += mode == DegreeMode::presence ? 1 : e.count;
  }
  DegreeTable table;
  table.mode = mode;
  for (KmerId k = 0; k < arr.columns(); ++k) {
    if (dense[k] != 0) table.degrees.emplace_back(k, dense[k]);
  }
  return table;
}

AssocArray select_columns(const AssocArray& arr, const KmerSet& keep) {
  std::vector<bool> mask(arr.columns(), false);
  for (KmerId k : keep) {
    if (k < arr.columns()) mask[k] = true;
  }
  AssocArray out(arr.columns());
  for (std::size_t i = 0; i < arr.num_rows(); ++i) {
    Row row;
    for (const Entry& e : arr.row(i)) {
      if (mask[e.col]) row.push_back(e);
    }
    out.append_row(arr.label(i), std::move(row));
  }
  return out;
}

MatchMatrix multiply_transpose(const AssocArray& a, const AssocArray& b, Weighting weighting) {
  if (a.columns() != b.columns()) {
    throw InputError("column dimension mismatch: " + std::to_string(a.columns()) + " vs " +
                     std::to_string(b.columns()));
  }
  MatchMatrix out;
  out.sample_labels = a.row_labels();
  out.ref_labels = b.row_labels();
  kernels::multiply_rows(a, kernels::InvertedIndex::build(b), b.num_rows(), weighting, out);
  return out;
}

}  // namespace aakmer
