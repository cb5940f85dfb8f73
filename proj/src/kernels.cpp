#include "aakmer/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aakmer/translate.hpp"

namespace aakmer::kernels {

InvertedIndex InvertedIndex::build(const AssocArray& arr) {
  InvertedIndex index;
  index.offsets.assign(static_cast<std::size_t>(arr.columns()) + 1, 0);
  for (std::size_t i = 0; i < arr.num_rows(); ++i) {
    for (const Entry& e : arr.row(i)) ++index.offsets[e.col + 1];
  }
  for (std::size_t c = 1; c < index.offsets.size(); ++c) index.offsets[c] += index.offsets[c - 1];
  index.rows.resize(index.offsets.back());
  index.counts.resize(index.offsets.back());
  std::vector<std::uint64_t> cursor(index.offsets.begin(), index.offsets.end() - 1);
  // Rows are visited in order, so each posting list is ascending by row.
  for (std::size_t i = 0; i < arr.num_rows(); ++i) {
    for (const Entry& e : arr.row(i)) {
      const std::uint64_t at = cursor[e.col]++;
      index.rows[at] = static_cast<std::uint32_t>(i);
      index.counts[at] = e.count;
    }
  }
  return index;
}

namespace {

// Dense per-thread accumulator over reference rows; only touched slots are
// reset between sample rows.
class RowAccumulator {
 public:
  explicit RowAccumulator(std::size_t b_rows) : score_(b_rows, 0), shared_(b_rows, 0) {}

  // Returns the number of multiply-adds performed.
  std::uint64_t multiply(std::span<const Entry> a_row, const InvertedIndex& b, Weighting weighting,
                         std::vector<MatchEntry>& out) {
    std::uint64_t work = 0;
    for (const Entry& e : a_row) {
      const std::uint64_t begin = b.offsets[e.col];
      const std::uint64_t end = b.offsets[e.col + 1];
      work += end - begin;
      for (std::uint64_t p = begin; p < end; ++p) {
        const std::uint32_t j = b.rows[p];
        if (shared_[j]++ == 0) touched_.push_back(j);
        score_[j] += weighting == Weighting::binary
                         ? 1
                         : static_cast<std::uint64_t>(e.count) * b.counts[p];
      }
    }
    std::sort(touched_.begin(), touched_.end());
    out.clear();
    out.reserve(touched_.size());
    for (std::uint32_t j : touched_) {
      out.push_back({j, score_[j], shared_[j]});
      score_[j] = 0;
      shared_[j] = 0;
    }
    touched_.clear();
    return work;
  }

 private:
  std::vector<std::uint64_t> score_;
  std::vector<std::uint32_t> shared_;
  std::vector<std::uint32_t> touched_;
};

}  // namespace

void multiply_rows(const AssocArray& a, const InvertedIndex& b_index, std::size_t b_rows,
                   Weighting weighting, MatchMatrix& out) {
  const auto n = static_cast<std::int64_t>(a.num_rows());
  out.rows.assign(a.num_rows(), {});
  std::uint64_t work = 0;
#pragma omp parallel reduction(+ : work)
  {
    RowAccumulator acc(b_rows);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      work += acc.multiply(a.row(row), b_index, weighting, out.rows[row]);
    }
  }
  out.comparisons = work;
}

void multiply_rows_serial(const AssocArray& a, const InvertedIndex& b_index, std::size_t b_rows,
                          Weighting weighting, MatchMatrix& out) {
  out.rows.assign(a.num_rows(), {});
  out.comparisons = 0;
  RowAccumulator acc(b_rows);
  for (std::size_t i = 0; i < a.num_rows(); ++i) {
    out.comparisons += acc.multiply(a.row(i), b_index, weighting, out.rows[i]);
  }
}

std::vector<Row> read_rows(std::span<const seqio::Read> reads, const kmer::KmerCodec& codec) {
  std::vector<Row> rows(reads.size());
  const auto n = static_cast<std::int64_t>(reads.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    rows[r] = make_row(read_kmers(reads[r], codec));
  }
  return rows;
}

std::vector<Row> read_rows_serial(std::span<const seqio::Read> reads,
                                  const kmer::KmerCodec& codec) {
  std::vector<Row> rows(reads.size());
  for (std::size_t i = 0; i < reads.size(); ++i) rows[i] = make_row(read_kmers(reads[i], codec));
  return rows;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace aakmer::kernels
