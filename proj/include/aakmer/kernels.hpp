#pragma once

// Hot loops behind the associative array. Each kernel has an OpenMP version
// and a serial reference with identical results, kept for tests and the
// benchmark.

#include <cstdint>
#include <span>
#include <vector>

#include "aakmer/assoc_array.hpp"

namespace aakmer::kernels {

// Column-major view of an array: for each column, the rows holding it.
struct InvertedIndex {
  std::vector<std::uint64_t> offsets;  // size columns + 1
  std::vector<std::uint32_t> rows;
  std::vector<Count> counts;

  static InvertedIndex build(const AssocArray& arr);
};

// Row-by-row sparse product against the inverted index of the reference
// side. Writes `out.rows` and `out.comparisons`.
void multiply_rows(const AssocArray& a, const InvertedIndex& b_index, std::size_t b_rows,
                   Weighting weighting, MatchMatrix& out);
void multiply_rows_serial(const AssocArray& a, const InvertedIndex& b_index, std::size_t b_rows,
                          Weighting weighting, MatchMatrix& out);

// K-mer rows for a batch of reads, one row per read in input order.
std::vector<Row> read_rows(std::span<const seqio::Read> reads, const kmer::KmerCodec& codec);
std::vector<Row> read_rows_serial(std::span<const seqio::Read> reads,
                                  const kmer::KmerCodec& codec);

// Number of worker threads OpenMP would use; 1 without OpenMP.
int max_threads();
void set_threads(int n);

}  // namespace aakmer::kernels
