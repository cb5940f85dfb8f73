#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aakmer/assoc_array.hpp"

namespace aakmer::degree {

enum class Side { bottom, top };

// What a fraction counts: distinct k-mers (default) or occurrence mass, i.e.
// the sum of degrees.
enum class FractionBasis { distinct, mass };

// Degree-percentile band selection. Both fractions zero keeps everything.
struct FilterSpec {
  double bottom = 0.0;
  double top = 0.0;
  FractionBasis basis = FractionBasis::distinct;
  DegreeMode mode = DegreeMode::presence;

  bool keeps_all() const { return bottom == 0.0 && top == 0.0; }
  // Throws InputError unless both fractions lie in [0,1] and sum to <= 1.
  void validate() const;

  bool operator==(const FilterSpec&) const = default;
};

// Degree value at the requested percentile. With distinct basis and M k-mers
// sorted ascending, the bottom cutoff sits at 1-based position
// ceil(fraction*M) and the top cutoff at M - ceil(fraction*M) + 1.
std::uint64_t cutoff_degree(const DegreeTable& table, double fraction, Side side,
                            FractionBasis basis = FractionBasis::distinct);

// {degree <= bottom cutoff} u {degree >= top cutoff}; whole tie groups at a
// cutoff are kept.
KmerSet keep_set(const DegreeTable& table, const FilterSpec& spec);

enum class BinPolicy { unit, log2 };

struct HistogramBin {
  std::uint64_t degree_bin;  // lower edge of the bin
  std::uint64_t kmers;

  bool operator==(const HistogramBin&) const = default;
};

// Log bins are [1,2), [2,4), [4,8), ...
std::vector<HistogramBin> histogram(const DegreeTable& table, BinPolicy policy = BinPolicy::log2);

void write_histogram_tsv(const std::vector<HistogramBin>& bins, std::ostream& out);

}  // namespace aakmer::degree
