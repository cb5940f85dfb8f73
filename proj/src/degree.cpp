#include "aakmer/degree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "aakmer/error.hpp"

namespace aakmer::degree {

namespace {

std::vector<std::uint64_t> sorted_degrees(const DegreeTable& table) {
  std::vector<std::uint64_t> d;
  d.reserve(table.size());
  for (const auto& [k, deg] : table.degrees) d.push_back(deg);
  std::sort(d.begin(), d.end());
  return d;
}

// ceil(fraction * m) clamped to [1, m]. The small slack keeps products such
// as 0.1 * 30 = 3.0000000000000004 from rounding up a whole position.
std::size_t rank_of(double fraction, std::size_t m) {
  const double scaled = std::ceil(fraction * static_cast<double>(m) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(scaled, 1.0)), 1, m);
}

}  // namespace

void FilterSpec::validate() const {
  const auto in_unit = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!in_unit(bottom) || !in_unit(top)) {
    throw InputError("filter fractions must lie in [0, 1]");
  }
  if (bottom + top > 1.0 + 1e-12) throw InputError("bottom + top fractions must not exceed 1");
}

std::uint64_t cutoff_degree(const DegreeTable& table, double fraction, Side side,
                            FractionBasis basis) {
  if (table.empty()) throw InputError("cutoff of an empty degree table");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InputError("cutoff fraction must lie in (0, 1]");
  std::vector<std::uint64_t> d = sorted_degrees(table);
  if (side == Side::top) std::reverse(d.begin(), d.end());

  if (basis == FractionBasis::distinct) return d[rank_of(fraction, d.size()) - 1];

  // Smallest prefix (from the chosen end) holding at least `fraction` of the
  // total degree mass.
  long double total = 0;
  for (std::uint64_t v : d) total += static_cast<long double>(v);
  const long double target = static_cast<long double>(fraction) * total;
  long double running = 0;
  for (std::uint64_t v : d) {
    running += static_cast<long double>(v);
    if (running + 1e-9L * total >= target) return v;
  }
  return d.back();
}

KmerSet keep_set(const DegreeTable& table, const FilterSpec& spec) {
  spec.validate();
  KmerSet keep;
  if (spec.keeps_all()) {
    keep.reserve(table.size());
    for (const auto& [k, deg] : table.degrees) keep.push_back(k);
    return keep;
  }
  if (table.empty()) return keep;

  const bool use_bottom = spec.bottom > 0.0;
  const bool use_top = spec.top > 0.0;
  const std::uint64_t low = use_bottom ? cutoff_degree(table, spec.bottom, Side::bottom, spec.basis) : 0;
  const std::uint64_t high = use_top ? cutoff_degree(table, spec.top, Side::top, spec.basis) : 0;
  for (const auto& [k, deg] : table.degrees) {
    if ((use_bottom && deg <= low) || (use_top && deg >= high)) keep.push_back(k);
  }
  return keep;
}

std::vector<HistogramBin> histogram(const DegreeTable& table, BinPolicy policy) {
  std::vector<HistogramBin> bins;
  for (std::uint64_t deg : sorted_degrees(table)) {
    std::uint64_t edge = deg;
    if (policy == BinPolicy::log2) {
      edge = 1;
      while (edge <= deg / 2) edge *= 2;
    }
    if (bins.empty() || bins.back().degree_bin != edge) bins.push_back({edge, 0});
    ++bins.back().kmers;
  }
  return bins;
}

void write_histogram_tsv(const std::vector<HistogramBin>& bins, std::ostream& out) {
  out << "degree_bin\tcount\n";
  for (const HistogramBin& b : bins) out << b.degree_bin << '\t' << b.kmers << '\n';
}

}  // namespace aakmer::degree
