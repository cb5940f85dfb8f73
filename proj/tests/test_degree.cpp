#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aakmer/degree.hpp"
#include "aakmer/error.hpp"

using namespace aakmer;
using namespace aakmer::degree;

namespace {

// a..e = k-mers 0..4 with degrees 1,1,2,5,100.
DegreeTable five() {
  DegreeTable t;
  t.degrees = {{0, 1}, {1, 1}, {2, 2}, {3, 5}, {4, 100}};
  return t;
}

DegreeTable random_table(std::mt19937_64& rng, std::size_t m) {
  std::geometric_distribution<std::uint64_t> deg(0.2);
  DegreeTable t;
  for (KmerId k = 0; k < m; ++k) t.degrees.emplace_back(k * 3, 1 + deg(rng));
  return t;
}

}  // namespace

TEST_CASE("cutoff_degree examples") {
  CHECK(cutoff_degree(five(), 0.40, Side::bottom) == 1);
  CHECK(cutoff_degree(five(), 0.20, Side::top) == 100);
  CHECK(cutoff_degree(five(), 1.0, Side::bottom) == 100);
  CHECK(cutoff_degree(five(), 1.0, Side::top) == 1);
  CHECK(cutoff_degree(five(), 0.01, Side::bottom) == 1);
  CHECK(cutoff_degree(five(), 0.60, Side::bottom) == 2);
  CHECK_THROWS_AS(cutoff_degree(DegreeTable{}, 0.5, Side::bottom), InputError);
  CHECK_THROWS_AS(cutoff_degree(five(), 0.0, Side::bottom), InputError);
  CHECK_THROWS_AS(cutoff_degree(five(), 1.5, Side::top), InputError);
}

TEST_CASE("cutoff rank is not pushed up by rounding") {
  DegreeTable t;
  for (KmerId k = 0; k < 30; ++k) t.degrees.emplace_back(k, k + 1);
  // 0.1 * 30 evaluates to 3.0000000000000004.
  CHECK(cutoff_degree(t, 0.1, Side::bottom) == 3);
}

TEST_CASE("mass basis cutoff") {
  // Total mass 109; 10% = 10.9 -> prefix 1+1+2+5 = 9 < 10.9, +100 reaches it.
  CHECK(cutoff_degree(five(), 0.10, Side::bottom, FractionBasis::mass) == 100);
  // From the top, 100 alone covers 50% of the mass.
  CHECK(cutoff_degree(five(), 0.50, Side::top, FractionBasis::mass) == 100);
  CHECK(cutoff_degree(five(), 0.95, Side::top, FractionBasis::mass) == 5);
}

TEST_CASE("keep_set examples") {
  CHECK(keep_set(five(), {0.40, 0.0}) == KmerSet{0, 1});
  CHECK(keep_set(five(), {0.0, 0.20}) == KmerSet{4});
  CHECK(keep_set(five(), {0.0, 0.0}) == KmerSet{0, 1, 2, 3, 4});
  CHECK(keep_set(five(), {0.40, 0.20}) == KmerSet{0, 1, 4});
  CHECK(keep_set(DegreeTable{}, {0.1, 0.0}).empty());
  CHECK_THROWS_AS(keep_set(five(), {0.7, 0.5}), InputError);
  CHECK_THROWS_AS(keep_set(five(), {-0.1, 0.0}), InputError);
}

TEST_CASE("keep_set properties on random tables") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> frac(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const DegreeTable t = random_table(rng, 1 + rng() % 400);
    double f1 = frac(rng);
    double f2 = frac(rng);
    if (f1 > f2) std::swap(f1, f2);
    const auto m = static_cast<double>(t.size());

    const KmerSet b1 = keep_set(t, {f1, 0.0});
    const KmerSet b2 = keep_set(t, {f2, 0.0});
    CHECK(std::includes(b2.begin(), b2.end(), b1.begin(), b1.end()));
    CHECK(static_cast<double>(b1.size()) >= std::ceil(f1 * m - 1e-9));

    const KmerSet t1 = keep_set(t, {0.0, f1});
    const KmerSet t2 = keep_set(t, {0.0, f2});
    CHECK(std::includes(t2.begin(), t2.end(), t1.begin(), t1.end()));
    CHECK(static_cast<double>(t1.size()) >= std::ceil(f1 * m - 1e-9));

    // Overlapping halves still give a set.
    const double half = std::min(0.5, f2);
    const KmerSet both = keep_set(t, {half, half});
    CHECK(std::adjacent_find(both.begin(), both.end()) == both.end());
    CHECK(std::is_sorted(both.begin(), both.end()));

    // Tie groups are all-or-nothing.
    const std::uint64_t cut = cutoff_degree(t, f1, Side::bottom);
    for (const auto& [k, d] : t.degrees) {
      CHECK(std::binary_search(b1.begin(), b1.end(), k) == (d <= cut));
    }
  }
}

TEST_CASE("histogram") {
  DegreeTable t;
  t.degrees = {{0, 1}, {1, 1}, {2, 2}};
  CHECK(histogram(t, BinPolicy::unit) == std::vector<HistogramBin>{{1, 2}, {2, 1}});
  CHECK(histogram(DegreeTable{}).empty());
  CHECK(histogram(five(), BinPolicy::log2) ==
        std::vector<HistogramBin>{{1, 2}, {2, 1}, {4, 1}, {64, 1}});

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const DegreeTable r = random_table(rng, rng() % 500);
    for (BinPolicy p : {BinPolicy::unit, BinPolicy::log2}) {
      std::uint64_t sum = 0;
      for (const auto& b : histogram(r, p)) sum += b.kmers;
      CHECK(sum == r.size());
    }
  }

  std::ostringstream out;
  write_histogram_tsv(histogram(t, BinPolicy::unit), out);
  CHECK(out.str() == "degree_bin\tcount\n1\t2\n2\t1\n");
}
