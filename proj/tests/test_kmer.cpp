#include <doctest.h>

#include <random>

#include "aakmer/error.hpp"
#include "aakmer/kmer.hpp"
#include "oracles.hpp"

using namespace aakmer;
using kmer::KmerCodec;

TEST_CASE("encode examples") {
  const KmerCodec codec;
  CHECK(codec.vocabulary() == 160000);
  CHECK(codec.encode("AAAA") == 0);
  CHECK(codec.encode("YYYY") == 159999);
  CHECK(codec.encode("PLGT") == 99716);
  CHECK(codec.encode("PLGT") == 12 * 8000 + 9 * 400 + 5 * 20 + 16);
}

TEST_CASE("encode and decode errors") {
  const KmerCodec codec;
  CHECK_THROWS_AS(codec.encode("AAA"), InputError);
  CHECK_THROWS_AS(codec.encode("AA*A"), InputError);
  CHECK_THROWS_AS(codec.encode("AAXA"), InputError);
  CHECK_THROWS_AS(codec.decode(160000), InputError);
  CHECK_THROWS_AS(KmerCodec(0), InputError);
  CHECK_THROWS_AS(KmerCodec(kmer::kMaxK + 1), InputError);
}

TEST_CASE("decode examples and exhaustive roundtrip") {
  const KmerCodec codec;
  CHECK(codec.decode(0) == "AAAA");
  CHECK(codec.decode(99716) == "PLGT");
  std::string previous;
  for (KmerId id = 0; id < codec.vocabulary(); ++id) {
    const std::string word = codec.decode(id);
    REQUIRE(codec.encode(word) == id);
    REQUIRE(oracle::kmer_value(word) == id);
    // Monotone in the residue ordering.
    REQUIRE(previous < word);
    previous = word;
  }
}

TEST_CASE("extract examples") {
  const KmerCodec codec;
  CHECK(codec.extract("PLGT") == std::vector<KmerId>{99716});
  CHECK(codec.extract("MA").empty());
  CHECK(codec.extract("AA*AA").empty());
  CHECK(codec.extract("PLGTK") == std::vector<KmerId>{codec.encode("PLGT"), codec.encode("LGTK")});
  CHECK(codec.extract("AAAAA") == std::vector<KmerId>{0, 0});
  CHECK(codec.extract("ACDEFGHIKL").size() == 7);
}

TEST_CASE("extract matches the window oracle") {
  std::mt19937_64 rng(99);
  const std::string alphabet = "ACDEFGHIKLMNPQRSTVWY*X";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 60);
  for (int k : {2, 4, 7}) {
    const KmerCodec codec(k);
    for (int i = 0; i < 1000; ++i) {
      std::string p(static_cast<std::size_t>(len(rng)), 'A');
      for (char& c : p) c = alphabet[pick(rng)];
      const auto ids = codec.extract(p);
      REQUIRE(ids == oracle::kmers(p, static_cast<std::size_t>(k)));
      CHECK(ids.size() <= (p.size() >= static_cast<std::size_t>(k) ? p.size() - k + 1 : 0));
    }
  }
}
