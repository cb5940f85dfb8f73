#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "aakmer/seqio.hpp"

namespace aakmer::simgen {

inline constexpr std::string_view kHostOrganism = "host";

// Portable random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the derived draws below are defined
// here rather than through <random> distributions, whose algorithms vary
// between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n) by rejection of the low 2^64 mod n values.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [0, 1) from the top 53 bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

struct TargetSpec {
  std::string genome;  // FASTA path
  std::string organism;
  std::uint64_t read_count = 0;
  // Overrides SimSpec::substitution_rate for this target's reads.
  std::optional<double> substitution_rate;
};

struct SimSpec {
  std::string host_genome;
  std::vector<TargetSpec> targets;
  std::uint32_t read_length = 100;
  double substitution_rate = 0.0;
  std::uint64_t host_read_count = 0;
  std::uint64_t seed = 0;
};

struct Source {
  std::string organism;
  std::vector<seqio::Read> records;
  std::uint64_t read_count = 0;
  double substitution_rate = 0.0;
};

using Truth = std::vector<std::pair<std::string, std::string>>;  // read id, organism

struct SimOutput {
  std::vector<seqio::Read> reads;
  Truth truth;
};

// Reads are drawn source by source in the given order. Each read picks a
// strand, then a start uniformly among all positions where a full read fits
// inside one record, then substitutes each base with the given probability
// by one of the three other bases.
SimOutput generate(const std::vector<Source>& sources, std::uint32_t read_length,
                   std::uint64_t seed);

// Loads the genomes named in `spec` (host first) and generates from them.
SimOutput generate(const SimSpec& spec);

void write_truth_tsv(const Truth& truth, std::ostream& out);
Truth read_truth_tsv(std::istream& in);

// Synthetic gene set of about `total_length` bases. Each record is one gene
// of 800..1600 bases: ATG, codons for uniformly random residues (synonymous
// codon chosen uniformly), a stop codon; half the genes are stored
// reverse-complemented. Records are named "<prefix>_<n>|<organism>".
std::vector<seqio::Read> synth_genome(const std::string& prefix, const std::string& organism,
                                      std::uint64_t total_length, std::uint64_t seed);

}  // namespace aakmer::simgen
