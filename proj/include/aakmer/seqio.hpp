#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace aakmer::seqio {

struct Read {
  std::string id;
  std::string seq;
  std::optional<std::string> qual;

  bool operator==(const Read&) const = default;
};

// DNA records accept {A,C,G,T,N}. Protein records accept the 20 standard
// residues plus 'X' and '*'; the rare codes B, J, O, U and Z fold to 'X'.
enum class Alphabet { dna, protein };

enum class DuplicatePolicy { reject, suffix };

// Applies the duplicate-id policy across one input stream. With `suffix`, a
// repeated id gets ".2", ".3", ... appended until it is unique.
class IdRegistry {
 public:
  explicit IdRegistry(DuplicatePolicy policy = DuplicatePolicy::reject) : policy_(policy) {}

  std::string admit(std::string id, std::size_t line);

 private:
  DuplicatePolicy policy_;
  std::unordered_set<std::string> seen_;
};

// Streaming FASTA reader; holds at most one record in memory.
class FastaReader {
 public:
  explicit FastaReader(std::istream& in, Alphabet alphabet = Alphabet::dna,
                       DuplicatePolicy policy = DuplicatePolicy::reject);

  std::optional<Read> next();

 private:
  std::istream& in_;
  Alphabet alphabet_;
  IdRegistry ids_;
  std::size_t line_ = 0;
  std::optional<std::string> header_;
  std::size_t header_line_ = 0;
};

// Streaming FASTQ reader for unwrapped 4-line records.
class FastqReader {
 public:
  explicit FastqReader(std::istream& in, DuplicatePolicy policy = DuplicatePolicy::reject);

  std::optional<Read> next();

 private:
  bool getline(std::string& line);

  std::istream& in_;
  IdRegistry ids_;
  std::size_t line_ = 0;
};

std::vector<Read> parse_fasta(std::istream& in, Alphabet alphabet = Alphabet::dna,
                              DuplicatePolicy policy = DuplicatePolicy::reject);
std::vector<Read> parse_fastq(std::istream& in, DuplicatePolicy policy = DuplicatePolicy::reject);

// Chooses FASTA or FASTQ from the first non-blank character. FASTQ input is
// always DNA.
std::vector<Read> parse_sequences(std::istream& in, Alphabet alphabet = Alphabet::dna,
                                  DuplicatePolicy policy = DuplicatePolicy::reject);

// Reads without quality are written with a constant 'I' (Phred 40) string.
inline constexpr char kDefaultQuality = 'I';

void write_fastq(std::span<const Read> reads, std::ostream& out);
void write_fasta(std::span<const Read> reads, std::ostream& out, std::size_t width = 70);

// Opens a path for reading; "-" is standard input. Gzip input (magic bytes
// 1f 8b) is decompressed transparently, anything else is passed through.
std::unique_ptr<std::istream> open_input(const std::string& path);

// Opens a path for writing; "-" is standard output.
std::unique_ptr<std::ostream> open_output(const std::string& path);

std::vector<Read> read_sequence_file(const std::string& path, Alphabet alphabet = Alphabet::dna,
                                     DuplicatePolicy policy = DuplicatePolicy::reject);

}  // namespace aakmer::seqio
