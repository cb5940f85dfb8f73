#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aakmer {

// Base-20 positional code of an amino-acid k-mer, in [0, 20^k).
using KmerId = std::uint32_t;

namespace kmer {

// Residue ordering that defines the digits of a KmerId.
inline constexpr std::string_view kResidues = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr int kDefaultK = 4;
inline constexpr int kMaxK = 7;

// Digit of a residue, or -1 for anything outside the 20-letter alphabet
// (including the stop '*' and the ambiguity code 'X').
int residue_rank(char residue);

std::uint32_t vocabulary_size(int k);

class KmerCodec {
 public:
  explicit KmerCodec(int k = kDefaultK);

  int k() const { return k_; }
  std::uint32_t vocabulary() const { return vocabulary_; }

  KmerId encode(std::string_view word) const;
  std::string decode(KmerId id) const;

  // Stride-1 windows over the residues; windows touching a character outside
  // the 20-letter alphabet are skipped. Appends to `out`.
  void extract_into(std::string_view residues, std::vector<KmerId>& out) const;
  std::vector<KmerId> extract(std::string_view residues) const;

 private:
  int k_;
  std::uint32_t vocabulary_;
};

}  // namespace kmer
}  // namespace aakmer
