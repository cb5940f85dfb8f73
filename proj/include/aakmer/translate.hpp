#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "aakmer/seqio.hpp"

namespace aakmer::translate {

enum class Strand : std::uint8_t { forward, reverse };

struct ProteinFragment {
  std::string read_id;
  Strand strand = Strand::forward;
  int frame = 0;  // offset in bases, 0..2
  std::string residues;

  bool operator==(const ProteinFragment&) const = default;
};

// NCBI translation table 1. Codons are indexed with T=0, C=1, A=2, G=3 so the
// table reads in the customary TCAG order.
class GeneticCode {
 public:
  static const GeneticCode& standard();

  // Returns 'X' for any codon containing a base outside {A,C,G,T}.
  char translate(char b0, char b1, char b2) const;
  char translate(std::string_view codon) const { return translate(codon[0], codon[1], codon[2]); }

  const std::array<char, 64>& table() const { return table_; }

 private:
  GeneticCode();
  std::array<char, 64> table_{};
};

std::string reverse_complement(std::string_view seq);

// Codons start at `frame` and advance by 3; a trailing partial codon is
// dropped. Stops appear as '*' and do not end the fragment.
std::string translate_frame(std::string_view seq, int frame);

// Forward frames 0,1,2 then reverse-complement frames 0,1,2.
std::array<ProteinFragment, 6> six_frame(const seqio::Read& read);

}  // namespace aakmer::translate
