#include "aakmer/translate.hpp"

#include <algorithm>

namespace aakmer::translate {

namespace {

constexpr std::string_view kTable1 =
    "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";

// T=0, C=1, A=2, G=3; -1 otherwise.
constexpr std::array<int, 256> kBaseIndex = [] {
  std::array<int, 256> t{};
  t.fill(-1);
  t['T'] = 0;
  t['C'] = 1;
  t['A'] = 2;
  t['G'] = 3;
  return t;
}();

constexpr std::array<char, 256> kComplement = [] {
  std::array<char, 256> t{};
  for (int i = 0; i < 256; ++i) t[i] = static_cast<char>(i);
  t['A'] = 'T';
  t['T'] = 'A';
  t['C'] = 'G';
  t['G'] = 'C';
  t['N'] = 'N';
  return t;
}();

}  // namespace

GeneticCode::GeneticCode() { std::copy(kTable1.begin(), kTable1.end(), table_.begin()); }

const GeneticCode& GeneticCode::standard() {
  static const GeneticCode code;
  return code;
}

char GeneticCode::translate(char b0, char b1, char b2) const {
  const int i0 = kBaseIndex[static_cast<unsigned char>(b0)];
  const int i1 = kBaseIndex[static_cast<unsigned char>(b1)];
  const int i2 = kBaseIndex[static_cast<unsigned char>(b2)];
  if ((i0 | i1 | i2) < 0) return 'X';
  return table_[static_cast<std::size_t>(i0 * 16 + i1 * 4 + i2)];
}

std::string reverse_complement(std::string_view seq) {
  std::string out(seq.size(), 'N');
  std::transform(seq.rbegin(), seq.rend(), out.begin(),
                 [](char c) { return kComplement[static_cast<unsigned char>(c)]; });
  return out;
}

std::string translate_frame(std::string_view seq, int frame) {
  const auto offset = static_cast<std::size_t>(frame);
  if (seq.size() < offset + 3) return {};
  const GeneticCode& code = GeneticCode::standard();
  std::string protein;
  protein.reserve((seq.size() - offset) / 3);
  for (std::size_t i = offset; i + 3 <= seq.size(); i += 3) {
    protein.push_back(code.translate(seq[i], seq[i + 1], seq[i + 2]));
  }
  return protein;
}

std::array<ProteinFragment, 6> six_frame(const seqio::Read& read) {
  std::array<ProteinFragment, 6> frames;
  const std::string rc = reverse_complement(read.seq);
  for (int f = 0; f < 3; ++f) {
    frames[f] = {read.id, Strand::forward, f, translate_frame(read.seq, f)};
    frames[f + 3] = {read.id, Strand::reverse, f, translate_frame(rc, f)};
  }
  return frames;
}

}  // namespace aakmer::translate
