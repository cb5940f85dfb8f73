#include "aakmer/kmer.hpp"

#include <array>

#include "aakmer/error.hpp"

namespace aakmer::kmer {

namespace {

constexpr std::array<int, 256> kRank = [] {
  std::array<int, 256> t{};
  t.fill(-1);
  for (std::size_t i = 0; i < kResidues.size(); ++i) {
    t[static_cast<unsigned char>(kResidues[i])] = static_cast<int>(i);
  }
  return t;
}();

}  // namespace

int residue_rank(char residue) { return kRank[static_cast<unsigned char>(residue)]; }

std::uint32_t vocabulary_size(int k) {
  if (k < 1 || k > kMaxK) {
    throw InputError("k must be in [1, " + std::to_string(kMaxK) + "], got " + std::to_string(k));
  }
  std::uint32_t v = 1;
  for (int i = 0; i < k; ++i) v *= 20;
  return v;
}

KmerCodec::KmerCodec(int k) : k_(k), vocabulary_(vocabulary_size(k)) {}

KmerId KmerCodec::encode(std::string_view word) const {
  if (word.size() != static_cast<std::size_t>(k_)) {
    throw InputError("k-mer '" + std::string(word) + "' has length " +
                     std::to_string(word.size()) + ", expected " + std::to_string(k_));
  }
  KmerId id = 0;
  for (char c : word) {
    const int r = residue_rank(c);
    if (r < 0) throw InputError("invalid residue '" + std::string(1, c) + "' in k-mer");
    id = id * 20 + static_cast<KmerId>(r);
  }
  return id;
}

std::string KmerCodec::decode(KmerId id) const {
  if (id >= vocabulary_) {
    throw InputError("k-mer id " + std::to_string(id) + " out of range [0, " +
                     std::to_string(vocabulary_) + ")");
  }
  std::string word(static_cast<std::size_t>(k_), 'A');
  for (int i = k_ - 1; i >= 0; --i) {
    word[static_cast<std::size_t>(i)] = kResidues[id % 20];
    id /= 20;
  }
  return word;
}

void KmerCodec::extract_into(std::string_view residues, std::vector<KmerId>& out) const {
  // Rolling code over the current run of valid residues.
  std::uint64_t id = 0;
  int run = 0;
  for (char c : residues) {
    const int r = residue_rank(c);
    if (r < 0) {
      run = 0;
      id = 0;
      continue;
    }
    id = (id * 20 + static_cast<std::uint64_t>(r)) % vocabulary_;
    if (++run >= k_) out.push_back(static_cast<KmerId>(id));
  }
}

std::vector<KmerId> KmerCodec::extract(std::string_view residues) const {
  std::vector<KmerId> out;
  if (residues.size() >= static_cast<std::size_t>(k_)) out.reserve(residues.size() - k_ + 1);
  extract_into(residues, out);
  return out;
}

}  // namespace aakmer::kmer
