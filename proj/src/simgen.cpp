#include "aakmer/simgen.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "aakmer/error.hpp"
#include "aakmer/kmer.hpp"
#include "aakmer/translate.hpp"

namespace aakmer::simgen {

namespace {

constexpr char kBases[4] = {'A', 'C', 'G', 'T'};

int base_index(char b) {
  switch (b) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

struct SynonymousCodons {
  std::vector<std::vector<std::string>> by_residue;  // in kmer::kResidues order
  std::vector<std::string> stops;
};

const SynonymousCodons& synonymous_codons() {
  static const SynonymousCodons table = [] {
    SynonymousCodons t;
    t.by_residue.resize(kmer::kResidues.size());
    const auto& code = translate::GeneticCode::standard();
    for (char b0 : kBases) {
      for (char b1 : kBases) {
        for (char b2 : kBases) {
          const std::string codon{b0, b1, b2};
          const char aa = code.translate(codon);
          if (aa == '*') {
            t.stops.push_back(codon);
          } else {
            t.by_residue[static_cast<std::size_t>(kmer::residue_rank(aa))].push_back(codon);
          }
        }
      }
    }
    return t;
  }();
  return table;
}

void check_rate(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InputError("substitution rate must lie in [0, 1]");
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("Rng::below(0)");
  // 2^64 mod n, computed without 128-bit arithmetic.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

SimOutput generate(const std::vector<Source>& sources, std::uint32_t read_length,
                   std::uint64_t seed) {
  if (read_length == 0) throw InputError("read length must be at least 1");
  Rng rng(seed);
  SimOutput out;
  std::uint64_t index = 0;

  for (const Source& src : sources) {
    check_rate(src.substitution_rate);
    if (src.read_count == 0) continue;
    // Cumulative count of valid start positions per record.
    std::vector<std::uint64_t> starts;
    std::uint64_t total = 0;
    for (const seqio::Read& rec : src.records) {
      if (rec.seq.size() < read_length) {
        throw InputError("genome record '" + rec.id + "' of " + src.organism + " is shorter (" +
                         std::to_string(rec.seq.size()) + ") than the read length " +
                         std::to_string(read_length));
      }
      total += rec.seq.size() - read_length + 1;
      starts.push_back(total);
    }
    if (total == 0) throw InputError("genome of " + src.organism + " has no records");

    for (std::uint64_t n = 0; n < src.read_count; ++n) {
      const bool reverse = rng.below(2) == 1;
      std::uint64_t pos = rng.below(total);
      std::size_t rec = 0;
      while (pos >= starts[rec]) ++rec;
      if (rec > 0) pos -= starts[rec - 1];

      std::string seq = src.records[rec].seq.substr(pos, read_length);
      if (reverse) seq = translate::reverse_complement(seq);
      if (src.substitution_rate > 0.0) {
        for (char& b : seq) {
          if (rng.unit() >= src.substitution_rate) continue;
          const int from = base_index(b);
          // One of the three other bases; an N becomes any base.
          const int pick = static_cast<int>(rng.below(from < 0 ? 4 : 3));
          b = from < 0 ? kBases[pick] : kBases[pick >= from ? pick + 1 : pick];
        }
      }

      char id[32];
      std::snprintf(id, sizeof id, "read_%07llu", static_cast<unsigned long long>(++index));
      out.truth.emplace_back(id, src.organism);
      out.reads.push_back({id, std::move(seq), std::string(read_length, seqio::kDefaultQuality)});
    }
  }
  return out;
}

SimOutput generate(const SimSpec& spec) {
  check_rate(spec.substitution_rate);
  std::vector<Source> sources;
  sources.push_back({std::string(kHostOrganism),
                     seqio::read_sequence_file(spec.host_genome, seqio::Alphabet::dna,
                                               seqio::DuplicatePolicy::suffix),
                     spec.host_read_count, spec.substitution_rate});
  for (const TargetSpec& t : spec.targets) {
    if (t.organism.empty() || t.organism == kHostOrganism) {
      throw InputError("target organism name must be non-empty and not '" +
                       std::string(kHostOrganism) + "'");
    }
    sources.push_back({t.organism,
                       seqio::read_sequence_file(t.genome, seqio::Alphabet::dna,
                                                 seqio::DuplicatePolicy::suffix),
                       t.read_count, t.substitution_rate.value_or(spec.substitution_rate)});
  }
  return generate(sources, spec.read_length, spec.seed);
}

void write_truth_tsv(const Truth& truth, std::ostream& out) {
  out << "read_id\torganism\n";
  for (const auto& [id, organism] : truth) out << id << '\t' << organism << '\n';
}

Truth read_truth_tsv(std::istream& in) {
  Truth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line == "read_id\torganism") continue;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw InputError("truth line " + std::to_string(line_no) + ": expected 2 columns");
    }
    truth.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return truth;
}

std::vector<seqio::Read> synth_genome(const std::string& prefix, const std::string& organism,
                                      std::uint64_t total_length, std::uint64_t seed) {
  constexpr std::uint64_t kMinCodons = 267;  // ~800 bases
  constexpr std::uint64_t kMaxCodons = 533;  // ~1600 bases
  const SynonymousCodons& codons = synonymous_codons();
  Rng rng(seed);
  std::vector<seqio::Read> records;
  std::uint64_t produced = 0;
  while (produced < total_length) {
    const std::uint64_t n = kMinCodons + rng.below(kMaxCodons - kMinCodons + 1);
    std::string seq = "ATG";
    seq.reserve(3 * n);
    for (std::uint64_t c = 2; c < n; ++c) {
      const auto& choices = codons.by_residue[rng.below(codons.by_residue.size())];
      seq += choices[rng.below(choices.size())];
    }
    seq += codons.stops[rng.below(codons.stops.size())];
    if (rng.below(2) == 1) seq = translate::reverse_complement(seq);
    char id[32];
    std::snprintf(id, sizeof id, "_%05zu|", records.size() + 1);
    records.push_back({prefix + id + organism, std::move(seq), std::nullopt});
    produced += 3 * n;
  }
  return records;
}

}  // namespace aakmer::simgen
