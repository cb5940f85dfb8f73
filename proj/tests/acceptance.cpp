// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aakmer/cli.hpp"
#include "aakmer/identify.hpp"
#include "aakmer/kernels.hpp"
#include "aakmer/metrics.hpp"
#include "aakmer/refdb.hpp"
#include "aakmer/simgen.hpp"
#include "aakmer/translate.hpp"
#include "oracles.hpp"
#include "random_data.hpp"

namespace fs = std::filesystem;
using namespace aakmer;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Accumulates failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- datasets --------------------------------------------------------------

constexpr std::uint64_t kHostLength = 1'000'000;
constexpr std::uint64_t kTargetLength = 100'000;
constexpr std::uint32_t kReadLength = 200;
constexpr std::uint64_t kHostReads = 10'000;
constexpr std::uint64_t kTargetReads = 1'000;
constexpr std::uint64_t kSimSeed = 7;
const std::vector<std::string> kSpiked{"target1", "target2", "target3"};
const std::vector<std::string> kMutated{"target4", "target5", "target6"};

struct Workspace {
  fs::path dir;
  std::string host_fasta;
  std::map<std::string, std::string> target_fasta;  // organism -> path

  Workspace() : dir(fs::temp_directory_path() / "aakmer_acceptance") {
    fs::remove_all(dir);
    fs::create_directories(dir);
    host_fasta = write_genome("host", kHostLength, 11);
    for (int i = 1; i <= 6; ++i) {
      const std::string name = "target" + std::to_string(i);
      target_fasta[name] = write_genome(name, kTargetLength, 100 + static_cast<std::uint64_t>(i));
    }
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string write_genome(const std::string& organism, std::uint64_t length, std::uint64_t seed) {
    const std::string path = (dir / (organism + ".fa")).string();
    std::ofstream out(path);
    seqio::write_fasta(simgen::synth_genome(organism, organism, length, seed), out);
    return path;
  }

  std::vector<std::string> reference_paths() const {
    std::vector<std::string> paths{host_fasta};
    for (const auto& [name, path] : target_fasta) paths.push_back(path);
    return paths;
  }

  refdb::ReferenceDB build_db() const {
    std::vector<seqio::Read> refs;
    for (const std::string& path : reference_paths()) {
      auto recs = seqio::read_sequence_file(path, seqio::Alphabet::dna);
      std::move(recs.begin(), recs.end(), std::back_inserter(refs));
    }
    return refdb::build(refs, {}, refdb::InputKind::dna);
  }

  simgen::SimOutput simulate(bool with_mutated) const {
    simgen::SimSpec spec;
    spec.host_genome = host_fasta;
    for (const std::string& t : kSpiked) spec.targets.push_back({target_fasta.at(t), t, kTargetReads, std::nullopt});
    if (with_mutated) {
      for (const std::string& t : kMutated) spec.targets.push_back({target_fasta.at(t), t, kTargetReads, 0.05});
    }
    spec.read_length = kReadLength;
    spec.substitution_rate = 0.01;
    spec.host_read_count = kHostReads;
    spec.seed = kSimSeed;
    return simgen::generate(spec);
  }
};

struct RunResult {
  std::vector<identify::ReadCall> calls;
  metrics::EvalResult eval;
  std::uint64_t comparisons = 0;
};

RunResult identify_run(const refdb::ReferenceDB& db, const simgen::SimOutput& sim) {
  const kmer::KmerCodec codec(static_cast<int>(db.meta.k));
  const AssocArray sample = from_reads(sim.reads, codec);
  const MatchMatrix scores = identify::score_sample(sample, db);
  const identify::Thresholds thresholds;
  RunResult r;
  r.calls = identify::call_reads(scores, db, thresholds);
  const auto reports = identify::aggregate(r.calls, thresholds.min_reads);
  r.eval = metrics::evaluate(r.calls, sim.truth, reports);
  r.comparisons = scores.comparisons;
  return r;
}

refdb::ReferenceDB filtered(const refdb::ReferenceDB& db, double bottom, double top) {
  degree::FilterSpec spec;
  spec.bottom = bottom;
  spec.top = top;
  return refdb::apply_filter(db, spec);
}

double recall(const RunResult& r, const std::string& organism) {
  const auto it = r.eval.per_organism.find(organism);
  return it == r.eval.per_organism.end() ? 0.0 : it->second.recall;
}

// ---- criteria --------------------------------------------------------------

void kmer_roundtrip(Check& c) {
  const auto start = Clock::now();
  const kmer::KmerCodec codec(4);
  std::uint64_t failures = 0;
  c.require(codec.vocabulary() == 160'000, "vocabulary is not 160000");
  for (KmerId id = 0; id < codec.vocabulary(); ++id) {
    const std::string word = codec.decode(id);
    if (codec.encode(word) != id || oracle::kmer_value(word) != id) ++failures;
  }
  const double t = seconds_since(start);
  c.require(failures == 0, std::to_string(failures) + " roundtrip failures");
  c.require(t < 1.0, "took " + fmt("%.3f s", t));
  c.note(fmt("%.3f s", t));
}

void translation_oracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> length(1, 500);
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string dna = oracle::random_dna(rng, length(rng), i % 4 == 0);
    const auto frames = translate::six_frame({"s", dna, std::nullopt});
    const auto expected = oracle::six_frames(dna);
    for (std::size_t f = 0; f < 6; ++f) {
      if (frames[f].residues != expected[f]) ++mismatches;
    }
  }
  const double t = seconds_since(start);
  c.require(mismatches == 0, std::to_string(mismatches) + " frame mismatches");
  c.require(t < 5.0, "took " + fmt("%.3f s", t));
  c.note(fmt("%.3f s", t));
}

oracle::Dense scores_dense(const MatchMatrix& m, std::size_t cols, bool shared) {
  oracle::Dense d(m.rows.size(), std::vector<std::uint64_t>(cols, 0));
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (const MatchEntry& e : m.rows[i]) d[i][e.ref] = shared ? e.shared : e.score;
  }
  return d;
}

void product_oracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> rows(0, 100);
  std::uniform_real_distribution<double> density(0.005, 0.2);
  const std::uint32_t columns = kmer::vocabulary_size(2);
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const AssocArray a = testdata::random_array(rng, rows(rng), columns, density(rng), "a");
    const AssocArray b = testdata::random_array(rng, rows(rng), columns, density(rng), "b");
    const oracle::Dense da = testdata::to_dense(a);
    const oracle::Dense db = testdata::to_dense(b);
    const MatchMatrix bin = multiply_transpose(a, b, Weighting::binary);
    const MatchMatrix cnt = multiply_transpose(a, b, Weighting::counts);
    const oracle::Dense expected_bin = oracle::dense_product(da, db, true);
    if (scores_dense(bin, b.num_rows(), false) != expected_bin) ++mismatches;
    if (scores_dense(cnt, b.num_rows(), false) != oracle::dense_product(da, db, false)) ++mismatches;
    if (scores_dense(cnt, b.num_rows(), true) != expected_bin) ++mismatches;
  }
  const double t = seconds_since(start);
  c.require(mismatches == 0, std::to_string(mismatches) + " product mismatches");
  c.require(t < 30.0, "took " + fmt("%.3f s", t));
  c.note(fmt("%.3f s", t));
}

void merge_law(Check& c) {
  std::mt19937_64 rng(5);
  const kmer::KmerCodec codec;
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    const auto reads = testdata::random_reads(rng, 1 + rng() % 200, 1, 300);
    const AssocArray sequential = from_reads_serial(reads, codec);
    const std::size_t parts = 1 + rng() % 8;
    AssocArray merged(codec.vocabulary());
    const std::size_t step = (reads.size() + parts - 1) / parts;
    for (std::size_t lo = 0; lo < reads.size(); lo += step) {
      const std::size_t n = std::min(step, reads.size() - lo);
      merged.merge(from_reads(std::span(reads).subspan(lo, n), codec));
    }
    if (!(merged == sequential)) ++failures;
  }
  c.require(failures == 0, std::to_string(failures) + " of 50 read sets differ");
}

struct DatasetA {
  simgen::SimOutput sim;
  refdb::ReferenceDB db;
  RunResult full;
  RunResult bottom10;
};

void desk_identification(Check& c, const Workspace& ws, DatasetA& a) {
  kernels::set_threads(1);
  const auto start = Clock::now();
  a.sim = ws.simulate(false);
  a.db = ws.build_db();
  a.full = identify_run(a.db, a.sim);
  const double t = seconds_since(start);
  kernels::set_threads(0);

  std::uint64_t host_reads = 0;
  std::uint64_t host_to_target = 0;
  std::map<std::string, std::string> truth(a.sim.truth.begin(), a.sim.truth.end());
  for (const auto& call : a.full.calls) {
    if (truth.at(call.read_id) != "host") continue;
    ++host_reads;
    if (call.classified() && call.organism != "host") ++host_to_target;
  }
  const double host_leak = static_cast<double>(host_to_target) / static_cast<double>(host_reads);
  for (const std::string& t_name : kSpiked) {
    const double r = recall(a.full, t_name);
    c.require(r >= 0.95, t_name + " recall " + fmt("%.4f", r));
    c.require(a.full.eval.detected.count(t_name) == 1, t_name + " not detected");
    c.note(t_name + " recall " + fmt("%.4f", r));
  }
  c.require(host_leak <= 0.01, "host reads called to a target: " + fmt("%.4f", host_leak));
  c.require(a.full.eval.fp_organisms.empty(), "false-positive organisms present");
  c.require(t < 120.0, "took " + fmt("%.1f s", t));
  c.note("host->target " + fmt("%.4f", host_leak));
  c.note(fmt("%.1f s single-threaded", t));
}

void subsampling(Check& c, DatasetA& a) {
  a.bottom10 = identify_run(filtered(a.db, 0.10, 0.0), a.sim);
  for (const std::string& t : kSpiked) {
    const double full = recall(a.full, t);
    const double sub = recall(a.bottom10, t);
    c.require(a.bottom10.eval.detected.count(t) == 1, t + " not detected");
    c.require(sub >= full - 0.15, t + " recall " + fmt("%.4f", sub) + " vs full " + fmt("%.4f", full));
    c.note(t + " " + fmt("%.4f", sub));
  }
  c.require(a.bottom10.eval.fp_organisms.empty(), "false-positive organisms present");
}

void speedup(Check& c, const DatasetA& a) {
  const double ratio = static_cast<double>(a.bottom10.comparisons) / static_cast<double>(a.full.comparisons);
  c.require(ratio <= 0.25, "counter ratio " + fmt("%.4f", ratio));
  c.note("counter ratio " + fmt("%.4f", ratio) + " (" + std::to_string(a.bottom10.comparisons) + " / " +
         std::to_string(a.full.comparisons) + ")");
}

void two_sided(Check& c, const Workspace& ws, const DatasetA& a) {
  const simgen::SimOutput sim = ws.simulate(true);
  const RunResult bottom = identify_run(filtered(a.db, 0.15, 0.0), sim);
  const RunResult both = identify_run(filtered(a.db, 0.15, 0.15), sim);
  for (const auto* group : {&kSpiked, &kMutated}) {
    for (const std::string& t : *group) {
      c.require(bottom.eval.detected.count(t) == 1, t + " not detected by bottom-only filter");
      c.require(both.eval.detected.count(t) == 1, t + " not detected by two-sided filter");
    }
  }
  for (const std::string& t : kMutated) {
    const double rb = recall(bottom, t);
    const double r2 = recall(both, t);
    c.require(r2 >= rb, t + " two-sided recall " + fmt("%.4f", r2) + " < bottom-only " + fmt("%.4f", rb));
    c.note(t + " " + fmt("%.4f", rb) + " -> " + fmt("%.4f", r2));
  }
}

void persistence(Check& c, const Workspace& ws, const DatasetA& a) {
  const std::string path = (ws.dir / "a.db").string();
  refdb::save(a.db, path);
  const refdb::ReferenceDB loaded = refdb::load(path);
  c.require(loaded == a.db, "loaded db differs from saved db");
  const std::string first = slurp(path);
  refdb::save(loaded, path);
  c.require(slurp(path) == first, "resaving a loaded db changed its bytes");

  const auto bytes = refdb::serialize(ws.build_db());
  c.require(bytes == refdb::serialize(ws.build_db()), "two builds serialize differently");
  c.require(std::string(bytes.begin(), bytes.end()) == first, "fresh build differs from saved file");

  const std::string fpath = (ws.dir / "f.db").string();
  const auto f = filtered(a.db, 0.10, 0.0);
  refdb::save(f, fpath);
  c.require(refdb::load(fpath) == f, "filtered db does not roundtrip");
  c.note(std::to_string(first.size()) + " bytes");
}

int cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::fprintf(stderr, "cli failure: %s\n", err.str().c_str());
  return code;
}

bool pipeline(const Workspace& ws, const fs::path& dir, const std::string& threads) {
  fs::create_directories(dir);
  const auto p = [&](const std::string& leaf) { return (dir / leaf).string(); };
  std::string refs;
  for (const std::string& r : ws.reference_paths()) refs += (refs.empty() ? "" : ",") + r;
  std::string targets;
  for (const std::string& t : kSpiked) {
    targets += (targets.empty() ? "" : ",") + ws.target_fasta.at(t) + ":" + t + ":" + std::to_string(kTargetReads);
  }
  const std::vector<std::string> common{"--threads", threads, "--seed", std::to_string(kSimSeed)};
  const auto with = [&](std::vector<std::string> tail) {
    std::vector<std::string> args = common;
    args.insert(args.end(), tail.begin(), tail.end());
    return cli(args);
  };
  return with({"simulate", "--host", ws.host_fasta, "--target", targets, "--host-reads", std::to_string(kHostReads),
               "--read-length", std::to_string(kReadLength), "--sub-rate", "0.01", "--out-fastq", p("reads.fq"),
               "--out-truth", p("truth.tsv")}) == 0 &&
         with({"build-ref", "-i", refs, "-o", p("ref.db")}) == 0 &&
         with({"filter", "--db", p("ref.db"), "--bottom", "0.10", "-o", p("low.db")}) == 0 &&
         with({"stats", "--db", p("ref.db"), "-o", p("hist.tsv")}) == 0 &&
         with({"identify", "--db", p("ref.db"), "--reads", p("reads.fq"), "--calls", p("full.calls.tsv"),
               "--report", p("full.report.tsv"), "--work", p("full.work.tsv")}) == 0 &&
         with({"identify", "--db", p("low.db"), "--reads", p("reads.fq"), "--calls", p("low.calls.tsv"),
               "--report", p("low.report.tsv"), "--work", p("low.work.tsv")}) == 0 &&
         with({"eval", "--calls", p("full.calls.tsv"), "--report", p("full.report.tsv"), "--truth", p("truth.tsv"),
               "-o", p("eval.tsv"), "--work", p("full.work.tsv"), "--vs-calls", p("low.calls.tsv"), "--vs-report",
               p("low.report.tsv"), "--vs-work", p("low.work.tsv"), "--compare-out", p("compare.tsv")}) == 0;
}

void determinism(Check& c, const Workspace& ws) {
  const fs::path one = ws.dir / "run_t1";
  const fs::path eight = ws.dir / "run_t8";
  c.require(pipeline(ws, one, "1"), "pipeline with --threads 1 failed");
  c.require(pipeline(ws, eight, "8"), "pipeline with --threads 8 failed");
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(one)) {
    const fs::path name = entry.path().filename();
    c.require(fs::exists(eight / name), name.string() + " missing from second run");
    c.require(slurp(entry.path()) == slurp(eight / name), name.string() + " differs between runs");
    ++compared;
  }
  c.require(compared >= 13, "only " + std::to_string(compared) + " outputs produced");
  c.note(std::to_string(compared) + " files byte-identical");
}

}  // namespace

int main() {
  int failed = 0;
  const auto report = [&](int id, const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    const auto start = Clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double t = seconds_since(start);
    std::string detail;
    for (const auto& n : c.notes) detail += (detail.empty() ? "" : "; ") + n;
    for (const auto& f : c.failures) detail += (detail.empty() ? "" : "; ") + f;
    std::printf("[%s] %2d %-28s %7.2fs  %s\n", c.failures.empty() ? "PASS" : "FAIL", id, name.c_str(), t,
                detail.c_str());
    std::fflush(stdout);
    if (!c.failures.empty()) ++failed;
  };

  report(1, "kmer roundtrip", kmer_roundtrip);
  report(2, "translation oracle", translation_oracle);
  report(3, "sparse product oracle", product_oracle);
  report(4, "merge law", merge_law);

  Workspace ws;
  DatasetA a;
  report(5, "desk-scale identification", [&](Check& c) { desk_identification(c, ws, a); });
  report(6, "bottom-10% fidelity", [&](Check& c) { subsampling(c, a); });
  report(7, "comparison counter", [&](Check& c) { speedup(c, a); });
  report(8, "two-sided filter", [&](Check& c) { two_sided(c, ws, a); });
  report(9, "persistence", [&](Check& c) { persistence(c, ws, a); });
  report(10, "end-to-end determinism", [&](Check& c) { determinism(c, ws); });

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
