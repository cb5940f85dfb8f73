#include "aakmer/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "aakmer/error.hpp"
#include "aakmer/identify.hpp"
#include "aakmer/kernels.hpp"
#include "aakmer/metrics.hpp"
#include "aakmer/refdb.hpp"
#include "aakmer/seqio.hpp"
#include "aakmer/simgen.hpp"

namespace aakmer::cli {

namespace {

using degree::FilterSpec;

const std::map<std::string, DegreeMode> kDegreeModes{{"presence", DegreeMode::presence},
                                                      {"occurrence", DegreeMode::occurrence}};
const std::map<std::string, degree::FractionBasis> kBases{
    {"distinct", degree::FractionBasis::distinct}, {"mass", degree::FractionBasis::mass}};
const std::map<std::string, Weighting> kWeightings{{"binary", Weighting::binary},
                                                   {"counts", Weighting::counts}};
const std::map<std::string, degree::BinPolicy> kBinPolicies{{"log2", degree::BinPolicy::log2},
                                                            {"unit", degree::BinPolicy::unit}};
const std::map<std::string, refdb::InputKind> kKinds{{"dna", refdb::InputKind::dna},
                                                     {"protein", refdb::InputKind::protein}};
const std::map<std::string, seqio::DuplicatePolicy> kDedup{
    {"reject", seqio::DuplicatePolicy::reject}, {"suffix", seqio::DuplicatePolicy::suffix}};

struct RunConfig {
  int threads = 0;
  std::uint64_t seed = 1;
  std::string config;

  // build-ref
  std::vector<std::string> ref_inputs;
  std::string organisms;
  refdb::InputKind kind = refdb::InputKind::dna;
  int k = kmer::kDefaultK;

  // shared paths
  std::string db;
  std::string out;

  // stats
  degree::BinPolicy bins = degree::BinPolicy::log2;

  // filter
  FilterSpec filter;

  // identify
  std::string reads;
  std::string calls;
  std::string report;
  std::string work;
  Weighting weighting = Weighting::binary;
  identify::Thresholds thresholds;
  seqio::DuplicatePolicy dedup = seqio::DuplicatePolicy::reject;

  // simulate
  simgen::SimSpec sim;
  std::vector<std::string> targets;
  std::string out_fastq;
  std::string out_truth;

  // eval
  std::string truth;
  std::string vs_calls;
  std::string vs_report;
  std::string vs_work;
  std::string compare_out;

  // synth-genome
  std::string organism;
  std::string prefix;
  std::uint64_t length = 100000;
};

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  auto out = seqio::open_output(path);
  fn(*out);
  out->flush();
  if (!*out) throw Error("write to '" + path + "' failed");
}

template <typename Fn>
auto with_input(const std::string& path, Fn&& fn) {
  auto in = seqio::open_input(path);
  return fn(*in);
}

std::uint64_t read_work(const std::string& path) {
  return with_input(path, [&](std::istream& in) {
    std::string key;
    std::uint64_t value = 0;
    while (in >> key >> value) {
      if (key == "comparisons") return value;
    }
    throw InputError(path + ": no 'comparisons' entry");
  });
}

simgen::TargetSpec parse_target(const std::string& text) {
  // path:organism:count[:rate]
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() < 3 || parts.size() > 4) {
    throw InputError("--target '" + text + "' must be path:organism:count[:rate]");
  }
  simgen::TargetSpec t;
  t.genome = parts[0];
  t.organism = parts[1];
  try {
    t.read_count = std::stoull(parts[2]);
    if (parts.size() == 4) t.substitution_rate = std::stod(parts[3]);
  } catch (const std::logic_error&) {
    throw InputError("--target '" + text + "': bad number");
  }
  return t;
}

void cmd_build_ref(const RunConfig& cfg, std::ostream& out) {
  refdb::OrganismMap organisms;
  if (!cfg.organisms.empty()) {
    organisms = with_input(cfg.organisms, [](std::istream& in) { return refdb::read_organism_tsv(in); });
  }
  const seqio::Alphabet alphabet =
      cfg.kind == refdb::InputKind::dna ? seqio::Alphabet::dna : seqio::Alphabet::protein;
  std::vector<seqio::Read> references;
  // Per-file readers catch duplicates within a file; this one across files.
  seqio::IdRegistry ids(cfg.dedup);
  for (const std::string& path : cfg.ref_inputs) {
    for (seqio::Read& r : seqio::read_sequence_file(path, alphabet, cfg.dedup)) {
      r.id = ids.admit(std::move(r.id), 0);
      references.push_back(std::move(r));
    }
  }
  const refdb::ReferenceDB db = refdb::build(references, organisms, cfg.kind, cfg.k);
  refdb::save(db, cfg.out);
  out << "references: " << db.array.num_rows() << ", organisms: " << db.organisms.size()
      << ", distinct k-mers: " << db.degrees.size() << '\n';
}

void cmd_stats(const RunConfig& cfg) {
  const refdb::ReferenceDB db = refdb::load(cfg.db);
  const DegreeTable table = cfg.filter.mode == DegreeMode::presence
                                ? db.degrees
                                : column_sums(db.array, DegreeMode::occurrence);
  with_output(cfg.out.empty() ? std::string("-") : cfg.out, [&](std::ostream& o) {
    degree::write_histogram_tsv(degree::histogram(table, cfg.bins), o);
  });
}

void cmd_filter(const RunConfig& cfg, std::ostream& out) {
  const refdb::ReferenceDB db = refdb::load(cfg.db);
  const refdb::ReferenceDB filtered = refdb::apply_filter(db, cfg.filter);
  refdb::save(filtered, cfg.out);
  out << "kept k-mers: " << filtered.keep->size() << " of " << db.degrees.size()
      << ", cells: " << filtered.array.nnz() << " of " << db.array.nnz() << '\n';
}

void cmd_identify(const RunConfig& cfg, std::ostream& out) {
  const refdb::ReferenceDB db = refdb::load(cfg.db);
  const std::vector<seqio::Read> reads = with_input(cfg.reads, [&](std::istream& in) {
    return seqio::parse_sequences(in, seqio::Alphabet::dna, cfg.dedup);
  });
  const kmer::KmerCodec codec(static_cast<int>(db.meta.k));
  const AssocArray sample = from_reads(reads, codec);
  const MatchMatrix scores = identify::score_sample(sample, db, cfg.weighting);
  const std::vector<identify::ReadCall> calls = identify::call_reads(scores, db, cfg.thresholds);
  const auto reports = identify::aggregate(calls, cfg.thresholds.min_reads);

  with_output(cfg.calls, [&](std::ostream& o) { identify::write_calls_tsv(calls, o); });
  with_output(cfg.report, [&](std::ostream& o) { identify::write_report_tsv(reports, o); });
  if (!cfg.work.empty()) {
    with_output(cfg.work, [&](std::ostream& o) { o << "comparisons\t" << scores.comparisons << '\n'; });
  }
  if (cfg.calls != "-" && cfg.report != "-") {
    out << "reads: " << reads.size() << ", comparisons: " << scores.comparisons << '\n';
  }
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  simgen::SimSpec spec = cfg.sim;
  spec.seed = cfg.seed;
  for (const std::string& t : cfg.targets) spec.targets.push_back(parse_target(t));
  const simgen::SimOutput sim = simgen::generate(spec);
  with_output(cfg.out_fastq, [&](std::ostream& o) { seqio::write_fastq(sim.reads, o); });
  with_output(cfg.out_truth, [&](std::ostream& o) { simgen::write_truth_tsv(sim.truth, o); });
  if (cfg.out_fastq != "-" && cfg.out_truth != "-") out << "reads: " << sim.reads.size() << '\n';
}

metrics::EvalResult eval_one(const std::string& calls_path, const std::string& report_path,
                             const simgen::Truth& truth) {
  const auto calls = with_input(calls_path, [](std::istream& in) { return identify::read_calls_tsv(in); });
  const auto reports =
      with_input(report_path, [](std::istream& in) { return identify::read_report_tsv(in); });
  return metrics::evaluate(calls, truth, reports);
}

void cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const simgen::Truth truth =
      with_input(cfg.truth, [](std::istream& in) { return simgen::read_truth_tsv(in); });
  const metrics::EvalResult result = eval_one(cfg.calls, cfg.report, truth);
  if (!cfg.out.empty()) with_output(cfg.out, [&](std::ostream& o) { metrics::write_eval_tsv(result, o); });
  if (cfg.out != "-") metrics::write_summary(result, out);

  if (cfg.vs_calls.empty()) return;
  if (cfg.vs_report.empty() || cfg.work.empty() || cfg.vs_work.empty()) {
    throw InputError("--vs-calls needs --vs-report, --work and --vs-work");
  }
  const metrics::EvalResult other = eval_one(cfg.vs_calls, cfg.vs_report, truth);
  const metrics::RunComparison cmp =
      metrics::compare_runs(result, read_work(cfg.work), other, read_work(cfg.vs_work));
  with_output(cfg.compare_out.empty() ? std::string("-") : cfg.compare_out,
              [&](std::ostream& o) { metrics::write_comparison_tsv(cmp, o); });
}

void cmd_synth_genome(const RunConfig& cfg) {
  const auto records = simgen::synth_genome(cfg.prefix.empty() ? cfg.organism : cfg.prefix,
                                            cfg.organism, cfg.length, cfg.seed);
  with_output(cfg.out, [&](std::ostream& o) { seqio::write_fasta(records, o); });
}

// Flat key=value lines; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path + " line " + std::to_string(line_no) + ": expected key=value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  for (const std::string& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Appends config-file values for every option not given on the command line.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  CLI::App* sub = nullptr;
  for (const std::string& a : args) {
    for (CLI::App* s : app.get_subcommands({})) {
      if (s->get_name() == a) sub = s;
    }
    if (sub != nullptr) break;
  }
  for (const auto& [key, value] : read_config(path)) {
    const std::string flag = "--" + key;
    if (flag_given(args, flag)) continue;
    const bool known = app.get_option_no_throw(flag) != nullptr ||
                       (sub != nullptr && sub->get_option_no_throw(flag) != nullptr);
    if (!known) {
      if (sub == nullptr) continue;
      throw InputError(path + ": unknown key '" + key + "'");
    }
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Protein-space 4-mer organism identification"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads, "worker threads (0 = OpenMP default)")
      ->check(CLI::Range(0, 4096));
  app.add_option("--seed", cfg.seed, "seed for every random draw");
  app.add_option("--config", cfg.config, "flat key=value file; flags take precedence");

  const auto degree_mode = [&](CLI::App* sub) {
    sub->add_option("--degree-mode", cfg.filter.mode, "presence or occurrence")
        ->transform(CLI::CheckedTransformer(kDegreeModes));
  };

  CLI::App* build = app.add_subcommand("build-ref", "build a reference db from FASTA");
  build->add_option("-i,--input", cfg.ref_inputs, "reference FASTA files")->required()->delimiter(',');
  build->add_option("--organisms", cfg.organisms, "TSV of reference_id, organism");
  build->add_option("--kind", cfg.kind, "dna or protein")->transform(CLI::CheckedTransformer(kKinds));
  build->add_option("--k", cfg.k, "k-mer length")->check(CLI::Range(1, kmer::kMaxK));
  build->add_option("--dedup", cfg.dedup, "reject or suffix")->transform(CLI::CheckedTransformer(kDedup));
  build->add_option("-o,--out", cfg.out, "output db file")->required();

  CLI::App* stats = app.add_subcommand("stats", "degree histogram of a reference db as TSV");
  stats->add_option("--db", cfg.db, "reference db")->required();
  stats->add_option("-o,--out", cfg.out, "output TSV ('-' for stdout)")->capture_default_str();
  stats->add_option("--bins", cfg.bins, "log2 or unit")->transform(CLI::CheckedTransformer(kBinPolicies));
  degree_mode(stats);

  CLI::App* filter = app.add_subcommand("filter", "keep k-mers in degree-percentile bands");
  filter->add_option("--db", cfg.db, "reference db")->required();
  filter->add_option("-o,--out", cfg.out, "output db file")->required();
  filter->add_option("--bottom", cfg.filter.bottom, "lowest-degree fraction to keep")
      ->check(CLI::Range(0.0, 1.0));
  filter->add_option("--top", cfg.filter.top, "highest-degree fraction to keep")
      ->check(CLI::Range(0.0, 1.0));
  filter->add_option("--basis", cfg.filter.basis, "distinct or mass")
      ->transform(CLI::CheckedTransformer(kBases));
  degree_mode(filter);

  CLI::App* ident = app.add_subcommand("identify", "call organisms for sample reads");
  ident->add_option("--db", cfg.db, "reference db")->required();
  ident->add_option("--reads", cfg.reads, "FASTA/FASTQ, optionally gzipped ('-' for stdin)")->required();
  ident->add_option("--calls", cfg.calls, "per-read calls TSV")->required();
  ident->add_option("--report", cfg.report, "per-organism report TSV")->required();
  ident->add_option("--work", cfg.work, "write the comparison counter here");
  ident->add_option("--weighting", cfg.weighting, "binary or counts")
      ->transform(CLI::CheckedTransformer(kWeightings));
  ident->add_option("--min-shared", cfg.thresholds.min_shared, "minimum shared k-mers")
      ->check(CLI::NonNegativeNumber);
  ident->add_option("--min-margin", cfg.thresholds.min_margin, "minimum score margin")
      ->check(CLI::NonNegativeNumber);
  ident->add_option("--min-reads", cfg.thresholds.min_reads, "reads needed to report detection");
  ident->add_option("--dedup", cfg.dedup, "reject or suffix")->transform(CLI::CheckedTransformer(kDedup));

  CLI::App* sim = app.add_subcommand("simulate", "generate a spiked read set with truth labels");
  sim->add_option("--host", cfg.sim.host_genome, "host genome FASTA")->required();
  sim->add_option("--target", cfg.targets, "path:organism:count[:rate], repeatable")->delimiter(',');
  sim->add_option("--read-length", cfg.sim.read_length, "bases per read")->check(CLI::Range(1U, 1U << 20));
  sim->add_option("--sub-rate", cfg.sim.substitution_rate, "per-base substitution probability")
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--host-reads", cfg.sim.host_read_count, "number of host reads");
  sim->add_option("--out-fastq", cfg.out_fastq, "output FASTQ")->required();
  sim->add_option("--out-truth", cfg.out_truth, "output truth TSV")->required();

  CLI::App* eval = app.add_subcommand("eval", "score calls against simulation truth");
  eval->add_option("--calls", cfg.calls, "calls TSV")->required();
  eval->add_option("--report", cfg.report, "report TSV")->required();
  eval->add_option("--truth", cfg.truth, "truth TSV")->required();
  eval->add_option("-o,--out", cfg.out, "evaluation TSV");
  eval->add_option("--work", cfg.work, "counter file of this run");
  eval->add_option("--vs-calls", cfg.vs_calls, "calls TSV of a filtered run to compare");
  eval->add_option("--vs-report", cfg.vs_report, "report TSV of the filtered run");
  eval->add_option("--vs-work", cfg.vs_work, "counter file of the filtered run");
  eval->add_option("--compare-out", cfg.compare_out, "comparison TSV ('-' default)");

  CLI::App* synth = app.add_subcommand("synth-genome", "write a random multi-record genome FASTA");
  synth->add_option("--organism", cfg.organism, "organism name")->required();
  synth->add_option("--prefix", cfg.prefix, "record id prefix (default: organism)");
  synth->add_option("--length", cfg.length, "total bases")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 34));
  synth->add_option("-o,--out", cfg.out, "output FASTA")->required();

  try {
    std::vector<std::string> args = apply_config(app, raw_args);
    // CLI11 consumes the vector from the back.
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    kernels::set_threads(cfg.threads);
    if (*build) {
      cmd_build_ref(cfg, out);
    } else if (*stats) {
      cmd_stats(cfg);
    } else if (*filter) {
      cfg.filter.validate();
      cmd_filter(cfg, out);
    } else if (*ident) {
      cmd_identify(cfg, out);
    } else if (*sim) {
      cmd_simulate(cfg, out);
    } else if (*eval) {
      cmd_eval(cfg, out);
    } else if (*synth) {
      cmd_synth_genome(cfg);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace aakmer::cli
