#include "aakmer/identify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <istream>
#include <ostream>

#include "aakmer/error.hpp"

namespace aakmer::identify {

namespace {

std::string format_margin(double margin) {
  if (std::isinf(margin)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", margin);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

template <typename Fn>
void for_each_row(std::istream& in, std::string_view header, std::size_t columns, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != header) throw InputError("unexpected TSV header '" + line + "'");
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != columns) {
      throw InputError("TSV line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns) + " columns");
    }
    try {
      fn(fields);
    } catch (const std::logic_error&) {
      throw InputError("TSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
}

constexpr std::string_view kCallsHeader = "read_id\torganism\tscore\tshared_kmers\tmargin";
constexpr std::string_view kReportHeader = "organism\treads_assigned\tfraction\tdetected";

}  // namespace

MatchMatrix score_sample(const AssocArray& sample, const refdb::ReferenceDB& db,
                         Weighting weighting) {
  if (sample.columns() != db.array.columns()) {
    throw InputError("sample k-mer space (" + std::to_string(sample.columns()) +
                     " columns) does not match reference db (k=" + std::to_string(db.meta.k) + ")");
  }
  if (db.keep) return multiply_transpose(select_columns(sample, *db.keep), db.array, weighting);
  return multiply_transpose(sample, db.array, weighting);
}

ReadCall call_read(std::string read_id, std::span<const MatchEntry> row,
                   const refdb::ReferenceDB& db, const Thresholds& thresholds) {
  ReadCall call;
  call.read_id = std::move(read_id);
  call.organism = kUnclassified;
  if (row.empty()) return call;

  // Best reference per organism: highest score, then most shared k-mers, then
  // lowest row index (row entries arrive in ascending row order).
  struct Best {
    const MatchEntry* entry = nullptr;
  };
  std::map<std::uint32_t, Best> per_organism;
  for (const MatchEntry& e : row) {
    Best& b = per_organism[db.organism_index[e.ref]];
    if (b.entry == nullptr || e.score > b.entry->score ||
        (e.score == b.entry->score && e.shared > b.entry->shared)) {
      b.entry = &e;
    }
  }

  std::uint32_t top_organism = 0;
  const MatchEntry* top = nullptr;
  std::uint64_t runner_up = 0;
  bool has_runner_up = false;
  bool tied = false;
  for (const auto& [org, b] : per_organism) {
    if (top == nullptr || b.entry->score > top->score) {
      if (top != nullptr) {
        runner_up = top->score;
        has_runner_up = true;
      }
      top = b.entry;
      top_organism = org;
      tied = false;
    } else {
      if (b.entry->score == top->score) tied = true;
      if (!has_runner_up || b.entry->score > runner_up) runner_up = b.entry->score;
      has_runner_up = true;
    }
  }

  call.score = top->score;
  call.shared_kmers = top->shared;
  call.margin = has_runner_up ? static_cast<double>(top->score - runner_up)
                              : std::numeric_limits<double>::infinity();
  if (tied || call.shared_kmers < thresholds.min_shared || call.margin < thresholds.min_margin) {
    return call;
  }
  call.organism = db.organisms[top_organism];
  return call;
}

std::vector<ReadCall> call_reads(const MatchMatrix& scores, const refdb::ReferenceDB& db,
                                 const Thresholds& thresholds) {
  std::vector<ReadCall> calls;
  calls.reserve(scores.rows.size());
  for (std::size_t i = 0; i < scores.rows.size(); ++i) {
    calls.push_back(call_read(scores.sample_labels[i], scores.rows[i], db, thresholds));
  }
  return calls;
}

std::vector<OrganismReport> aggregate(std::span<const ReadCall> calls, std::uint32_t min_reads) {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t classified = 0;
  for (const ReadCall& c : calls) {
    if (!c.classified()) continue;
    ++counts[c.organism];
    ++classified;
  }
  std::vector<OrganismReport> reports;
  for (const auto& [organism, n] : counts) {
    reports.push_back({organism, n, static_cast<double>(n) / static_cast<double>(classified),
                       n >= min_reads});
  }
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    return a.reads_assigned > b.reads_assigned;
  });
  return reports;
}

void write_calls_tsv(std::span<const ReadCall> calls, std::ostream& out) {
  out << kCallsHeader << '\n';
  for (const ReadCall& c : calls) {
    out << c.read_id << '\t' << c.organism << '\t' << c.score << '\t' << c.shared_kmers << '\t'
        << format_margin(c.margin) << '\n';
  }
}

void write_report_tsv(std::span<const OrganismReport> reports, std::ostream& out) {
  out << kReportHeader << '\n';
  char fraction[32];
  for (const OrganismReport& r : reports) {
    std::snprintf(fraction, sizeof fraction, "%.6f", r.fraction_of_classified);
    out << r.organism << '\t' << r.reads_assigned << '\t' << fraction << '\t'
        << (r.detected ? "yes" : "no") << '\n';
  }
}

std::vector<ReadCall> read_calls_tsv(std::istream& in) {
  std::vector<ReadCall> calls;
  for_each_row(in, kCallsHeader, 5, [&](std::vector<std::string>& f) {
    ReadCall c;
    c.read_id = std::move(f[0]);
    c.organism = std::move(f[1]);
    c.score = std::stoull(f[2]);
    c.shared_kmers = static_cast<std::uint32_t>(std::stoul(f[3]));
    c.margin = f[4] == "inf" ? std::numeric_limits<double>::infinity() : std::stod(f[4]);
    calls.push_back(std::move(c));
  });
  return calls;
}

std::vector<OrganismReport> read_report_tsv(std::istream& in) {
  std::vector<OrganismReport> reports;
  for_each_row(in, kReportHeader, 4, [&](std::vector<std::string>& f) {
    if (f[3] != "yes" && f[3] != "no") throw std::invalid_argument("detected");
    reports.push_back({std::move(f[0]), std::stoull(f[1]), std::stod(f[2]), f[3] == "yes"});
  });
  return reports;
}

}  // namespace aakmer::identify
