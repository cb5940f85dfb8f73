#include "aakmer/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <limits>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "aakmer/digest.hpp"
#include "aakmer/error.hpp"

namespace aakmer::metrics {

namespace {

double ratio_or_one(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::uint64_t truth_digest(const simgen::Truth& truth) {
  auto sorted = truth;
  std::sort(sorted.begin(), sorted.end());
  Fnv1a h;
  for (const auto& [id, organism] : sorted) {
    h.field(id);
    h.field(organism);
  }
  return h.value();
}

EvalResult evaluate(std::span<const identify::ReadCall> calls, const simgen::Truth& truth,
                    std::span<const identify::OrganismReport> reports) {
  std::unordered_map<std::string, const std::string*> truth_of;
  truth_of.reserve(truth.size());
  EvalResult result;
  std::set<std::string> truth_organisms;
  for (const auto& [id, organism] : truth) {
    truth_of[id] = &organism;
    truth_organisms.insert(organism);
    result.per_organism[organism];
  }

  std::unordered_map<std::string, bool> has_call;
  for (const identify::ReadCall& c : calls) {
    const auto it = truth_of.find(c.read_id);
    if (it == truth_of.end()) throw InputError("read '" + c.read_id + "' is missing from truth");
    has_call[c.read_id] = true;
    const std::string& actual = *it->second;
    if (!c.classified()) {
      ++result.unclassified;
      ++result.per_organism[actual].false_negative;
    } else if (c.organism == actual) {
      ++result.per_organism[actual].true_positive;
    } else {
      ++result.per_organism[c.organism].false_positive;
      ++result.per_organism[actual].false_negative;
    }
  }
  for (const auto& [id, organism] : truth) {
    if (!has_call.count(id)) ++result.per_organism[organism].false_negative;
  }

  for (auto& [organism, s] : result.per_organism) {
    s.recall = ratio_or_one(s.true_positive, s.true_positive + s.false_negative);
    s.precision = ratio_or_one(s.true_positive, s.true_positive + s.false_positive);
  }
  for (const identify::OrganismReport& r : reports) {
    if (!r.detected) continue;
    result.detected.insert(r.organism);
    if (!truth_organisms.count(r.organism)) result.fp_organisms.insert(r.organism);
  }
  result.truth_digest = truth_digest(truth);
  return result;
}

RunComparison compare_runs(const EvalResult& full, std::uint64_t full_counter,
                           const EvalResult& filtered, std::uint64_t filtered_counter) {
  if (full.truth_digest != filtered.truth_digest) {
    throw InputError("runs were evaluated against different truth tables");
  }
  RunComparison cmp;
  for (const auto& [organism, s] : full.per_organism) {
    const auto it = filtered.per_organism.find(organism);
    const double other = it == filtered.per_organism.end() ? 1.0 : it->second.recall;
    cmp.recall_delta[organism] = other - s.recall;
  }
  for (const auto& [organism, s] : filtered.per_organism) {
    if (!cmp.recall_delta.count(organism)) cmp.recall_delta[organism] = s.recall - 1.0;
  }
  if (full_counter == 0) {
    cmp.counter_ratio = filtered_counter == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    cmp.counter_ratio = static_cast<double>(filtered_counter) / static_cast<double>(full_counter);
  }
  std::set_difference(full.detected.begin(), full.detected.end(), filtered.detected.begin(),
                      filtered.detected.end(), std::inserter(cmp.lost, cmp.lost.end()));
  std::set_difference(filtered.detected.begin(), filtered.detected.end(), full.detected.begin(),
                      full.detected.end(), std::inserter(cmp.gained, cmp.gained.end()));
  return cmp;
}

void write_eval_tsv(const EvalResult& result, std::ostream& out) {
  out << "organism\ttrue_positive\tfalse_positive\tfalse_negative\trecall\tprecision\tdetected\n";
  for (const auto& [organism, s] : result.per_organism) {
    out << organism << '\t' << s.true_positive << '\t' << s.false_positive << '\t'
        << s.false_negative << '\t' << fixed(s.recall) << '\t' << fixed(s.precision) << '\t'
        << (result.detected.count(organism) ? "yes" : "no") << '\n';
  }
}

void write_summary(const EvalResult& result, std::ostream& out) {
  out << "organisms evaluated: " << result.per_organism.size() << '\n'
      << "unclassified reads: " << result.unclassified << '\n'
      << "detected:";
  for (const std::string& o : result.detected) out << ' ' << o;
  out << "\nfalse-positive organisms:";
  if (result.fp_organisms.empty()) out << " none";
  for (const std::string& o : result.fp_organisms) out << ' ' << o;
  out << '\n';
  for (const auto& [organism, s] : result.per_organism) {
    out << "  " << organism << ": recall " << fixed(s.recall) << ", precision "
        << fixed(s.precision) << '\n';
  }
}

void write_comparison_tsv(const RunComparison& cmp, std::ostream& out) {
  out << "organism\trecall_delta\tdetection\n";
  for (const auto& [organism, delta] : cmp.recall_delta) {
    const char* detection = cmp.lost.count(organism)     ? "lost"
                            : cmp.gained.count(organism) ? "gained"
                                                         : "same";
    out << organism << '\t' << fixed(delta) << '\t' << detection << '\n';
  }
  out << "#counter_ratio\t" << fixed(cmp.counter_ratio) << '\n';
}

}  // namespace aakmer::metrics
