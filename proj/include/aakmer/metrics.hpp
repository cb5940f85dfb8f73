#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>

#include "aakmer/identify.hpp"
#include "aakmer/simgen.hpp"

namespace aakmer::metrics {

struct OrganismStats {
  std::uint64_t true_positive = 0;
  std::uint64_t false_positive = 0;
  std::uint64_t false_negative = 0;
  double recall = 1.0;     // 0/0 counts as 1
  double precision = 1.0;  // 0/0 counts as 1

  bool operator==(const OrganismStats&) const = default;
};

struct EvalResult {
  std::map<std::string, OrganismStats> per_organism;
  std::set<std::string> detected;
  std::set<std::string> fp_organisms;
  std::uint64_t unclassified = 0;
  std::uint64_t truth_digest = 0;

  bool operator==(const EvalResult&) const = default;
};

std::uint64_t truth_digest(const simgen::Truth& truth);

// Read-level confusion counts. A read called to the wrong organism is a false
// positive for the called organism and a false negative for its own; an
// unclassified read is only a false negative. Truth reads without a call
// count as false negatives.
EvalResult evaluate(std::span<const identify::ReadCall> calls, const simgen::Truth& truth,
                    std::span<const identify::OrganismReport> reports);

struct RunComparison {
  std::map<std::string, double> recall_delta;  // filtered - full
  double counter_ratio = 1.0;                  // filtered / full
  std::set<std::string> lost;                  // detected in full only
  std::set<std::string> gained;                // detected in filtered only
};

RunComparison compare_runs(const EvalResult& full, std::uint64_t full_counter,
                           const EvalResult& filtered, std::uint64_t filtered_counter);

void write_eval_tsv(const EvalResult& result, std::ostream& out);
void write_summary(const EvalResult& result, std::ostream& out);
void write_comparison_tsv(const RunComparison& cmp, std::ostream& out);

}  // namespace aakmer::metrics
