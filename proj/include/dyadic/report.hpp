#pragma once

/// The acceptance suite: every correctness gate the project ships with, each
/// returning a pass/fail verdict with timing and a one-line detail. The CLI
/// `report` command and the standalone acceptance binary both run these.

#include <string>
#include <vector>

namespace dyadic {

struct CriterionResult {
  std::string id;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::string details;
};

struct ReportOptions {
  /// Quick mode caps the grid sweeps at level 6 for a fast sanity pass; the
  /// full run uses the nominal ranges (up to level 8).
  bool quick = false;
  int threads = 0;  // 0 = default_thread_count()
};

std::vector<CriterionResult> run_acceptance(const ReportOptions& options);

std::string report_json(const std::vector<CriterionResult>& results,
                        const ReportOptions& options);

}  // namespace dyadic
