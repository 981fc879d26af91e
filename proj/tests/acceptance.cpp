// Acceptance suite runner: one line per criterion, nonzero exit on any
// failure. `--quick` caps the grid sweeps at level 6; the default run uses
// the nominal ranges.

#include <cstdio>
#include <cstring>
#include <string>

#include "dyadic/report.hpp"

int main(int argc, char** argv) {
  dyadic::ReportOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) options.quick = true;
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      options.threads = std::atoi(argv[++i]);
    }
  }
  const auto results = dyadic::run_acceptance(options);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %s — %s (%.2f s)\n", r.id.c_str(),
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    if (!r.details.empty()) std::printf("    %s\n", r.details.c_str());
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "ALL PASS" : "FAILURES PRESENT");
  return all ? 0 : 1;
}
