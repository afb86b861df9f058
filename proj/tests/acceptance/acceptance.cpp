// Runs every acceptance criterion at the mandated sample sizes and prints one
// PASS/FAIL line per criterion. Exits 1 if any criterion fails. The full
// single-thread report is written to acceptance_report.json.
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "snc_cli/output.hpp"
#include "snc_cli/verify.hpp"

namespace {

void print_line(int criterion, bool passed, const std::string& name, const std::string& note) {
  std::printf("criterion %2d: %s  %s%s%s\n", criterion, passed ? "PASS" : "FAIL", name.c_str(),
              note.empty() ? "" : "  ", note.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  using namespace snc::cli;

  VerifyOptions single;
  single.suite = Suite::all;
  single.seed = 42;
  single.threads = 1;
  const std::vector<CheckResult> results = run_verify(single);

  bool all_passed = true;
  for (const auto& r : results) {
    const bool in_time = r.runtime_s <= r.runtime_limit_s;
    const bool ok = r.passed && in_time;
    all_passed = all_passed && ok;
    char note[160];
    std::snprintf(note, sizeof note, "(margin %.4g %s, %.1f s of %.0f s)", r.margin, r.margin_unit.c_str(),
                  r.runtime_s, r.runtime_limit_s);
    print_line(r.criterion, ok, r.name + (in_time ? "" : " [over time limit]"), note);
  }

  VerifyOptions eight = single;
  eight.threads = 8;
  std::ofstream("acceptance_report.json") << dump_json(verify_report(results, single, true)) << "\n";
  const std::string a = dump_json(verify_report(results, single, false));
  const std::string b = dump_json(verify_report(run_verify(eight), eight, false));
  const bool same = a == b;
  all_passed = all_passed && same;
  print_line(12, same, "verify --suite all identical for 1 and 8 threads",
             "(" + std::to_string(a.size()) + " bytes compared)");

  return all_passed ? 0 : 1;
}
