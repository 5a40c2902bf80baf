// Runs the nine acceptance criteria at the full level and prints one line per
// criterion. Exit status is nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "gt/parallel.hpp"
#include "gt/verification.hpp"

int main(int argc, char** argv) {
  auto level = gt::VerifyLevel::full;
  if (argc > 1) level = gt::verify_level_from_string(argv[1]);
  const int threads = gt::resolve_threads(0);
  bool ok = true;
  for (int id = 1; id <= 9; ++id) {
    const auto result = gt::run_criterion(id, level, threads);
    std::printf("%s\n", gt::format_line(result).c_str());
    std::fflush(stdout);
    ok = ok && (!result.ran || result.passed);
  }
  std::printf("%s\n", ok ? "acceptance: all criteria passed" : "acceptance: FAILED");
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
