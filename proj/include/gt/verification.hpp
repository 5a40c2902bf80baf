#pragma once

// The acceptance suite: nine numbered criteria, each a set of checks with a
// wall-clock limit. Shared by the acceptance test binary and `gtsim verify`.

#include <string>
#include <vector>

#include "gt/json_fields.hpp"
#include "gt/telegame.hpp"

namespace gt {

enum class VerifyLevel { fast, full };

VerifyLevel verify_level_from_string(const std::string& s);
std::string to_string(VerifyLevel level);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool ran = true;  // false when the level skips the criterion
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<std::string> formulas;  // identities checked
  std::vector<std::string> failures;
  std::string summary;
};

struct VerificationReport {
  VerifyLevel level = VerifyLevel::full;
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

/// Runs one criterion (1..9). At the fast level, oracle-backed checks are
/// skipped and criteria made only of them report ran = false.
CriterionResult run_criterion(int id, VerifyLevel level, int threads = 1);
VerificationReport run_acceptance(VerifyLevel level, int threads = 1);

Json report_to_json(const VerificationReport& report);
/// "criterion 3: PASS  strong convergence on the Basel state (0.05 s) ...".
std::string format_line(const CriterionResult& result);

/// Game fixtures played by criterion 8, also shipped as scenario files.
enum class GameFixture { ideal_distinguisher_first, ideal_teleporter_first, gaussian_distinguisher_first,
                         gaussian_teleporter_first };
GameConfig game_fixture(GameFixture fixture);

/// Bhattacharyya fidelity of two circular complex Gaussians with variances
/// xi1 and xi2, by numerical radial integration.
double bhattacharyya_fidelity_numeric(double xi1, double xi2);

}  // namespace gt
