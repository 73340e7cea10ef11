#pragma once

#include <filesystem>
#include <string>

namespace kolmflow {

struct CriterionResult {
  int id = 0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs one acceptance criterion (1..11); artifacts land in out_dir.
CriterionResult run_acceptance_criterion(int id, const std::filesystem::path& out_dir);

}  // namespace kolmflow
