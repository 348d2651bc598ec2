#pragma once

#include <string>
#include <vector>

namespace bifree {

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;  // failure reason, or a short note on success
};

/// Curated fast invariant suite across every module; the CLI's selftest
/// mode prints one line per entry. All checks are deterministic.
std::vector<SelfTestResult> run_selftests();

}  // namespace bifree
