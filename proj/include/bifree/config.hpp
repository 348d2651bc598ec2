#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bifree/ensemble.hpp"
#include "bifree/trace_mc.hpp"

#include "json.hpp"

namespace bifree {

enum class Mode { exact, cumulants, simulate, sweep, selftest };
Mode mode_from_string(const std::string& s);
const char* to_string(Mode m);

enum class OutputFormat { csv, json };
OutputFormat format_from_string(const std::string& s);
const char* to_string(OutputFormat f);

/// Raw moment table for the cumulants mode: an alphabet (unique names so
/// words are readable), plus moments keyed by space-separated words.
struct MomentTableConfig {
  std::vector<Symbol> alphabet;
  int max_order = 0;
  std::vector<std::pair<std::string, double>> moments;

  MomentOracle build_oracle() const;

  friend bool operator==(const MomentTableConfig&,
                         const MomentTableConfig&) = default;
};

struct ExperimentConfig {
  std::optional<Mode> mode;  // optional; must agree with the CLI mode
  NamedCovs families;
  Word word;
  std::optional<DiagonalLimit> diagonal;
  EntryLaw law = EntryLaw::rademacher;
  std::vector<int> Ns;      // sweep
  int N = 0;                // simulate
  long long n_samples = 0;
  std::uint64_t base_seed = 0;
  std::string output;       // empty means stdout
  OutputFormat format = OutputFormat::csv;
  std::optional<MomentTableConfig> moment_table;  // cumulants

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);

/// Mode-specific completeness checks (fields required by the given mode).
void validate_config(const ExperimentConfig& cfg, Mode mode);

/// The ensemble described by a config (families + N + law + seed).
EnsembleSpec ensemble_of(const ExperimentConfig& cfg, int N);

}  // namespace bifree
