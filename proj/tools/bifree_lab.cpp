// bifree-lab: exact limit moments, cumulant tables, and Monte Carlo
// verification runs for two-faced matrix families, driven by JSON configs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bifree/config.hpp"
#include "bifree/errors.hpp"
#include "bifree/kernels.hpp"
#include "bifree/report.hpp"
#include "bifree/selftest.hpp"
#include "bifree/trace_mc.hpp"

namespace {

using namespace bifree;

struct CommonOpts {
  std::string config_path;
  std::string output;  // overrides config's output when set
  bool output_set = false;
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  std::optional<std::string> format;
  std::string kernels;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config) {
  auto* c = cmd->add_option("-c,--config", opts.config_path,
                            "JSON experiment config");
  if (needs_config) c->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--output", opts.output,
                  "output file (default: config's 'output', else stdout)")
      ->each([&](const std::string&) { opts.output_set = true; });
  cmd->add_option("--seed-override", opts.seed_override,
                  "replace the config's base_seed");
  cmd->add_option("-t,--threads", opts.threads, "worker threads for sampling")
      ->check(CLI::Range(1, 64));
  cmd->add_option("--format", opts.format, "csv or json (overrides config)");
  cmd->add_option("--kernels", opts.kernels,
                  "force a kernel backend: scalar, avx2 or neon");
  cmd->add_flag("--no-timestamp", opts.no_timestamp,
                "omit the generated-at comment so reruns are byte-identical");
}

ExperimentConfig prepare(const CommonOpts& opts, Mode mode) {
  ExperimentConfig cfg = load_config(opts.config_path);
  if (opts.seed_override) cfg.base_seed = *opts.seed_override;
  if (opts.output_set) cfg.output = opts.output;
  if (opts.format) cfg.format = format_from_string(*opts.format);
  if (!opts.kernels.empty())
    kernels::set_backend(kernels::backend_from_string(opts.kernels));
  validate_config(cfg, mode);
  return cfg;
}

nlohmann::json table_to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (size_t i = 0; i < table.header.size(); ++i)
      obj[table.header[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

void emit(const Table& table, const ExperimentConfig& cfg,
          const CommonOpts& opts) {
  std::string text;
  if (cfg.format == OutputFormat::csv) {
    text = render_csv(table, !opts.no_timestamp);
  } else {
    nlohmann::json j;
    if (!opts.no_timestamp) j["generated"] = timestamp_utc();
    j["config"] = config_to_json(cfg);
    j["rows"] = table_to_json(table);
    text = j.dump(2) + "\n";
  }
  write_text(cfg.output, text);
}

int run_exact(const CommonOpts& opts) {
  const ExperimentConfig cfg = prepare(opts, Mode::exact);
  const ExactResult r = exact_moment(cfg.word, cfg.families, cfg.diagonal);
  Table t;
  t.header = {"word", "evaluator", "value"};
  t.rows = {{to_string(cfg.word), to_string(r.variant), format_sig17(r.value)}};
  emit(t, cfg, opts);
  return 0;
}

int run_cumulants(const CommonOpts& opts) {
  const ExperimentConfig cfg = prepare(opts, Mode::cumulants);
  const MomentOracle phi = cfg.moment_table->build_oracle();
  Table t;
  t.header = {"word", "chi", "moment", "cumulant"};
  WordIds w;
  const std::function<void()> walk = [&] {
    if (!w.empty()) {
      const SideMap chi = phi.chi_of(w);
      std::string word;
      for (int id : w) {
        if (!word.empty()) word += ' ';
        word += phi.symbol(id).name;
      }
      t.rows.push_back({word, to_string(chi), format_sig17(phi(w)),
                        format_sig17(bifree_cumulant(phi, chi, w))});
    }
    if (static_cast<int>(w.size()) == phi.max_len()) return;
    for (int id = 0; id < phi.alphabet_size(); ++id) {
      w.push_back(id);
      walk();
      w.pop_back();
    }
  };
  walk();
  emit(t, cfg, opts);
  return 0;
}

// Simulate and sweep share the fixed report schema: N,mean,stderr,exact,abs_err.
int run_simulate(const CommonOpts& opts) {
  const ExperimentConfig cfg = prepare(opts, Mode::simulate);
  const ExactResult exact = exact_moment(cfg.word, cfg.families, cfg.diagonal);
  const EnsembleSpec spec = ensemble_of(cfg, cfg.N);
  const TraceEstimate est =
      estimate_moment(cfg.word, spec, cfg.diagonal, cfg.n_samples, opts.threads);
  Table t;
  t.header = {"N", "mean", "stderr", "exact", "abs_err"};
  t.rows = {{std::to_string(est.N), format_sig17(est.mean),
             format_sig17(est.stderr_est), format_sig17(exact.value),
             format_sig17(std::abs(est.mean - exact.value))}};
  emit(t, cfg, opts);
  return 0;
}

int run_sweep(const CommonOpts& opts) {
  const ExperimentConfig cfg = prepare(opts, Mode::sweep);
  const EnsembleSpec proto = ensemble_of(cfg, 0);
  const std::vector<SweepRow> rows = convergence_sweep(
      cfg.word, proto, cfg.diagonal, cfg.Ns, cfg.n_samples, opts.threads);
  Table t;
  t.header = {"N", "mean", "stderr", "exact", "abs_err"};
  for (const SweepRow& row : rows)
    t.rows.push_back({std::to_string(row.N), format_sig17(row.mean),
                      format_sig17(row.stderr_est), format_sig17(row.exact),
                      format_sig17(row.abs_err)});
  emit(t, cfg, opts);
  return 0;
}

int run_selftest(const CommonOpts& opts) {
  if (!opts.kernels.empty())
    kernels::set_backend(kernels::backend_from_string(opts.kernels));
  const auto results = run_selftests();
  int failed = 0;
  for (const auto& r : results) {
    if (r.pass) {
      std::printf("PASS %s\n", r.name.c_str());
    } else {
      ++failed;
      std::printf("FAIL %s: %s\n", r.name.c_str(), r.detail.c_str());
    }
  }
  std::printf("selftest: %zu/%zu passed (kernels: %s)\n",
              results.size() - failed, results.size(),
              kernels::name(kernels::active_backend()));
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bi-free limit moments and random two-faced matrix checks"};
  app.require_subcommand(1);

  CommonOpts opts;
  CLI::App* exact = app.add_subcommand(
      "exact", "closed-form limit moment of the configured word");
  add_common(exact, opts, true);
  CLI::App* cumulants = app.add_subcommand(
      "cumulants", "moment/cumulant table from a raw moment config");
  add_common(cumulants, opts, true);
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo trace estimate at one matrix size");
  add_common(simulate, opts, true);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Monte Carlo estimates across matrix sizes vs the exact limit");
  add_common(sweep, opts, true);
  CLI::App* selftest = app.add_subcommand(
      "selftest", "run the built-in invariant suite");
  add_common(selftest, opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (exact->parsed()) return run_exact(opts);
    if (cumulants->parsed()) return run_cumulants(opts);
    if (simulate->parsed()) return run_simulate(opts);
    if (sweep->parsed()) return run_sweep(opts);
    if (selftest->parsed()) return run_selftest(opts);
  } catch (const bifree::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
  return 0;
}
