#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "weylscope/errors.hpp"
#include "weylscope/report.hpp"
#include "weylscope/version.hpp"

namespace {

using namespace weylscope;

int emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path) {
    std::ofstream out(*cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write to " << *cfg.out_path << "\n";
      return 2;
    }
    out << text;
  } else {
    std::cout << text;
  }
  return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& orientation,
                        std::string& format, std::vector<std::string>& conditions) {
  cmd->add_option("--grid", cfg.resolution, "grid resolution per axis (>= 2)")
      ->check(CLI::Range(2, 1024));
  cmd->add_option("--tol-algebraic", cfg.tolerances.algebraic,
                  "tolerance for roundoff-level identities");
  cmd->add_option("--tol-fd", cfg.tolerances.fd, "tolerance for finite-difference residuals");
  cmd->add_option("--orientation", orientation, "+1 (chart order, default) or -1")
      ->check(CLI::IsMember({"+1", "1", "-1"}));
  cmd->add_option("--conditions", conditions, "comma-separated condition names")
      ->delimiter(',');
  cmd->add_option("--format", format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--workers", cfg.workers, "worker threads for grid sweeps")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--seed", cfg.seed, "seed for the random identity sweeps");
  cmd->add_option("--out", [&cfg](const std::vector<std::string>& v) {
        cfg.out_path = v.front();
        return true;
      }, "write the report to a file instead of stdout");
}

bool finalize_config(RunConfig& cfg, const std::string& orientation, const std::string& format,
                     const std::vector<std::string>& conditions) {
  cfg.orientation = (orientation == "-1") ? -1 : +1;
  cfg.format = format == "json" ? OutputFormat::json
               : format == "csv" ? OutputFormat::csv
                                 : OutputFormat::text;
  for (const std::string& name : conditions) {
    const auto c = condition_from_name(name);
    if (!c) {
      std::cerr << "error: unknown condition '" << name << "' (known:";
      for (const auto& [cond, n] : condition_names()) std::cerr << " " << n;
      std::cerr << ")\n";
      return false;
    }
    cfg.selected.push_back(*c);
  }
  if (const char* budget = std::getenv("WEYLSCOPE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(budget, &end, 10);
    if (end && *end == '\0' && v > 0) cfg.budget = std::size_t(v);
  }
  return true;
}

int cmd_analyze(const RunConfig& cfg) {
  const CatalogEntry entry = report::load_target(cfg);
  const bool keep_points = cfg.format == OutputFormat::csv;
  const report::AnalyzeResult result = report::run_analyze(entry, cfg, keep_points);
  std::string text;
  switch (cfg.format) {
    case OutputFormat::text: text = report::render_analyze_text(cfg, entry, result); break;
    case OutputFormat::json: text = report::render_analyze_json(cfg, entry, result); break;
    case OutputFormat::csv: text = report::render_analyze_csv(cfg, entry, result); break;
  }
  const int rc = emit(cfg, text);
  if (rc != 0) return rc;
  return result.all_pass ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
  const CatalogEntry entry = report::load_target(cfg);
  const report::VerifyResult result = report::run_verify(entry, cfg);
  std::string text;
  switch (cfg.format) {
    case OutputFormat::json: text = report::render_verify_json(cfg, entry, result); break;
    default: text = report::render_verify_text(cfg, entry, result); break;
  }
  const int rc = emit(cfg, text);
  if (rc != 0) return rc;
  return result.all_pass ? 0 : 1;
}

int cmd_catalog(const RunConfig& cfg, const std::string& target) {
  std::vector<CatalogEntry> entries;
  if (!target.empty()) {
    entries.push_back(catalog::load(target));
  } else {
    for (const std::string& name : catalog::names()) entries.push_back(catalog::load(name));
  }
  const std::string text = cfg.format == OutputFormat::json
                               ? report::render_catalog_json(entries)
                               : report::render_catalog_text(entries);
  return emit(cfg, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(weylscope::kToolName) +
               " — curvature conditions of explicit Riemannian 4-manifolds"};
  app.set_version_flag("--version", weylscope::kVersion);
  app.require_subcommand(1);

  RunConfig cfg_analyze, cfg_verify, cfg_catalog;
  cfg_verify.resolution = 2;  // residual sweeps are expensive; 2^4 points
  std::string orient_a = "+1", orient_v = "+1", orient_c = "+1";
  std::string fmt_a = "text", fmt_v = "text", fmt_c = "text";
  std::vector<std::string> conds_a, conds_v, conds_c;
  std::string catalog_target;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "pointwise curvature conditions over a sampling grid");
  analyze->add_option("target", cfg_analyze.target, "catalog entry or metric-definition file")
      ->required();
  add_common_options(analyze, cfg_analyze, orient_a, fmt_a, conds_a);

  CLI::App* verify = app.add_subcommand(
      "verify", "differential identities (Weitzenboeck, divergence, parallel form)");
  verify->add_option("target", cfg_verify.target, "catalog entry or metric-definition file")
      ->required();
  add_common_options(verify, cfg_verify, orient_v, fmt_v, conds_v);

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "list built-in reference metrics");
  catalog_cmd->add_option("target", catalog_target, "show a single entry");
  add_common_options(catalog_cmd, cfg_catalog, orient_c, fmt_c, conds_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) {
      if (!finalize_config(cfg_analyze, orient_a, fmt_a, conds_a)) return 2;
      return cmd_analyze(cfg_analyze);
    }
    if (verify->parsed()) {
      if (!finalize_config(cfg_verify, orient_v, fmt_v, conds_v)) return 2;
      return cmd_verify(cfg_verify);
    }
    if (!finalize_config(cfg_catalog, orient_c, fmt_c, conds_c)) return 2;
    return cmd_catalog(cfg_catalog, catalog_target);
  } catch (const weylscope::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
