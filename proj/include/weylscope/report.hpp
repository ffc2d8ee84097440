#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weylscope/catalog.hpp"
#include "weylscope/conditions.hpp"

namespace weylscope {

enum class OutputFormat { text, json, csv };

/// One resolved CLI invocation. Identical configs (and seeds) must produce
/// byte-identical reports.
struct RunConfig {
  std::string target;  // catalog name or file path
  int resolution = 5;
  Tolerances tolerances{};
  int orientation = +1;
  std::vector<Condition> selected;  // empty: command default
  OutputFormat format = OutputFormat::text;
  int workers = 1;
  std::uint64_t seed = 12345;
  std::optional<std::string> out_path;
  std::size_t budget = 1000000;
};

namespace report {

/// Fixed-width scientific formatting used across all report flavors
/// (shortest round-trip, locale-independent).
std::string format_double(double v);

struct AnalyzeResult {
  conditions::ConditionReport report;
  /// Mirrors the trichotomy: "anti-self-dual" (with S >= 0 on the grid),
  /// "Kähler-spectrum", or "neither — hypotheses fail".
  std::string classification;
  bool all_pass = false;
};

AnalyzeResult classify(const conditions::ConditionReport& rep);

std::string render_analyze_text(const RunConfig& cfg, const CatalogEntry& entry,
                                const AnalyzeResult& result);
std::string render_analyze_json(const RunConfig& cfg, const CatalogEntry& entry,
                                const AnalyzeResult& result);
std::string render_analyze_csv(const RunConfig& cfg, const CatalogEntry& entry,
                               const AnalyzeResult& result);

/// Identity-suite results for `verify`.
struct VerifyResult {
  conditions::ConditionReport sweep;  // FD residual conditions over the grid
  // Algebraic sweeps (seeded): max |residual| over the random samples.
  double eigenvalue_identity_max = 0.0;
  double root_factorization_max = 0.0;
  double weitzenbock_forms_max = 0.0;
  std::size_t algebraic_samples = 0;
  std::size_t weitzenbock_samples = 0;
  bool algebraic_pass = false;
  /// Divergence expectation from ground truth: "einstein" (small),
  /// "non-einstein" (detector must fire), or "unknown" (informational).
  std::string divergence_expectation = "unknown";
  bool divergence_pass = true;
  bool weitzenbock_applicable = true;
  bool weitzenbock_pass = true;
  std::optional<double> parallel_form_max;  // empty: not applicable
  std::optional<double> almost_complex_max;
  std::string parallel_form_note;
  bool parallel_pass = true;
  bool all_pass = false;
};

std::string render_verify_text(const RunConfig& cfg, const CatalogEntry& entry,
                               const VerifyResult& result);
std::string render_verify_json(const RunConfig& cfg, const CatalogEntry& entry,
                               const VerifyResult& result);

std::string render_catalog_text(const std::vector<CatalogEntry>& entries);
std::string render_catalog_json(const std::vector<CatalogEntry>& entries);

/// Resolve `cfg.target` (file path if it exists on disk, catalog name
/// otherwise) and apply the config's orientation to the patch.
CatalogEntry load_target(const RunConfig& cfg);

AnalyzeResult run_analyze(const CatalogEntry& entry, const RunConfig& cfg, bool keep_points);
VerifyResult run_verify(const CatalogEntry& entry, const RunConfig& cfg);

}  // namespace report
}  // namespace weylscope
