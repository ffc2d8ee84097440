#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weylscope/metric.hpp"

namespace weylscope {

/// Closed-form reference data for a catalog entry. Every number carries a
/// provenance note and is re-derived by the engine at load time.
struct GroundTruth {
  std::optional<double> scalar_curvature;
  std::optional<double> einstein_constant;  // empty: not Einstein (for catalog entries)
  std::optional<std::array<double, 3>> weyl_plus_spectrum;  // sorted ascending
  bool kahler = false;
  /// True for built-in entries; user-loaded metrics carry no expectations.
  bool catalog_entry = false;
  std::string orientation_note;
  std::map<std::string, std::string> provenance;
};

struct CatalogEntry {
  std::string name;
  MetricPatch patch;
  GroundTruth truth;
  /// The same metric in the definition language (also the hash input).
  std::string definition;
};

namespace catalog {

const std::vector<std::string>& names();

/// Load a built-in entry. With `self_test` the engine recomputes S and the
/// W+ spectrum at 20 deterministic points and checks them against the
/// ground truth to 1e-5.
CatalogEntry load(const std::string& name, bool self_test = true);

/// Parse a metric-definition source (see the README for the format):
///   # comment
///   domain = [a1,b1]x[a2,b2]x[a3,b3]x[a4,b4]
///   orientation = +1
///   gIJ = expr
/// Missing off-diagonal components default to 0; missing diagonal ones are
/// an error. Throws SyntaxError / UndefinedSymbolError / NonSymmetricError.
MetricPatch parse_metric(const std::string& source, const std::string& name = "user-metric");

MetricPatch parse_metric_file(const std::string& path);

}  // namespace catalog
}  // namespace weylscope
