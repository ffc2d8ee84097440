#include "weylscope/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "weylscope/errors.hpp"
#include "weylscope/version.hpp"

namespace weylscope::report {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCaveat = "chart-sampled; not a global certificate";

std::string hash_hex(const CatalogEntry& entry) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(entry.definition)));
  return buf;
}

const conditions::ConditionSummary* find(const conditions::ConditionReport& rep, Condition c) {
  for (const auto& s : rep.summaries)
    if (s.condition == c) return &s;
  return nullptr;
}

std::string point_str(const ChartPoint& p) {
  std::string out = "(";
  for (int i = 0; i < 4; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", p.x[i]);
    out += buf;
    if (i < 3) out += ", ";
  }
  return out + ")";
}

Json point_json(const ChartPoint& p) {
  return Json::array({p.x[0], p.x[1], p.x[2], p.x[3]});
}

Json header_json(const RunConfig& cfg, const CatalogEntry& entry, const char* command) {
  Json j;
  j["tool"] = {{"name", kToolName}, {"version", kVersion}};
  j["command"] = command;
  j["metric"] = {
      {"name", entry.name},
      {"hash", hash_hex(entry)},
      {"orientation", cfg.orientation},
      {"domain",
       {{"lower", {entry.patch.domain().lower[0], entry.patch.domain().lower[1],
                   entry.patch.domain().lower[2], entry.patch.domain().lower[3]}},
        {"upper", {entry.patch.domain().upper[0], entry.patch.domain().upper[1],
                   entry.patch.domain().upper[2], entry.patch.domain().upper[3]}}}},
  };
  j["tolerances"] = {{"algebraic", cfg.tolerances.algebraic}, {"fd", cfg.tolerances.fd}};
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["units"] = {{"margins_and_residuals", "chart-units^-2"}};
  j["caveat"] = kCaveat;
  return j;
}

std::string scalar_note(const conditions::ConditionReport& rep) {
  const double lo = rep.scalar_min, hi = rep.scalar_max;
  auto snap = [](double v) { return std::abs(v) < 1e-9 ? 0.0 : v; };
  char buf[80];
  if (std::abs(hi - lo) <= 1e-8 * std::max(1.0, std::abs(hi)))
    std::snprintf(buf, sizeof buf, "S = %.6g", snap(0.5 * (lo + hi)));
  else
    std::snprintf(buf, sizeof buf, "S in [%.6g, %.6g]", snap(lo), snap(hi));
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

AnalyzeResult classify(const conditions::ConditionReport& rep) {
  AnalyzeResult result;
  result.report = rep;
  result.all_pass = true;
  for (const auto& s : rep.summaries) result.all_pass = result.all_pass && s.pass;

  const auto* asd = find(rep, Condition::asd);
  const auto* kahler = find(rep, Condition::kahler_spectrum);
  if (!asd || !kahler) {
    result.classification = "not classified (needs asd + kahler_spectrum conditions)";
    return result;
  }
  const double tol = rep.tolerances.fd;
  if (asd->extremum < tol && rep.scalar_min >= -tol)
    result.classification = "anti-self-dual, " + scalar_note(rep);
  else if (kahler->extremum < tol)
    result.classification = "Kähler-spectrum, " + scalar_note(rep);
  else
    result.classification = "neither — hypotheses fail";
  return result;
}

std::string render_analyze_text(const RunConfig& cfg, const CatalogEntry& entry,
                                const AnalyzeResult& result) {
  const auto& rep = result.report;
  std::ostringstream out;
  out << kToolName << " " << kVersion << " — analyze " << entry.name << "\n";
  out << "metric hash: " << hash_hex(entry) << "   orientation: " << (cfg.orientation > 0 ? "+1" : "-1")
      << "   grid: " << rep.resolution << "^4 = " << rep.total_points << " points\n";
  out << "tolerances: algebraic " << format_double(rep.tolerances.algebraic) << ", fd "
      << format_double(rep.tolerances.fd) << "   seed: " << cfg.seed << "\n\n";
  for (const auto& s : rep.summaries) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-18s %s %13.6e  at %-38s %s\n",
                  to_string(s.condition).c_str(), s.is_margin ? "min margin  " : "max residual",
                  s.extremum, point_str(s.arg_extremum).c_str(), s.pass ? "pass" : "FAIL");
    out << line;
  }
  out << "\nclassification: " << result.classification << "\n";
  out << "caveat: " << kCaveat << "\n";
  return out.str();
}

std::string render_analyze_json(const RunConfig& cfg, const CatalogEntry& entry,
                                const AnalyzeResult& result) {
  const auto& rep = result.report;
  Json j = header_json(cfg, entry, "analyze");
  j["grid"] = {{"resolution", rep.resolution}, {"points", rep.total_points}};
  Json conds = Json::object();
  for (const auto& s : rep.summaries) {
    Json c;
    c["kind"] = s.is_margin ? "margin" : "residual";
    c[s.is_margin ? "min" : "max"] = s.extremum;
    c["arg_extremum"] = point_json(s.arg_extremum);
    c["tolerance"] = s.tolerance;
    c["verdict"] = s.pass ? "pass" : "fail";
    conds[to_string(s.condition)] = c;
  }
  j["conditions"] = conds;
  j["scalar_curvature"] = {{"min", rep.scalar_min}, {"max", rep.scalar_max}};
  j["classification"] = result.classification;
  j["all_pass"] = result.all_pass;
  if (!rep.points.empty()) {
    Json pts = Json::array();
    for (const auto& rec : rep.points) {
      Json p;
      p["point"] = point_json(rec.point);
      p["S"] = rec.scalar;
      p["lambda"] = {rec.lambda[0], rec.lambda[1], rec.lambda[2]};
      for (const auto& [cond, value] : rec.values) p[to_string(cond)] = value;
      pts.push_back(p);
    }
    j["points"] = pts;
  }
  return j.dump(2) + "\n";
}

std::string render_analyze_csv(const RunConfig& cfg, const CatalogEntry& entry,
                               const AnalyzeResult& result) {
  (void)cfg;
  const auto& rep = result.report;
  if (rep.points.empty())
    throw ValidationError("csv output needs per-point records (internal flag not set)");
  std::ostringstream out;
  out << "metric,x1,x2,x3,x4,S,lambda1,lambda2,lambda3";
  for (const auto& s : rep.summaries) out << "," << to_string(s.condition);
  out << "\n";
  for (const auto& rec : rep.points) {
    out << entry.name;
    for (int i = 0; i < 4; ++i) out << "," << format_double(rec.point.x[i]);
    out << "," << format_double(rec.scalar);
    for (int i = 0; i < 3; ++i) out << "," << format_double(rec.lambda[i]);
    for (const auto& s : rep.summaries) {
      auto it = rec.values.find(s.condition);
      out << "," << (it == rec.values.end() ? "" : format_double(it->second));
    }
    out << "\n";
  }
  return out.str();
}

std::string render_verify_text(const RunConfig& cfg, const CatalogEntry& entry,
                               const VerifyResult& r) {
  std::ostringstream out;
  out << kToolName << " " << kVersion << " — verify " << entry.name << "\n";
  out << "metric hash: " << hash_hex(entry) << "   orientation: "
      << (cfg.orientation > 0 ? "+1" : "-1") << "   grid: " << r.sweep.resolution
      << "^4 = " << r.sweep.total_points << " points   seed: " << cfg.seed << "\n\n";

  out << "algebraic identity sweeps (" << r.algebraic_samples << " samples):\n";
  char line[256];
  std::snprintf(line, sizeof line, "  %-32s max |residual| %13.6e  %s\n",
                "eigenvalue inequality identity", r.eigenvalue_identity_max,
                r.algebraic_pass ? "pass" : "FAIL");
  out << line;
  std::snprintf(line, sizeof line, "  %-32s max |residual| %13.6e  %s\n", "root factorization",
                r.root_factorization_max, r.algebraic_pass ? "pass" : "FAIL");
  out << line;
  std::snprintf(line, sizeof line, "  %-32s max |difference| %11.6e  (%zu samples) %s\n",
                "Weitzenboeck two-form agreement", r.weitzenbock_forms_max, r.weitzenbock_samples,
                r.weitzenbock_forms_max < 1e-12 ? "pass" : "FAIL");
  out << line;

  out << "\nfinite-difference residuals over the grid:\n";
  for (const auto& s : r.sweep.summaries) {
    const char* verdict = "pass";
    std::string note;
    if (s.condition == Condition::divergence) {
      note = " (expectation: " + r.divergence_expectation + ")";
      verdict = r.divergence_pass ? "pass" : "FAIL";
    } else if (s.condition == Condition::weitzenbock) {
      if (!r.weitzenbock_applicable) note = " — not applicable: delta W+ != 0";
      verdict = r.weitzenbock_pass ? "pass" : "FAIL";
    }
    std::snprintf(line, sizeof line, "  %-18s max residual %13.6e  at %-38s %s%s\n",
                  to_string(s.condition).c_str(), s.extremum,
                  point_str(s.arg_extremum).c_str(), verdict, note.c_str());
    out << line;
  }
  if (r.parallel_form_max) {
    std::snprintf(line, sizeof line, "  %-18s max |nabla omega| %9.6e  |JJ+id| %13.6e  %s\n",
                  "kahler_form", *r.parallel_form_max,
                  r.almost_complex_max ? *r.almost_complex_max : 0.0,
                  r.parallel_pass ? "pass" : "FAIL");
    out << line;
  } else if (!r.parallel_form_note.empty()) {
    out << "  kahler_form        " << r.parallel_form_note << "\n";
  }
  out << "\nverdict: " << (r.all_pass ? "all applicable identities hold" : "FAILURES present")
      << "\n";
  out << "caveat: " << kCaveat << "\n";
  return out.str();
}

std::string render_verify_json(const RunConfig& cfg, const CatalogEntry& entry,
                               const VerifyResult& r) {
  Json j = header_json(cfg, entry, "verify");
  j["grid"] = {{"resolution", r.sweep.resolution}, {"points", r.sweep.total_points}};
  j["algebraic"] = {
      {"samples", r.algebraic_samples},
      {"eigenvalue_identity_max", r.eigenvalue_identity_max},
      {"root_factorization_max", r.root_factorization_max},
      {"weitzenbock_forms_max", r.weitzenbock_forms_max},
      {"weitzenbock_samples", r.weitzenbock_samples},
      {"verdict", r.algebraic_pass ? "pass" : "fail"},
  };
  Json fd = Json::object();
  for (const auto& s : r.sweep.summaries) {
    Json c;
    c["max"] = s.extremum;
    c["arg_max"] = point_json(s.arg_extremum);
    if (s.condition == Condition::divergence) {
      c["expectation"] = r.divergence_expectation;
      c["verdict"] = r.divergence_pass ? "pass" : "fail";
    } else if (s.condition == Condition::weitzenbock) {
      c["applicable"] = r.weitzenbock_applicable;
      c["verdict"] = r.weitzenbock_pass ? "pass" : "fail";
    } else {
      c["verdict"] = s.pass ? "pass" : "fail";
    }
    fd[to_string(s.condition)] = c;
  }
  if (r.parallel_form_max) {
    fd["kahler_form"] = {{"max_nabla_omega", *r.parallel_form_max},
                         {"max_almost_complex_residual",
                          r.almost_complex_max ? *r.almost_complex_max : 0.0},
                         {"verdict", r.parallel_pass ? "pass" : "fail"}};
  } else if (!r.parallel_form_note.empty()) {
    fd["kahler_form"] = {{"note", r.parallel_form_note}};
  }
  j["residuals"] = fd;
  j["all_pass"] = r.all_pass;
  return j.dump(2) + "\n";
}

std::string render_catalog_text(const std::vector<CatalogEntry>& entries) {
  std::ostringstream out;
  out << kToolName << " " << kVersion << " — catalog (" << entries.size() << " entries)\n\n";
  for (const auto& e : entries) {
    out << e.name << "\n";
    if (e.truth.scalar_curvature)
      out << "  S = " << *e.truth.scalar_curvature;
    else
      out << "  S = (varies)";
    if (e.truth.einstein_constant)
      out << ", Einstein constant " << *e.truth.einstein_constant;
    else
      out << ", not Einstein";
    out << ", " << (e.truth.kahler ? "Kähler" : "not Kähler") << "\n";
    if (e.truth.weyl_plus_spectrum) {
      const auto& s = *e.truth.weyl_plus_spectrum;
      out << "  W+ spectrum (" << format_double(s[0]) << ", " << format_double(s[1]) << ", "
          << format_double(s[2]) << ")\n";
    }
    out << "  orientation: " << e.truth.orientation_note << "\n";
    for (const auto& [key, note] : e.truth.provenance)
      out << "  provenance[" << key << "]: " << note << "\n";
    out << "\n";
  }
  out << "caveat: " << kCaveat << "\n";
  return out.str();
}

std::string render_catalog_json(const std::vector<CatalogEntry>& entries) {
  Json j;
  j["tool"] = {{"name", kToolName}, {"version", kVersion}};
  j["command"] = "catalog";
  Json arr = Json::array();
  for (const auto& e : entries) {
    Json item;
    item["name"] = e.name;
    item["hash"] = hash_hex(e);
    item["domain"] = {
        {"lower", {e.patch.domain().lower[0], e.patch.domain().lower[1],
                   e.patch.domain().lower[2], e.patch.domain().lower[3]}},
        {"upper", {e.patch.domain().upper[0], e.patch.domain().upper[1],
                   e.patch.domain().upper[2], e.patch.domain().upper[3]}}};
    if (e.truth.scalar_curvature) item["scalar_curvature"] = *e.truth.scalar_curvature;
    if (e.truth.einstein_constant)
      item["einstein_constant"] = *e.truth.einstein_constant;
    else
      item["einstein_constant"] = nullptr;
    if (e.truth.weyl_plus_spectrum)
      item["weyl_plus_spectrum"] = {(*e.truth.weyl_plus_spectrum)[0],
                                    (*e.truth.weyl_plus_spectrum)[1],
                                    (*e.truth.weyl_plus_spectrum)[2]};
    item["kahler"] = e.truth.kahler;
    item["orientation_note"] = e.truth.orientation_note;
    Json prov = Json::object();
    for (const auto& [key, note] : e.truth.provenance) prov[key] = note;
    item["provenance"] = prov;
    item["definition"] = e.definition;
    arr.push_back(item);
  }
  j["entries"] = arr;
  j["caveat"] = kCaveat;
  return j.dump(2) + "\n";
}

CatalogEntry load_target(const RunConfig& cfg) {
  CatalogEntry entry = [&] {
    if (std::filesystem::exists(cfg.target)) {
      std::ifstream in(cfg.target);
      std::ostringstream buf;
      buf << in.rdbuf();
      CatalogEntry e{cfg.target, catalog::parse_metric(buf.str(), cfg.target), GroundTruth{},
                     buf.str()};
      return e;
    }
    return catalog::load(cfg.target);
  }();
  if (cfg.orientation != entry.patch.meta().orientation) {
    PatchMetadata meta = entry.patch.meta();
    meta.orientation = cfg.orientation;
    // Rebuild the patch with the requested orientation; evaluators are shared.
    entry = CatalogEntry{entry.name,
                         MetricPatch(entry.patch.domain(),
                                     [p = std::make_shared<MetricPatch>(entry.patch)](
                                         const ChartPoint& q) { return p->eval(q); },
                                     meta, std::nullopt, entry.patch.fd()),
                         entry.truth, entry.definition};
  }
  return entry;
}

AnalyzeResult run_analyze(const CatalogEntry& entry, const RunConfig& cfg, bool keep_points) {
  std::vector<Condition> selected = cfg.selected;
  if (selected.empty())
    selected = {Condition::middle_eigenvalue, Condition::half_pic, Condition::asd,
                Condition::kahler_spectrum};
  conditions::SweepOptions opts;
  opts.resolution = cfg.resolution;
  opts.tolerances = cfg.tolerances;
  opts.workers = cfg.workers;
  opts.budget = cfg.budget;
  opts.keep_points = keep_points;
  return classify(conditions::grid_sweep(entry.patch, selected, opts));
}

VerifyResult run_verify(const CatalogEntry& entry, const RunConfig& cfg) {
  VerifyResult r;
  const Tolerances tol = cfg.tolerances;

  // Algebraic identity sweeps (implementation-independent randomness).
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> scalars(-24.0, 24.0);
  r.algebraic_samples = 100000;
  for (std::size_t i = 0; i < r.algebraic_samples; ++i) {
    const double a = unit(rng), b = unit(rng);
    std::array<double, 3> lam = {a, b, -a - b};
    std::sort(lam.begin(), lam.end());
    const double s = scalars(rng);
    const double lmax = std::max(std::abs(lam[0]), std::abs(lam[2]));
    const double scale = std::max({1.0, std::abs(s) * lmax, lmax * lmax});
    r.eigenvalue_identity_max =
        std::max(r.eigenvalue_identity_max,
                 std::abs(decomp::eigenvalue_inequality_identity(lam, s)) / scale);
    const double l = 4.0 * unit(rng);
    const auto [unf, fac] =
        decomp::root_factorization(l, s, (i % 2 == 0) ? RootForm::lambda1 : RootForm::lambda3);
    const double rscale = std::max({1.0, std::abs(unf), std::abs(fac)});
    r.root_factorization_max =
        std::max(r.root_factorization_max, std::abs(unf - fac) / rscale);
  }
  r.weitzenbock_samples = 1000;
  for (std::size_t i = 0; i < r.weitzenbock_samples; ++i) {
    Mat3 w;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) w(a, b) = w(b, a) = unit(rng);
    w -= (w.trace() / 3.0) * Mat3::Identity();
    WeylBlock block{w, 0.0, Side::self_dual};
    const double s = scalars(rng);
    const Mat3 f1 = decomp::weitzenbock_rhs(block, s, WeitzenbockForm::quadratic_adjugate);
    const Mat3 f2 = decomp::weitzenbock_rhs(block, s, WeitzenbockForm::composition_norm);
    const double scale = std::max({1.0, f1.norm(), f2.norm()});
    r.weitzenbock_forms_max = std::max(r.weitzenbock_forms_max, (f1 - f2).norm() / scale);
  }
  r.algebraic_pass = r.eigenvalue_identity_max < tol.algebraic &&
                     r.root_factorization_max < tol.algebraic &&
                     r.weitzenbock_forms_max < 1e-12;

  // Finite-difference residuals over the grid.
  conditions::SweepOptions opts;
  opts.resolution = cfg.resolution;
  opts.tolerances = tol;
  opts.workers = cfg.workers;
  opts.budget = cfg.budget;
  opts.keep_points = true;
  r.sweep = conditions::grid_sweep(
      entry.patch, {Condition::divergence, Condition::weitzenbock}, opts);

  double div_max = 0.0, weitz_max = 0.0;
  bool applicable = true;
  for (const auto& s : r.sweep.summaries) {
    if (s.condition == Condition::divergence) div_max = s.extremum;
    if (s.condition == Condition::weitzenbock) weitz_max = s.extremum;
  }
  for (const auto& rec : r.sweep.points) applicable = applicable && rec.weitzenbock_applicable;
  r.weitzenbock_applicable = applicable;

  if (entry.truth.einstein_constant) {
    r.divergence_expectation = "einstein (delta W+ ~ 0)";
    r.divergence_pass = div_max < tol.fd;
  } else if (entry.truth.catalog_entry) {
    // A catalog entry without an Einstein constant is a negative control:
    // the detector must fire.
    r.divergence_expectation = "non-einstein (detector must fire)";
    r.divergence_pass = div_max > 1e-2;
  } else {
    r.divergence_expectation = "unknown (informational)";
    r.divergence_pass = true;
  }
  r.weitzenbock_pass = !r.weitzenbock_applicable || weitz_max < tol.fd;

  // Kähler-form construction where the ground truth (or the spectrum) allows.
  if (entry.truth.kahler || !entry.truth.catalog_entry) {
    try {
      double nab_max = 0.0, jj_max = 0.0;
      for (const auto& rec : r.sweep.points) {
        const TensorField omega =
            conditions::distinguished_eigenform_field(entry.patch, rec.point);
        nab_max = std::max(nab_max,
                           conditions::kahler_form_parallel(entry.patch, rec.point, omega));
        const std::vector<double> w = omega.eval(rec.point);
        Mat4 omega_m;
        for (int i = 0; i < 4; ++i)
          for (int jx = 0; jx < 4; ++jx) omega_m(i, jx) = w[std::size_t(i * 4 + jx)];
        jj_max = std::max(jj_max, conditions::check_almost_complex(
                                      omega_m, entry.patch.eval(rec.point)));
      }
      r.parallel_form_max = nab_max;
      r.almost_complex_max = jj_max;
      r.parallel_pass = nab_max < tol.fd && jj_max < 1e-6;
    } catch (const DegenerateEigenvectorError&) {
      r.parallel_form_note = "not applicable: distinguished W+ eigenvalue is not isolated";
      r.parallel_pass = true;
    }
  } else {
    r.parallel_form_note = "not applicable: not Kähler";
    r.parallel_pass = true;
  }

  r.all_pass = r.algebraic_pass && r.divergence_pass && r.weitzenbock_pass && r.parallel_pass;
  return r;
}

}  // namespace weylscope::report
