#include "weylscope/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "weylscope/conditions.hpp"
#include "weylscope/decomp.hpp"
#include "weylscope/errors.hpp"
#include "weylscope/expr.hpp"
#include "weylscope/tensor.hpp"

namespace weylscope::catalog {

namespace {

double sq(double v) { return v * v; }

// ---------------------------------------------------------------------------
// Built-in evaluators (closed form; analytic d_k g where it is a one-liner).
// ---------------------------------------------------------------------------

Mat4 flat_metric(const ChartPoint&) { return Mat4::Identity(); }

Mat4 s4_metric(const ChartPoint& p) {
  const double q = sq(p.x[0]) + sq(p.x[1]) + sq(p.x[2]) + sq(p.x[3]);
  return Mat4::Identity() * (4.0 / sq(1.0 + q));
}

Mat4 s4_deriv(const ChartPoint& p, int k) {
  const double q = sq(p.x[0]) + sq(p.x[1]) + sq(p.x[2]) + sq(p.x[3]);
  return Mat4::Identity() * (-16.0 * p.x[k] / std::pow(1.0 + q, 3));
}

Mat4 h4_metric(const ChartPoint& p) {
  const double q = sq(p.x[0]) + sq(p.x[1]) + sq(p.x[2]) + sq(p.x[3]);
  return Mat4::Identity() * (4.0 / sq(1.0 - q));
}

Mat4 h4_deriv(const ChartPoint& p, int k) {
  const double q = sq(p.x[0]) + sq(p.x[1]) + sq(p.x[2]) + sq(p.x[3]);
  return Mat4::Identity() * (16.0 * p.x[k] / std::pow(1.0 - q, 3));
}

Mat4 s2xs2_metric(const ChartPoint& p) {
  Mat4 g = Mat4::Identity();
  g(1, 1) = sq(std::sin(p.x[0]));
  g(3, 3) = sq(std::sin(p.x[2]));
  return g;
}

Mat4 s2xs2_deriv(const ChartPoint& p, int k) {
  Mat4 d = Mat4::Zero();
  if (k == 0) d(1, 1) = std::sin(2.0 * p.x[0]);
  if (k == 2) d(3, 3) = std::sin(2.0 * p.x[2]);
  return d;
}

/// Fubini-Study in the affine chart, potential log(1+|z|^2) with
/// (z1, z2) = (x1 + i x2, x3 + i x4): Ric = 6 g, S = 24.
Mat4 cp2_metric(const ChartPoint& p) {
  const double x1 = p.x[0], x2 = p.x[1], x3 = p.x[2], x4 = p.x[3];
  const double q = sq(x1) + sq(x2) + sq(x3) + sq(x4);
  const double d = sq(1.0 + q);
  const double a11 = (1.0 + sq(x3) + sq(x4)) / d;
  const double a22 = (1.0 + sq(x1) + sq(x2)) / d;
  const double a12 = -(x1 * x3 + x2 * x4) / d;
  const double b12 = -(x1 * x4 - x2 * x3) / d;
  Mat4 g;
  g << a11, 0.0, a12, b12,
       0.0, a11, -b12, a12,
       a12, -b12, a22, 0.0,
       b12, a12, 0.0, a22;
  return g;
}

/// Bergman-ball analogue, potential -log(1-|z|^2): Ric = -6 g, S = -24.
Mat4 ch2_metric(const ChartPoint& p) {
  const double x1 = p.x[0], x2 = p.x[1], x3 = p.x[2], x4 = p.x[3];
  const double q = sq(x1) + sq(x2) + sq(x3) + sq(x4);
  const double d = sq(1.0 - q);
  const double a11 = (1.0 - sq(x3) - sq(x4)) / d;
  const double a22 = (1.0 - sq(x1) - sq(x2)) / d;
  const double a12 = (x1 * x3 + x2 * x4) / d;
  const double b12 = (x1 * x4 - x2 * x3) / d;
  Mat4 g;
  g << a11, 0.0, a12, b12,
       0.0, a11, -b12, a12,
       a12, -b12, a22, 0.0,
       b12, a12, 0.0, a22;
  return g;
}

/// Diagonal warped product with f = 1 + 0.1 sin(x1): not Einstein,
/// delta W+ stays above 1e-2 on the whole box (detector negative control).
Mat4 warped_metric(const ChartPoint& p) {
  const double f = 1.0 + 0.1 * std::sin(p.x[0]);
  Mat4 g = Mat4::Identity();
  g(1, 1) = f * f;
  g(2, 2) = f * f;
  return g;
}

Mat4 warped_deriv(const ChartPoint& p, int k) {
  Mat4 d = Mat4::Zero();
  if (k == 0) {
    const double f = 1.0 + 0.1 * std::sin(p.x[0]);
    d(1, 1) = d(2, 2) = 2.0 * f * 0.1 * std::cos(p.x[0]);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Definition-language re-expressions (also the report hash inputs).
// ---------------------------------------------------------------------------

const char* kFlatDefinition =
    "# flat 4-torus chart\n"
    "domain = [0,1]x[0,1]x[0,1]x[0,1]\n"
    "g11 = 1\ng22 = 1\ng33 = 1\ng44 = 1\n";

const char* kS4Definition =
    "# round 4-sphere, radius 1, stereographic chart\n"
    "domain = [-1.2,1.2]x[-1.2,1.2]x[-1.2,1.2]x[-1.2,1.2]\n"
    "g11 = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g22 = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g33 = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g44 = 4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n";

const char* kH4Definition =
    "# hyperbolic 4-space, Poincare ball chart\n"
    "domain = [-0.35,0.35]x[-0.35,0.35]x[-0.35,0.35]x[-0.35,0.35]\n"
    "g11 = 4/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g22 = 4/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g33 = 4/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g44 = 4/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n";

const char* kS2xS2Definition =
    "# product of two unit 2-spheres, poles excluded\n"
    "domain = [0.2,2.9415926535897931]x[0,6.2831853071795862]x"
    "[0.2,2.9415926535897931]x[0,6.2831853071795862]\n"
    "g11 = 1\ng22 = sin(x1)^2\ng33 = 1\ng44 = sin(x3)^2\n";

const char* kCp2Definition =
    "# Fubini-Study on the affine chart, Einstein normalization Ric = 6 g\n"
    "domain = [-0.5,0.5]x[-0.5,0.5]x[-0.5,0.5]x[-0.5,0.5]\n"
    "g11 = (1 + x3^2 + x4^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g22 = (1 + x3^2 + x4^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g33 = (1 + x1^2 + x2^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g44 = (1 + x1^2 + x2^2)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g13 = -(x1*x3 + x2*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g24 = -(x1*x3 + x2*x4)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g14 = -(x1*x4 - x2*x3)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n"
    "g23 = (x1*x4 - x2*x3)/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2\n";

const char* kCh2Definition =
    "# complex hyperbolic plane, Bergman ball chart, Ric = -6 g\n"
    "domain = [-0.35,0.35]x[-0.35,0.35]x[-0.35,0.35]x[-0.35,0.35]\n"
    "g11 = (1 - x3^2 - x4^2)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g22 = (1 - x3^2 - x4^2)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g33 = (1 - x1^2 - x2^2)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g44 = (1 - x1^2 - x2^2)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g13 = (x1*x3 + x2*x4)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g24 = (x1*x3 + x2*x4)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g14 = (x1*x4 - x2*x3)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n"
    "g23 = -(x1*x4 - x2*x3)/(1 - x1^2 - x2^2 - x3^2 - x4^2)^2\n";

const char* kWarpedDefinition =
    "# warped product probe: f(x1)^2 (dx2^2 + dx3^2), f = 1 + 0.1 sin(x1)\n"
    "domain = [0.1,1.2]x[0,1]x[0,1]x[0,1]\n"
    "g11 = 1\n"
    "g22 = (1 + 0.1*sin(x1))^2\n"
    "g33 = (1 + 0.1*sin(x1))^2\n"
    "g44 = 1\n";

CatalogEntry make_entry(const std::string& name) {
  auto domain = [](std::array<double, 4> lo, std::array<double, 4> hi,
                   const std::string& label) {
    return ChartDomain{lo, hi, label};
  };
  PatchMetadata meta;
  meta.name = name;

  if (name == "t4_flat") {
    meta.expected_scalar = 0.0;
    meta.expected_einstein_constant = 0.0;
    GroundTruth truth;
    truth.scalar_curvature = 0.0;
    truth.einstein_constant = 0.0;
    truth.weyl_plus_spectrum = {{0.0, 0.0, 0.0}};
    truth.kahler = true;
    truth.orientation_note = "chart order; flat, so W+ = W- = 0 either way";
    truth.provenance = {
        {"scalar_curvature", "constant metric: all derivatives vanish"},
        {"weyl_plus_spectrum", "flat: curvature operator is zero"},
        {"einstein_constant", "Ric = 0 for a flat metric"}};
    return CatalogEntry{name,
                        MetricPatch(domain({0, 0, 0, 0}, {1, 1, 1, 1}, name), flat_metric, meta,
                                    MetricDerivFn([](const ChartPoint&, int) { return Mat4::Zero(); })),
                        truth, kFlatDefinition};
  }
  if (name == "s4_round") {
    meta.expected_scalar = 12.0;
    meta.expected_einstein_constant = 3.0;
    GroundTruth truth;
    truth.scalar_curvature = 12.0;
    truth.einstein_constant = 3.0;
    truth.weyl_plus_spectrum = {{0.0, 0.0, 0.0}};
    truth.kahler = false;
    truth.orientation_note = "chart order; conformally flat, orientation immaterial";
    truth.provenance = {
        {"scalar_curvature", "constant-curvature identity R = g (.) g; symbolic oracle"},
        {"weyl_plus_spectrum", "conformally flat: W = 0; symbolic oracle"},
        {"einstein_constant", "Ric = (n-1) g on the unit n-sphere"}};
    return CatalogEntry{name,
                        MetricPatch(domain({-1.2, -1.2, -1.2, -1.2}, {1.2, 1.2, 1.2, 1.2}, name),
                                    s4_metric, meta, MetricDerivFn(s4_deriv)),
                        truth, kS4Definition};
  }
  if (name == "h4_hyperbolic") {
    meta.expected_scalar = -12.0;
    meta.expected_einstein_constant = -3.0;
    GroundTruth truth;
    truth.scalar_curvature = -12.0;
    truth.einstein_constant = -3.0;
    truth.weyl_plus_spectrum = {{0.0, 0.0, 0.0}};
    truth.kahler = false;
    truth.orientation_note = "chart order; conformally flat";
    truth.provenance = {
        {"scalar_curvature", "constant curvature -1; symbolic oracle"},
        {"weyl_plus_spectrum", "conformally flat: W = 0"},
        {"einstein_constant", "Ric = -(n-1) g on hyperbolic n-space"}};
    return CatalogEntry{name,
                        MetricPatch(domain({-0.35, -0.35, -0.35, -0.35}, {0.35, 0.35, 0.35, 0.35},
                                           name),
                                    h4_metric, meta, MetricDerivFn(h4_deriv)),
                        truth, kH4Definition};
  }
  if (name == "s2xs2") {
    meta.expected_scalar = 4.0;
    meta.expected_einstein_constant = 1.0;
    GroundTruth truth;
    truth.scalar_curvature = 4.0;
    truth.einstein_constant = 1.0;
    truth.weyl_plus_spectrum = {{-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0}};
    truth.kahler = true;
    truth.orientation_note = "chart order (theta1, phi1, theta2, phi2): product form self-dual";
    truth.provenance = {
        {"scalar_curvature", "sum of the factor curvatures 2 + 2; symbolic oracle"},
        {"weyl_plus_spectrum", "product-metric curvature; symbolic oracle"},
        {"einstein_constant", "Ric = K g on each unit-sphere factor"}};
    return CatalogEntry{
        name,
        MetricPatch(domain({0.2, 0.0, 0.2, 0.0},
                           {M_PI - 0.2, 2.0 * M_PI, M_PI - 0.2, 2.0 * M_PI}, name),
                    s2xs2_metric, meta, MetricDerivFn(s2xs2_deriv)),
        truth, kS2xS2Definition};
  }
  if (name == "cp2_fubini_study") {
    meta.expected_scalar = 24.0;
    meta.expected_einstein_constant = 6.0;
    GroundTruth truth;
    truth.scalar_curvature = 24.0;
    truth.einstein_constant = 6.0;
    truth.weyl_plus_spectrum = {{-2.0, -2.0, 4.0}};
    truth.kahler = true;
    truth.orientation_note =
        "complex orientation (x1,x2,x3,x4) = (Re z1, Im z1, Re z2, Im z2); W- = 0";
    truth.provenance = {
        {"scalar_curvature", "exact rational symbolic oracle at sample points"},
        {"weyl_plus_spectrum", "symbolic oracle; equals (S/6, -S/12, -S/12) with S = 24"},
        {"einstein_constant", "Ricci form of the Fubini-Study potential; symbolic oracle"}};
    return CatalogEntry{name,
                        MetricPatch(domain({-0.5, -0.5, -0.5, -0.5}, {0.5, 0.5, 0.5, 0.5}, name),
                                    cp2_metric, meta),
                        truth, kCp2Definition};
  }
  if (name == "ch2_complex_hyperbolic") {
    meta.expected_scalar = -24.0;
    meta.expected_einstein_constant = -6.0;
    GroundTruth truth;
    truth.scalar_curvature = -24.0;
    truth.einstein_constant = -6.0;
    truth.weyl_plus_spectrum = {{-4.0, 2.0, 2.0}};
    truth.kahler = true;
    truth.orientation_note = "complex orientation; W- = 0";
    truth.provenance = {
        {"scalar_curvature", "exact rational symbolic oracle at sample points"},
        {"weyl_plus_spectrum", "symbolic oracle; equals (S/6, -S/12, -S/12) with S = -24"},
        {"einstein_constant", "Ricci form of the Bergman potential; symbolic oracle"}};
    return CatalogEntry{name,
                        MetricPatch(domain({-0.35, -0.35, -0.35, -0.35}, {0.35, 0.35, 0.35, 0.35},
                                           name),
                                    ch2_metric, meta),
                        truth, kCh2Definition};
  }
  if (name == "warped_probe") {
    GroundTruth truth;
    truth.kahler = false;
    truth.orientation_note = "chart order; W+ = W- (diagonal warped product)";
    truth.provenance = {
        {"einstein_constant",
         "not Einstein: traceless Ricci block nonzero; symbolic oracle"},
        {"divergence",
         "symbolic oracle: |delta W+| in [0.0135, 0.0407] on the box, > 1e-2 everywhere"}};
    return CatalogEntry{name,
                        MetricPatch(domain({0.1, 0.0, 0.0, 0.0}, {1.2, 1.0, 1.0, 1.0}, name),
                                    warped_metric, meta, MetricDerivFn(warped_deriv)),
                        truth, kWarpedDefinition};
  }
  throw UnknownEntryError("unknown catalog entry '" + name + "' (try: " + [] {
    std::string all;
    for (const auto& n : names()) {
      if (!all.empty()) all += ", ";
      all += n;
    }
    return all;
  }() + ")");
}

void self_test(const CatalogEntry& entry) {
  std::mt19937_64 rng(fnv1a64(entry.name));
  const ChartDomain box = entry.patch.interior_box(tensor::kReachRiemann.h2,
                                                   tensor::kReachRiemann.h1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    ChartPoint p;
    for (int i = 0; i < 4; ++i)
      p.x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
    const CurvatureData cd = tensor::riemann(entry.patch, p);
    if (entry.truth.scalar_curvature) {
      const double want = *entry.truth.scalar_curvature;
      if (std::abs(cd.scalar - want) > 1e-5 * std::max(1.0, std::abs(want)))
        throw ValidationError("catalog self-test failed for '" + entry.name +
                              "': S = " + std::to_string(cd.scalar) + ", ground truth " +
                              std::to_string(want));
    }
    if (entry.truth.weyl_plus_spectrum) {
      const BivectorBasis basis = frames::selfdual_basis(cd.frame, cd.metric);
      const CurvatureOperator op = decomp::curvature_operator(cd, basis);
      const WeylSpectrum spec =
          decomp::spectrum(decomp::extract_weyl(op, cd.scalar, Side::self_dual));
      for (int i = 0; i < 3; ++i) {
        const double want = (*entry.truth.weyl_plus_spectrum)[i];
        if (std::abs(spec.lambda[i] - want) > 1e-5 * std::max(1.0, std::abs(want)))
          throw ValidationError("catalog self-test failed for '" + entry.name +
                                "': lambda" + std::to_string(i + 1) + " = " +
                                std::to_string(spec.lambda[i]) + ", ground truth " +
                                std::to_string(want));
      }
    }
  }
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> list = {
      "t4_flat",   "s4_round",          "h4_hyperbolic",          "s2xs2",
      "cp2_fubini_study", "ch2_complex_hyperbolic", "warped_probe",
  };
  return list;
}

CatalogEntry load(const std::string& name, bool run_self_test) {
  CatalogEntry entry = make_entry(name);
  entry.truth.catalog_entry = true;
  if (run_self_test) self_test(entry);
  return entry;
}

// ---------------------------------------------------------------------------
// Metric-definition language
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::array<double, 2> parse_interval(const std::string& text, int line) {
  // "[a,b]"
  const std::string t = trim(text);
  if (t.size() < 5 || t.front() != '[' || t.back() != ']')
    throw SyntaxError("line " + std::to_string(line) + ": expected interval [a,b], found '" + t +
                          "'",
                      line, 1);
  const std::size_t comma = t.find(',');
  if (comma == std::string::npos)
    throw SyntaxError("line " + std::to_string(line) + ": expected ',' inside interval", line, 1);
  try {
    const double lo = std::stod(t.substr(1, comma - 1));
    const double hi = std::stod(t.substr(comma + 1, t.size() - comma - 2));
    return {lo, hi};
  } catch (const std::exception&) {
    throw SyntaxError("line " + std::to_string(line) + ": malformed interval '" + t + "'", line,
                      1);
  }
}

}  // namespace

MetricPatch parse_metric(const std::string& source, const std::string& name) {
  std::array<std::array<expr::NodePtr, 4>, 4> comps{};
  ChartDomain domain{{0, 0, 0, 0}, {1, 1, 1, 1}, name};
  int orientation = +1;

  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);

    std::size_t start = 0;
    while (start <= raw.size()) {
      std::size_t semi = raw.find(';', start);
      std::string stmt = trim(raw.substr(start, semi == std::string::npos ? std::string::npos
                                                                          : semi - start));
      start = (semi == std::string::npos) ? raw.size() + 1 : semi + 1;
      if (stmt.empty()) continue;

      const std::size_t eq = stmt.find('=');
      if (eq == std::string::npos)
        throw SyntaxError("line " + std::to_string(line_no) + ": expected 'name = value'",
                          line_no, 1);
      const std::string key = trim(stmt.substr(0, eq));
      const std::string value = trim(stmt.substr(eq + 1));

      if (key == "domain") {
        // [a,b]x[a,b]x[a,b]x[a,b]
        std::array<std::string, 4> parts;
        std::size_t p = 0;
        for (int i = 0; i < 4; ++i) {
          const std::size_t close = value.find(']', p);
          if (close == std::string::npos)
            throw SyntaxError("line " + std::to_string(line_no) +
                                  ": domain needs four intervals [a,b]x[a,b]x[a,b]x[a,b]",
                              line_no, 1);
          parts[std::size_t(i)] = value.substr(p, close - p + 1);
          p = close + 1;
          if (i < 3) {
            if (p >= value.size() || (value[p] != 'x' && value[p] != 'X'))
              throw SyntaxError("line " + std::to_string(line_no) +
                                    ": expected 'x' between domain intervals",
                                line_no, int(p) + 1);
            ++p;
          }
        }
        for (int i = 0; i < 4; ++i) {
          const auto iv = parse_interval(parts[std::size_t(i)], line_no);
          domain.lower[std::size_t(i)] = iv[0];
          domain.upper[std::size_t(i)] = iv[1];
        }
        continue;
      }
      if (key == "orientation") {
        if (value == "+1" || value == "1")
          orientation = +1;
        else if (value == "-1")
          orientation = -1;
        else
          throw SyntaxError("line " + std::to_string(line_no) + ": orientation must be +1 or -1",
                            line_no, 1);
        continue;
      }
      if (key.size() == 3 && key[0] == 'g' && key[1] >= '1' && key[1] <= '4' && key[2] >= '1' &&
          key[2] <= '4') {
        const int i = key[1] - '1';
        const int j = key[2] - '1';
        if (comps[std::size_t(i)][std::size_t(j)])
          throw SyntaxError("line " + std::to_string(line_no) + ": duplicate assignment to " + key,
                            line_no, 1);
        comps[std::size_t(i)][std::size_t(j)] = expr::parse_expression(value, line_no);
        continue;
      }
      throw UndefinedSymbolError("line " + std::to_string(line_no) + ": unknown declaration '" +
                                 key + "' (expected gIJ, domain, orientation)");
    }
  }

  for (int i = 0; i < 4; ++i)
    if (!comps[std::size_t(i)][std::size_t(i)])
      throw UndefinedSymbolError("metric definition incomplete: diagonal component g" +
                                 std::to_string(i + 1) + std::to_string(i + 1) +
                                 " was never assigned");

  // When both g_ij and g_ji are given they must agree (checked at sample
  // points); otherwise mirror the one provided.
  domain.validate();
  std::mt19937_64 rng(fnv1a64(source));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const expr::NodePtr& a = comps[std::size_t(i)][std::size_t(j)];
      const expr::NodePtr& b = comps[std::size_t(j)][std::size_t(i)];
      if (a && b) {
        for (int trial = 0; trial < 32; ++trial) {
          std::array<double, 4> x;
          for (int k = 0; k < 4; ++k)
            x[std::size_t(k)] =
                domain.lower[std::size_t(k)] + domain.extent(k) * unit(rng);
          const double va = expr::evaluate(*a, x);
          const double vb = expr::evaluate(*b, x);
          if (std::abs(va - vb) > 1e-12 * std::max({1.0, std::abs(va), std::abs(vb)}))
            throw NonSymmetricError("g" + std::to_string(i + 1) + std::to_string(j + 1) +
                                    " and g" + std::to_string(j + 1) + std::to_string(i + 1) +
                                    " are both given and differ");
        }
      }
    }

  PatchMetadata meta;
  meta.name = name;
  meta.orientation = orientation;

  auto table = std::make_shared<std::array<std::array<expr::NodePtr, 4>, 4>>(comps);
  MetricFn fn = [table](const ChartPoint& p) {
    Mat4 g = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const expr::NodePtr& node = (*table)[std::size_t(i)][std::size_t(j)];
        if (node) g(i, j) = expr::evaluate(*node, p.x);
      }
    // Mirror one-sided off-diagonal assignments.
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const bool has_ij = bool((*table)[std::size_t(i)][std::size_t(j)]);
        const bool has_ji = bool((*table)[std::size_t(j)][std::size_t(i)]);
        if (has_ij && !has_ji) g(j, i) = g(i, j);
        if (has_ji && !has_ij) g(i, j) = g(j, i);
      }
    return g;
  };
  return MetricPatch(std::move(domain), std::move(fn), std::move(meta));
}

MetricPatch parse_metric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open metric definition file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric(buf.str(), path);
}

}  // namespace weylscope::catalog
