#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "weylscope/catalog.hpp"
#include "weylscope/errors.hpp"
#include "weylscope/metric.hpp"

using namespace weylscope;

TEST_SUITE("metric") {

TEST_CASE("catalog evaluations at distinguished points") {
  const ChartPoint origin{};

  const auto flat = catalog::load("t4_flat", false);
  ChartPoint inside{{0.3, 0.4, 0.5, 0.6}};
  CHECK((flat.patch.eval(inside) - Mat4::Identity()).norm() == doctest::Approx(0.0));

  // Stereographic conformal factor 4/(1+|x|^2)^2 = 4 at the origin.
  const auto s4 = catalog::load("s4_round", false);
  CHECK((s4.patch.eval(origin) - 4.0 * Mat4::Identity()).norm() == doctest::Approx(0.0));

  // Poincare ball factor 4/(1-|x|^2)^2 = 4 at the origin.
  const auto h4 = catalog::load("h4_hyperbolic", false);
  CHECK((h4.patch.eval(origin) - 4.0 * Mat4::Identity()).norm() == doctest::Approx(0.0));
}

TEST_CASE("domain membership") {
  const auto flat = catalog::load("t4_flat", false);
  CHECK_THROWS_AS(flat.patch.eval(ChartPoint{{1.5, 0.5, 0.5, 0.5}}), DomainError);
  CHECK_THROWS_AS(flat.patch.eval(ChartPoint{{0.5, 0.5, 0.5, std::nan("")}}), DomainError);
  // Margins: a point close to the wall fails the stencil check but not eval.
  ChartPoint near_wall{{1e-4, 0.5, 0.5, 0.5}};
  CHECK_NOTHROW(flat.patch.eval(near_wall));
  CHECK_THROWS_AS(flat.patch.require_margin(near_wall, 2.0, 2.0), DomainError);
}

TEST_CASE("degenerate metrics are rejected, not regularized") {
  MetricPatch patch(ChartDomain{{-1, -1, -1, -1}, {1, 1, 1, 1}, "pinch"},
                    [](const ChartPoint& p) {
                      Mat4 g = Mat4::Identity();
                      g(3, 3) = p.x[0];  // loses positivity at x1 <= 0
                      return g;
                    });
  CHECK_NOTHROW(patch.eval(ChartPoint{{0.5, 0, 0, 0}}));
  CHECK_THROWS_AS(patch.eval(ChartPoint{{0.0, 0, 0, 0}}), DegenerateMetricError);
  CHECK_THROWS_AS(patch.eval(ChartPoint{{-0.5, 0, 0, 0}}), DegenerateMetricError);
  CHECK_THROWS_AS(patch.eval(ChartPoint{{5e-11, 0, 0, 0}}), DegenerateMetricError);
}

TEST_CASE("analytic derivatives are validated against finite differences") {
  auto metric = [](const ChartPoint& p) {
    Mat4 g = Mat4::Identity();
    g(1, 1) = 1.0 + 0.5 * std::sin(p.x[0]);
    return g;
  };
  auto good = [](const ChartPoint& p, int k) {
    Mat4 d = Mat4::Zero();
    if (k == 0) d(1, 1) = 0.5 * std::cos(p.x[0]);
    return d;
  };
  auto bad = [](const ChartPoint& p, int k) {
    Mat4 d = Mat4::Zero();
    if (k == 0) d(1, 1) = 0.5 * std::cos(p.x[0]) + 0.01;
    return d;
  };
  const ChartDomain box{{0, 0, 0, 0}, {1, 1, 1, 1}, "warp"};
  CHECK_NOTHROW(MetricPatch(box, metric, {}, MetricDerivFn(good)));
  CHECK_THROWS_AS(MetricPatch(box, metric, {}, MetricDerivFn(bad)), ValidationError);
}

TEST_CASE("invalid domains and orientations") {
  CHECK_THROWS_AS(MetricPatch(ChartDomain{{0, 0, 0, 0}, {1, 0, 1, 1}, "bad"},
                              [](const ChartPoint&) { return Mat4::Identity(); }),
                  ValidationError);
  PatchMetadata meta;
  meta.orientation = 2;
  CHECK_THROWS_AS(MetricPatch(ChartDomain{{0, 0, 0, 0}, {1, 1, 1, 1}, "bad"},
                              [](const ChartPoint&) { return Mat4::Identity(); }, meta),
                  ValidationError);
}

TEST_CASE("rescaling rescales expectations") {
  const auto s4 = catalog::load("s4_round", false);
  const MetricPatch doubled = s4.patch.rescaled(2.0);
  CHECK(*doubled.meta().expected_scalar == doctest::Approx(3.0));
  CHECK((doubled.eval(ChartPoint{}) - 16.0 * Mat4::Identity()).norm() ==
        doctest::Approx(0.0).epsilon(1e-14));
}

}  // TEST_SUITE
