#include <doctest.h>

#include <cmath>

#include "islandlab/oracles.hpp"
#include "islandlab/interpolate.hpp"
#include "islandlab/pipeline.hpp"
#include "islandlab/topology.hpp"
#include "test_helpers.hpp"

using namespace islandlab;
using test::couette_shape;
using test::kPi;

namespace {

ScalarField couette_island_field(const CaseContext& ctx, double eps, EpsilonRun* out = nullptr) {
  RunOptions opts;
  opts.deltas = {0.1, 0.2};
  EpsilonRun run = run_epsilon(ctx, eps, opts);
  ScalarField field = run.steady.field;
  if (out) *out = std::move(run);
  return field;
}

}  // namespace

TEST_CASE("flat shear scan reports a degenerate critical line") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 0.0), test::couette_F(), 32, 33);
  auto grid = build_grid(ctx.shape, 32, 33);
  ScalarField psi(grid);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 33; ++j) psi(i, j) = ctx.profile.psi()[j];
  }
  const auto points = find_critical_points(psi);
  REQUIRE(!points.empty());
  for (const CriticalPoint& p : points) {
    CHECK(p.kind == CriticalKind::Degenerate);
    CHECK(std::abs(p.y) < 4.0 / (32 * 32));
    CHECK(p.value == doctest::Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("couette island field has one maximum and one saddle per period") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 1.0), test::couette_F(), 64, 65);
  const ScalarField field = couette_island_field(ctx, 0.05);
  const auto points = find_critical_points(field);

  int maxima = 0, saddles = 0;
  const CriticalPoint* mx = nullptr;
  const CriticalPoint* sd = nullptr;
  for (const CriticalPoint& p : points) {
    if (std::abs(p.y) > 0.4) continue;
    if (p.kind == CriticalKind::Maximum) {
      ++maxima;
      mx = &p;
    }
    if (p.kind == CriticalKind::Saddle) {
      ++saddles;
      sd = &p;
    }
  }
  REQUIRE(maxima == 1);
  REQUIRE(saddles == 1);
  CHECK(std::abs(std::remainder(mx->x, kTwoPi)) < 0.05);
  CHECK(std::abs(std::remainder(sd->x - kPi, kTwoPi)) < 0.05);
  CHECK(std::abs(mx->y) < 0.05);
  CHECK(std::hypot(mx->hxx, mx->hxy) < std::abs(mx->hyy));  // anisotropic hessian

  // the no-polish scan agrees on the extremum location
  const auto brute = brute_force_extrema(field, 8);
  bool matched = false;
  for (const CriticalPoint& b : brute) {
    if (b.kind != CriticalKind::Maximum || std::abs(b.y) > 0.4) continue;
    const double dx = std::abs(std::remainder(b.x - mx->x, kTwoPi));
    if (dx <= 2.0 * field.grid().dx() / 8 && std::abs(b.y - mx->y) <= 2.0 * 2.0 / 64 / 8) {
      matched = true;
    }
  }
  CHECK(matched);
}

TEST_CASE("monotone harmonic fields have no critical points") {
  const Nonlinearity F = Nonlinearity::constant(0.0);
  auto grid = build_grid(BoundaryShape::flat_channel(0.0, 1.0), 32, 33);
  const ShearProfile p = solve_shear(F, 0.0, 1.0, 33);
  const ShearExtension ext(p, F, 0.1);
  const SteadyResult r =
      solve_steady(grid, F, shear_initial_guess(grid, ext), kPi * kPi / 4.0);
  CHECK(find_critical_points(r.field).empty());
}

TEST_CASE("synthetic product field critical points match the oracle") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 48, 49);
  ScalarField f(grid);
  for (int i = 0; i < 48; ++i) {
    for (int j = 0; j < 49; ++j) f(i, j) = std::sin(grid->x(i)) * std::cos(grid->y(i, j));
  }
  const auto points = find_critical_points(f);
  int extrema = 0;
  for (const CriticalPoint& p : points) {
    if (p.kind == CriticalKind::Maximum) {
      ++extrema;
      CHECK(p.x == doctest::Approx(kPi / 2).epsilon(1e-6));
      CHECK(std::abs(p.y) < 1e-6);
      CHECK(p.value == doctest::Approx(1.0).epsilon(1e-6));
    }
    if (p.kind == CriticalKind::Minimum) {
      ++extrema;
      CHECK(p.x == doctest::Approx(3 * kPi / 2).epsilon(1e-6));
    }
  }
  CHECK(extrema == 2);
}

TEST_CASE("level sets of the shear wrap the channel") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 0.0), test::couette_F(), 32, 33);
  auto grid = build_grid(ctx.shape, 32, 33);
  ScalarField psi(grid);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 33; ++j) psi(i, j) = ctx.profile.psi()[j];
  }
  const auto contours = trace_level_set(psi, 0.25, 1);
  REQUIRE(contours.size() == 2);  // one crossing height on each side of y = 0
  for (const Contour& c : contours) {
    CHECK(c.closed);
    CHECK(std::abs(c.winding) == 1);
    CHECK_FALSE(c.contractible());
  }
}

TEST_CASE("island levels produce a contractible contour around the maximum") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 1.0), test::couette_F(), 64, 65);
  EpsilonRun run;
  const ScalarField field = couette_island_field(ctx, 0.02, &run);
  REQUIRE(!run.islands.empty());
  const IslandReport& island = run.islands.front();
  REQUIRE(!island.levels.empty());
  for (const IslandLevel& lv : island.levels) {
    CHECK(lv.contour.contractible());
    CHECK(lv.contour.encloses(island.center.x, island.center.y));
    CHECK(lv.c2 / lv.c1 <= 10.0);
    CHECK(lv.height >= std::sqrt(lv.c1 * lv.delta * 0.02));
    CHECK(lv.height <= 2.0 * std::sqrt(lv.c2 * lv.delta * 0.02));
  }
  CHECK(island.levels.back().height >= island.levels.front().height);  // monotone in delta
  CHECK(island.has_separatrix);
  CHECK(island.separatrix_level < island.center.value);
}

TEST_CASE("contours close exactly and saddle levels are deterministic") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 1.0), test::couette_F(), 48, 49);
  const ScalarField field = couette_island_field(ctx, 0.03);
  const auto points = find_critical_points(field);
  double saddle_value = 0.0;
  for (const CriticalPoint& p : points) {
    if (p.kind == CriticalKind::Saddle && std::abs(p.y) < 0.4) saddle_value = p.value;
  }
  REQUIRE(saddle_value != 0.0);

  for (double level : {saddle_value, 0.25, 0.49}) {
    const auto a = trace_level_set(field, level, 2);
    const auto b = trace_level_set(field, level, 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      REQUIRE(a[k].x.size() == b[k].x.size());
      for (std::size_t m = 0; m < a[k].x.size(); ++m) {
        CHECK(a[k].x[m] == b[k].x[m]);
        CHECK(a[k].y[m] == b[k].y[m]);
      }
      if (a[k].closed) {
        // endpoints coincide physically; wrapping contours close modulo 2 pi
        CHECK(std::abs(a[k].x.front() + kTwoPi * a[k].winding - a[k].x.back()) <= 1e-9);
        CHECK(std::abs(a[k].y.front() - a[k].y.back()) <= 1e-9);
      }
    }
  }
}

TEST_CASE("no islands in the unperturbed shear") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 0.0), test::couette_F(), 32, 33);
  auto grid = build_grid(ctx.shape, 32, 33);
  ScalarField psi(grid);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 33; ++j) psi(i, j) = ctx.profile.psi()[j];
  }
  const std::vector<double> deltas{0.1, 0.2};
  CHECK(detect_islands(psi, ctx.profile, deltas).empty());
}

TEST_CASE("width-to-height ratio grows like the inverse square root of epsilon") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 1.0), test::couette_F(), 96, 129);
  RunOptions opts;
  opts.deltas = {0.2};
  const EpsilonRun r1 = run_epsilon(ctx, 0.02, opts);
  const EpsilonRun r2 = run_epsilon(ctx, 0.01, opts);
  REQUIRE(!r1.islands.empty());
  REQUIRE(!r2.islands.empty());
  const IslandLevel& a = r1.islands.front().levels.front();
  const IslandLevel& b = r2.islands.front().levels.front();
  const double growth = (b.width / b.height) / (a.width / a.height);
  CHECK(growth > 1.2);
  CHECK(growth < 1.7);
}

TEST_CASE("maxima and saddles alternate along the streamline") {
  for (int mode : {1, 2}) {
    const CaseContext ctx =
        prepare_case(couette_shape(0.0, mode, 1.0), test::couette_F(), 96, 97);
    const ScalarField field = couette_island_field(ctx, 0.02);
    int maxima = 0, saddles = 0;
    for (const CriticalPoint& p : find_critical_points(field)) {
      if (std::abs(p.y) > 0.4) continue;
      if (p.kind == CriticalKind::Maximum) ++maxima;
      if (p.kind == CriticalKind::Saddle) ++saddles;
    }
    CHECK(maxima == mode);
    CHECK(saddles == mode);
  }
}

TEST_CASE("singular streamline stays on the stagnation line at epsilon zero") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 1.0), test::couette_F(), 32, 65);
  auto grid = build_grid(ctx.shape.with_epsilon(0.0), 32, 65);
  ScalarField psi(grid);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 65; ++j) psi(i, j) = ctx.profile.psi()[j];
  }
  const StreamlineCurve curve = singular_streamline(psi, ctx.profile);
  CHECK(curve.dist_inf <= 1e-10);
}

TEST_CASE("rescaled streamline converges to the midline slope of the correction") {
  SUBCASE("translation pair: limit is 1/sinh(1)") {
    const CaseContext ctx =
        prepare_case(couette_shape(0.0, 1, 1.0, -1.0), test::couette_F(), 64, 129);
    double prev = 0.0;
    for (double eps : {0.02, 0.01}) {
      const EpsilonRun run = run_epsilon(ctx, eps, RunOptions{});
      REQUIRE(run.streamline_ok);
      const double scaled = run.streamline.dist_inf / eps;
      CHECK(scaled == doctest::Approx(1.0 / std::sinh(1.0)).epsilon(0.1));
      prev = scaled;
    }
    CHECK(prev == doctest::Approx(0.85092).epsilon(0.05));
  }
  SUBCASE("wavy top alone: limit is 1/(2 sinh(1))") {
    const CaseContext ctx =
        prepare_case(couette_shape(0.0, 1, 1.0), test::couette_F(), 64, 129);
    const EpsilonRun run = run_epsilon(ctx, 0.01, RunOptions{});
    REQUIRE(run.streamline_ok);
    CHECK(run.streamline.dist_inf / 0.01 ==
          doctest::Approx(1.0 / (2.0 * std::sinh(1.0))).epsilon(0.1));

    // root residual: d_y psi vanishes on the curve in scaled units
    const FieldSampler sampler(run.steady.field);
    const MappedGrid& g = run.steady.field.grid();
    double grad_scale = 0.0;
    for (int j = 1; j < g.ns() - 1; ++j) {
      grad_scale = std::max(grad_scale, std::abs(sampler.column_deriv_s(0, g.s(j))));
    }
    for (std::size_t i = 0; i < run.streamline.y.size(); ++i) {
      const int col = static_cast<int>(i);
      const double ds_val = sampler.column_deriv_s(col, g.s_of(col, run.streamline.y[i]));
      CHECK(std::abs(ds_val) <= 1e-9 * grad_scale);
    }
  }
  SUBCASE("translation pair has a nonconstant rescaled curve despite a flat trace") {
    const CaseContext ctx =
        prepare_case(couette_shape(0.0, 1, 1.0, -1.0), test::couette_F(), 64, 129);
    const EpsilonRun run = run_epsilon(ctx, 0.01, RunOptions{});
    REQUIRE(run.streamline_ok);
    CHECK(run.expansion.phi_on_gamma.osc <= 1e-8 * ctx.phi.max_abs());
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < run.streamline.y.size(); ++i) {
      const double scaled = (run.streamline.y[i] - run.streamline.y0) / 0.01;
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
      const double series = couette_dyphi_mid(ctx.shape.top_bump, run.streamline.x[i]);
      CHECK(std::abs(scaled - series) < 0.1);
    }
    CHECK(hi - lo > 1.0);  // genuinely nonconstant
  }
}

TEST_CASE("unequal wall values: islands appear around the off-center stagnation") {
  BoundaryShape shape = couette_shape(0.0, 1, 1.0);
  shape.c_top = 0.3;  // psi0' = 0.15 - y, stagnation away from the centerline
  const CaseContext ctx = prepare_case(shape, test::couette_F(), 96, 129);
  REQUIRE(ctx.profile.stagnation().size() == 1);
  CHECK(ctx.profile.primary_stagnation().y == doctest::Approx(0.15).epsilon(1e-9));
  CHECK(ctx.profile.deriv_top() == doctest::Approx(-0.85).epsilon(1e-9));
  CHECK(ctx.profile.deriv_bottom() == doctest::Approx(1.15).epsilon(1e-9));

  // constant bottom bump with a wavy top is the island-inducing instance
  CHECK(membership_b0(shape, ctx.F, ctx.profile, 96, 129).member);

  RunOptions opts;
  opts.deltas = {0.1, 0.2};
  const EpsilonRun run = run_epsilon(ctx, 0.02, opts);
  REQUIRE(!run.islands.empty());
  CHECK(std::abs(run.islands.front().center.y - 0.15) < 0.1);
  CHECK(run.expansion.phi_on_gamma.osc > 1e-3 * ctx.phi.max_abs());
  REQUIRE(run.streamline_ok);
  CHECK(run.streamline.dist_inf < 0.05);
}

TEST_CASE("window exit signals a missing root") {
  auto grid = build_grid(BoundaryShape::flat_channel(), 16, 33);
  ScalarField psi(grid);
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 33; ++j) {
      const double y = grid->y(i, j);
      psi(i, j) = 0.5 * (y - 0.9) * (y - 0.9);  // d_y psi root outside the window
    }
  }
  const ShearProfile fake = ShearProfile::from_samples(
      {-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0}, 0.0,
      0.0, {{0.0, 0.0, -1.0}});
  CHECK_THROWS_AS(singular_streamline(psi, fake), WindowExit);
}

TEST_CASE("hessian diagnostic recovers the vorticity and the trace curvature") {
  const CaseContext ctx = prepare_case(couette_shape(0.0, 1, 1.0), test::couette_F(), 96, 129);
  RunOptions opts;
  opts.deltas = {0.2};
  double prev_det = 0.0;
  for (double eps : {0.02, 0.01}) {
    const EpsilonRun run = run_epsilon(ctx, eps, opts);
    REQUIRE(run.hessian_ok);
    CHECK(run.hessian.hyy == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(run.hessian.det_over_eps == doctest::Approx(1.0 / (2.0 * std::cosh(1.0))).epsilon(0.2));
    if (prev_det != 0.0) {
      CHECK(std::abs(run.hessian.det_over_eps - prev_det) <= 0.2 * std::abs(prev_det));
    }
    prev_det = run.hessian.det_over_eps;
  }
}

TEST_CASE("degenerate points are rejected by the diagnostic") {
  CriticalPoint p;
  p.kind = CriticalKind::Degenerate;
  const ScalarField dummy;
  CHECK_THROWS_AS(hessian_diagnostic(dummy, p, 0.01), DegenerateHessian);
}
