// Acceptance suite: one scenario per criterion, each printing a PASS/FAIL
// line with the measured quantities. Run all with no arguments or a single
// criterion by number (1..10). Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "islandlab/experiments.hpp"
#include "islandlab/oracles.hpp"
#include "islandlab/pipeline.hpp"

using namespace islandlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;
  std::function<bool(std::string&)> run;
};

BoundaryShape cosine_shape(int h_mode, double h_amp, int g_mode = 1, double g_amp = 0.0) {
  BoundaryShape shape = BoundaryShape::flat_channel();
  if (h_amp != 0.0) shape.top_bump = FourierSeries::cosine(h_mode, h_amp);
  if (g_amp != 0.0) shape.bottom_bump = FourierSeries::cosine(g_mode, g_amp);
  return shape;
}

Nonlinearity couette_F() { return Nonlinearity::constant(-1.0); }

Nonlinearity sin_F() {
  Nonlinearity F = Nonlinearity::constant(-1.0);
  F.add_sin(0.3, 1.0, 0.0);
  return F;
}

std::string scratch_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("islandlab_acceptance_" + tag);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criterion 1: Couette oracle equivalence -------------------------------

double couette_phi_error(int nx, int ns) {
  const CaseContext ctx = prepare_case(cosine_shape(1, 1.0), couette_F(), nx, ns);
  const FourierSeries h = FourierSeries::cosine(1, 1.0);
  const FourierSeries g;
  double err = 0.0, scale = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) {
      const double exact = couette_phi(h, g, ctx.base_grid->x(i), ctx.base_grid->y(i, j));
      err = std::max(err, std::abs(ctx.phi(i, j) - exact));
      scale = std::max(scale, std::abs(exact));
    }
  }
  return err / scale;
}

bool criterion1(std::string& detail) {
  const double e_fine = couette_phi_error(128, 129);
  const double e_coarse = couette_phi_error(64, 65);
  const double order = std::log2(e_coarse / e_fine);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "rel_err(128x129)=%.3e (<=5e-4), order=%.2f (in [1.8,2.2])",
                e_fine, order);
  detail = buf;
  return e_fine <= 5e-4 && order >= 1.8 && order <= 2.2;
}

// --- criterion 2: remainder order ------------------------------------------

bool criterion2(std::string& detail) {
  const CaseContext ctx = prepare_case(cosine_shape(1, 1.0), couette_F(), 128, 193);
  RunOptions opts;
  opts.deltas = {};
  std::vector<double> eps{0.04, 0.02, 0.01, 0.005}, rs;
  for (double e : eps) rs.push_back(run_epsilon(ctx, e, opts).expansion.r_max);
  const FitResult fit = loglog_fit(eps, rs);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "||r||={%.2e,%.2e,%.2e,%.2e}, slope=%.3f (in [1.7,2.3])", rs[0], rs[1], rs[2],
                rs[3], fit.slope);
  detail = buf;
  return fit.valid && fit.slope >= 1.7 && fit.slope <= 2.3;
}

// --- criterion 3: island-height scaling over the B0 matrix ------------------

bool criterion3(std::string& detail) {
  struct Config {
    const char* name;
    BoundaryShape shape;
    Nonlinearity F;
  };
  const std::vector<Config> configs = {
      {"h=cos x (F=-1)", cosine_shape(1, 1.0), couette_F()},
      {"h=cos 2x (F=-1)", cosine_shape(2, 1.0), couette_F()},
      {"h=g=cos x (F=-1)", cosine_shape(1, 1.0, 1, 1.0), couette_F()},
      {"h=cos x (F=-1+0.3sin)", cosine_shape(1, 1.0), sin_F()},
      {"h=cos 2x (F=-1+0.3sin)", cosine_shape(2, 1.0), sin_F()},
      {"h=g=cos x (F=-1+0.3sin)", cosine_shape(1, 1.0, 1, 1.0), sin_F()},
  };
  const std::vector<double> eps{0.04, 0.02, 0.01, 0.005};
  bool ok = true;
  std::ostringstream out;
  for (const Config& cfg : configs) {
    const CaseContext ctx = prepare_case(cfg.shape, cfg.F, 128, 193);
    if (!membership_b0(cfg.shape, cfg.F, ctx.profile, 128, 193).member) {
      out << cfg.name << ": NOT in B0; ";
      ok = false;
      continue;
    }
    RunOptions opts;
    opts.deltas = {0.2};
    std::vector<double> heights;
    for (double e : eps) heights.push_back(run_epsilon(ctx, e, opts).max_height);
    const FitResult fit = loglog_fit(eps, heights);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s: slope=%.3f; ", cfg.name, fit.slope);
    out << buf;
    if (!(fit.valid && fit.slope >= 0.45 && fit.slope <= 0.55)) ok = false;
  }
  detail = out.str() + "(each in [0.45,0.55])";
  return ok;
}

// --- criterion 4: ellipse geometry ------------------------------------------

bool criterion4(std::string& detail) {
  const CaseContext ctx = prepare_case(cosine_shape(1, 1.0), couette_F(), 128, 193);
  RunOptions opts;
  opts.deltas = {0.1, 0.2};
  const EpsilonRun coarse = run_epsilon(ctx, 0.02, opts);
  const EpsilonRun fine = run_epsilon(ctx, 0.01, opts);
  if (coarse.islands.empty() || fine.islands.empty()) {
    detail = "no islands detected";
    return false;
  }
  bool ok = true;
  std::ostringstream out;
  for (const EpsilonRun* run : {&coarse, &fine}) {
    for (const IslandReport& island : run->islands) {
      for (const IslandLevel& lv : island.levels) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "eps=%.3g delta=%.1f C2/C1=%.2f; ", run->epsilon,
                      lv.delta, lv.c2 / lv.c1);
        out << buf;
        if (!(lv.c2 / lv.c1 <= 10.0)) ok = false;
      }
    }
  }
  for (double delta : {0.1, 0.2}) {
    auto ratio_at = [&](const EpsilonRun& run) -> double {
      for (const IslandLevel& lv : run.islands.front().levels) {
        if (std::abs(lv.delta - delta) < 1e-12) return lv.width / lv.height;
      }
      return 0.0;
    };
    const double growth = ratio_at(fine) / ratio_at(coarse);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "delta=%.1f aspect growth=%.3f (in [1.2,1.7]); ", delta,
                  growth);
    out << buf;
    if (!(growth >= 1.2 && growth <= 1.7)) ok = false;
  }
  detail = out.str();
  return ok;
}

// --- criterion 5: singular streamline ---------------------------------------

bool criterion5(std::string& detail) {
  bool ok = true;
  std::ostringstream out;
  // translation pair: the limit is the constrained series value 1/sinh(1)
  {
    const CaseContext ctx = prepare_case(cosine_shape(1, 1.0, 1, -1.0), couette_F(), 128, 193);
    const double target = 1.0 / std::sinh(1.0);
    for (double e : {0.02, 0.01}) {
      const EpsilonRun run = run_epsilon(ctx, e, RunOptions{});
      if (!run.streamline_ok) {
        out << "window exit at eps=" << e << "; ";
        ok = false;
        continue;
      }
      const double scaled = run.streamline.dist_inf / e;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "pair eps=%.2g: |y_eps-y0|/eps=%.4f vs 1/sinh(1)=%.4f; ",
                    e, scaled, target);
      out << buf;
      if (std::abs(scaled - target) > 0.1 * target) ok = false;
    }
  }
  // wavy top alone: the limit is the slope of the computed correction
  {
    const CaseContext ctx = prepare_case(cosine_shape(1, 1.0), couette_F(), 128, 193);
    const double target = 1.0 / (2.0 * std::sinh(1.0));
    const EpsilonRun run = run_epsilon(ctx, 0.01, RunOptions{});
    if (!run.streamline_ok) {
      out << "window exit (wavy top); ";
      ok = false;
    } else {
      const double scaled = run.streamline.dist_inf / 0.01;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "top-only eps=0.01: %.4f vs 1/(2 sinh 1)=%.4f", scaled,
                    target);
      out << buf;
      if (std::abs(scaled - target) > 0.1 * target) ok = false;
    }
  }
  detail = out.str();
  return ok;
}

// --- criterion 6: laminarity condition and genericity ------------------------

bool criterion6(std::string& detail) {
  bool ok = true;
  std::ostringstream out;
  // h + g == const families keep the trace flat
  for (double c0 : {0.0, 0.3}) {
    BoundaryShape shape = cosine_shape(1, 1.0, 1, -1.0);
    if (c0 != 0.0) shape.top_bump.add_mode(0, c0, 0.0);
    const CaseContext ctx = prepare_case(shape, couette_F(), 96, 129);
    const TraceRecord trace = gamma0_trace(ctx.phi, ctx.profile);
    const double rel = trace.osc / std::max(ctx.phi.max_abs(), 1e-300);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "h+g=%.1f: osc/||phi||=%.2e (<=1e-8); ", c0, rel);
    out << buf;
    if (!(rel <= 1e-8)) ok = false;
  }
  // 20 random members of B': oscillating traces and islands at eps = 0.02
  ExperimentConfig cfg;
  cfg.shape = BoundaryShape::flat_channel();
  cfg.F = couette_F();
  cfg.nx = 96;
  cfg.ns = 129;
  cfg.samples = 20;
  cfg.epsilons = {0.02};
  cfg.deltas = {0.1, 0.2, 0.3};
  cfg.seed = 12345;
  const GenericitySummary summary = run_genericity(cfg, scratch_dir("c6"));
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "B' members=%d/20, min osc/||phi||=%.2e (>1e-3), islands=%d/%d (100%%)",
                summary.b_prime_count, summary.min_member_osc_rel,
                summary.b_prime_with_islands, summary.b_prime_count);
  out << buf;
  if (summary.b_prime_count != 20) ok = false;
  if (!(summary.min_member_osc_rel > 1e-3)) ok = false;
  if (summary.b_prime_with_islands != summary.b_prime_count) ok = false;
  detail = out.str();
  return ok;
}

// --- criterion 7: appendix-B contraction -------------------------------------

bool criterion7(std::string& detail) {
  const CaseContext ctx = prepare_case(cosine_shape(1, 1.0), sin_F(), 96, 129);
  RunOptions opts;
  opts.run_fixed_point = true;
  const EpsilonRun run = run_epsilon(ctx, 0.02, opts);
  char buf[160];
  if (!run.fixed_point_ran || !run.fixed_point_ok) {
    detail = "picard iteration did not converge: " + run.fixed_point_error;
    return false;
  }
  std::snprintf(buf, sizeof(buf),
                "contraction=%.3g (<=0.5), |u+eta-r|=%.2e (<=1e-8), iterations=%d",
                run.fixed_point.contraction_factor, run.reconstruction_error,
                run.fixed_point.iterations);
  detail = buf;
  return run.fixed_point.contraction_factor <= 0.5 && run.reconstruction_error <= 1e-8;
}

// --- criterion 8: appendix-A definite cases ----------------------------------

bool criterion8(std::string& detail) {
  ExperimentConfig cfg;
  cfg.shape = cosine_shape(1, 1.0);
  cfg.F = couette_F();
  cfg.nx = 96;
  cfg.ns = 129;
  cfg.deltas = {0.1, 0.2, 0.3};
  cfg.epsilons = {0.01, 0.02, 0.05, 0.1};
  cfg.appendix_case = "ctn-bottom";
  std::ostringstream out;
  bool ok = true;
  try {
    const AppendixASummary s = run_appendix_a(cfg, scratch_dir("c8a"));
    out << "flat-bottom islands per eps:";
    for (int c : s.island_counts) out << " " << c;
    out << " (all >=1); ";
  } catch (const AssertionFailed& err) {
    out << err.what() << "; ";
    ok = false;
  }
  cfg.appendix_case = "flat-flat";
  cfg.epsilons = {0.05};
  try {
    const AppendixASummary s = run_appendix_a(cfg, scratch_dir("c8b"));
    out << "flat-flat islands: " << s.island_counts[0] << " (0, wrapping only)";
  } catch (const AssertionFailed& err) {
    out << err.what();
    ok = false;
  }
  detail = out.str();
  return ok;
}

// --- criterion 9: operator validation ----------------------------------------

double manufactured_error(const BoundaryShape& shape, int nx, int ns, bool mapped_case) {
  auto grid = build_grid(shape, nx, ns);
  ScalarField u(grid), target(grid);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) {
      const double x = grid->x(i), y = grid->y(i, j);
      u(i, j) = mapped_case ? y * y : std::sin(y) * std::cos(x);
      target(i, j) = mapped_case ? 2.0 : -2.0 * std::sin(y) * std::cos(x);
    }
  }
  const ScalarField lap = assemble_laplacian(grid).apply(u);
  double err = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < ns - 1; ++j) err = std::max(err, std::abs(lap(i, j) - target(i, j)));
  }
  return err;
}

bool criterion9(std::string& detail) {
  const double flat1 = manufactured_error(BoundaryShape::flat_channel(), 32, 33, false);
  const double flat2 = manufactured_error(BoundaryShape::flat_channel(), 64, 65, false);
  const double flat_order = std::log2(flat1 / flat2);
  const double map1 = manufactured_error(cosine_shape(1, 1.0).with_epsilon(0.1), 32, 33, true);
  const double map2 = manufactured_error(cosine_shape(1, 1.0).with_epsilon(0.1), 64, 65, true);
  const double map_order = std::log2(map1 / map2);
  const double lam = smallest_eigenvalue(*build_grid(BoundaryShape::flat_channel(), 16, 65));
  const double lam_rel = std::abs(lam - kPi * kPi / 4.0) / (kPi * kPi / 4.0);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "orders: flat=%.2f, mapped=%.2f (in [1.8,2.2]); lambda1=%.5f vs pi^2/4 "
                "(rel %.2e <= 1e-2)",
                flat_order, map_order, lam, lam_rel);
  detail = buf;
  return flat_order >= 1.8 && flat_order <= 2.2 && map_order >= 1.8 && map_order <= 2.2 &&
         lam_rel <= 1e-2;
}

// --- criterion 10: determinism ------------------------------------------------

bool criterion10(std::string& detail) {
  ExperimentConfig cfg;
  cfg.shape = cosine_shape(1, 1.0);
  cfg.shape.epsilon = 0.02;
  cfg.F = couette_F();
  cfg.nx = 48;
  cfg.ns = 49;
  cfg.epsilons = {0.01, 0.02};
  cfg.deltas = {0.1, 0.2};
  cfg.seed = 4242;
  const std::string d1 = scratch_dir("c10_sweep1"), d2 = scratch_dir("c10_sweep2");
  run_sweep(cfg, d1);
  run_sweep(cfg, d2);
  const bool sweep_same = slurp(d1 + "/results.csv") == slurp(d2 + "/results.csv") &&
                          slurp(d1 + "/summary.json") == slurp(d2 + "/summary.json");

  cfg.samples = 8;
  cfg.epsilons = {0.02};
  const std::string g1 = scratch_dir("c10_gen1"), g2 = scratch_dir("c10_gen2");
  run_genericity(cfg, g1);
  run_genericity(cfg, g2);
  const bool gen_same = slurp(g1 + "/summary.json") == slurp(g2 + "/summary.json");

  detail = std::string("sweep byte-identical: ") + (sweep_same ? "yes" : "NO") +
           ", genericity byte-identical: " + (gen_same ? "yes" : "NO");
  return sweep_same && gen_same;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "Couette oracle equivalence", 10.0, criterion1},
      {2, "remainder order eps^2", 120.0, criterion2},
      {3, "island-height scaling sqrt(eps) over the B0 matrix", 600.0, criterion3},
      {4, "ellipse geometry of A_delta level sets", 600.0, criterion4},
      {5, "singular streamline distance", 600.0, criterion5},
      {6, "laminarity condition and B' genericity", 600.0, criterion6},
      {7, "appendix-B Picard contraction", 600.0, criterion7},
      {8, "appendix-A definite island cases", 600.0, criterion8},
      {9, "operator convergence and lambda1", 60.0, criterion9},
      {10, "seeded determinism of CSV/JSON outputs", 600.0, criterion10},
  };

  int wanted = 0;
  if (argc > 1) wanted = std::atoi(argv[1]);

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (wanted != 0 && c.id != wanted) continue;
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& err) {
      detail = std::string("exception: ") + err.what();
      ok = false;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds > c.time_limit_s) {
      ok = false;
      detail += " [over time budget]";
    }
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.title,
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
