#include "islandlab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "islandlab/errors.hpp"
#include "islandlab/oracles.hpp"
#include "islandlab/rng.hpp"
#include "islandlab/svg.hpp"

namespace islandlab {

using json = nlohmann::ordered_json;

namespace {

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

json shape_to_json(const BoundaryShape& shape) {
  auto series = [](const FourierSeries& f) {
    json modes = json::array();
    for (int k = 0; k <= f.max_mode(); ++k) {
      if (f.cos_coef(k) == 0.0 && f.sin_coef(k) == 0.0) continue;
      modes.push_back({{"mode", k}, {"cos", f.cos_coef(k)}, {"sin", f.sin_coef(k)}});
    }
    return modes;
  };
  return json{{"epsilon", shape.epsilon}, {"c_bottom", shape.c_bottom},
              {"c_top", shape.c_top},     {"G", series(shape.base_bottom)},
              {"H", series(shape.base_top)}, {"g", series(shape.bottom_bump)},
              {"h", series(shape.top_bump)}};
}

json trace_to_json(const TraceRecord& trace) {
  json maxima = json::array();
  for (const TraceExtremum& e : trace.maxima) {
    maxima.push_back({{"x", e.x}, {"value", e.value}, {"second_deriv", e.second_deriv}});
  }
  return json{{"osc", trace.osc},
              {"max_value", trace.max_value},
              {"min_value", trace.min_value},
              {"maxima", maxima}};
}

json islands_to_json(std::span<const IslandReport> islands) {
  json out = json::array();
  for (const IslandReport& island : islands) {
    json levels = json::array();
    for (const IslandLevel& lv : island.levels) {
      levels.push_back({{"delta", lv.delta},
                        {"level", lv.level},
                        {"height", lv.height},
                        {"width", lv.width},
                        {"c1", lv.c1},
                        {"c2", lv.c2}});
    }
    json entry{{"center",
                {{"x", island.center.x},
                 {"y", island.center.y},
                 {"value", island.center.value},
                 {"kind", to_string(island.center.kind)}}},
               {"levels", levels}};
    if (island.has_separatrix) entry["separatrix_level"] = island.separatrix_level;
    out.push_back(entry);
  }
  return out;
}

json point_to_json(const SweepPoint& p) {
  json out{{"epsilon", p.epsilon}, {"ok", p.ok}};
  if (!p.ok) {
    out["error"] = p.error;
    return out;
  }
  out["newton_iterations"] = p.newton_iterations;
  out["residual"] = p.residual;
  out["r_max"] = p.r_max;
  out["r_holder"] = p.r_holder;
  out["islands"] = p.island_count;
  out["max_height"] = p.max_height;
  out["streamline_ok"] = p.streamline_ok;
  out["ydist_inf"] = p.ydist_inf;
  out["ydist_over_eps"] = p.ydist_over_eps;
  out["hessian_ok"] = p.hessian_ok;
  out["det_over_eps"] = p.det_over_eps;
  out["hyy"] = p.hyy;
  out["fixed_point_ran"] = p.fixed_point_ran;
  if (p.fixed_point_ran) {
    out["fixed_point_ok"] = p.fixed_point_ok;
    out["contraction"] = p.contraction;
    out["reconstruction_error"] = p.reconstruction_error;
  }
  return out;
}

SweepPoint point_from_run(const EpsilonRun& run) {
  SweepPoint p;
  p.epsilon = run.epsilon;
  p.ok = true;
  p.newton_iterations = static_cast<int>(run.steady.trace.steps.size());
  p.residual = run.steady.trace.final_residual;
  p.r_max = run.expansion.r_max;
  p.r_holder = run.expansion.r_holder;
  p.island_count = static_cast<int>(run.islands.size());
  p.max_height = run.max_height;
  p.streamline_ok = run.streamline_ok;
  if (run.streamline_ok) {
    p.ydist_inf = run.streamline.dist_inf;
    p.ydist_over_eps = run.streamline.dist_inf / run.epsilon;
  }
  p.hessian_ok = run.hessian_ok;
  if (run.hessian_ok) {
    p.det_over_eps = run.hessian.det_over_eps;
    p.hyy = run.hessian.hyy;
  }
  p.fixed_point_ran = run.fixed_point_ran;
  p.fixed_point_ok = run.fixed_point_ok;
  if (run.fixed_point_ran) {
    p.contraction = run.fixed_point.contraction_factor;
    p.reconstruction_error = run.reconstruction_error;
  }
  return p;
}

std::string eps_tag(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", index);
  return buf;
}

constexpr double t_critical_95(int dof) {
  constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571,
                              2.447,  2.365, 2.306, 2.262, 2.228};
  if (dof < 1) return 0.0;
  return dof <= 10 ? table[dof - 1] : 1.96;
}

}  // namespace

FitResult loglog_fit(std::span<const double> x, std::span<const double> y) {
  FitResult fit;
  std::vector<double> u, v;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > 0.0 && y[k] > 0.0) {
      u.push_back(std::log(x[k]));
      v.push_back(std::log(y[k]));
    }
  }
  fit.n = static_cast<int>(u.size());
  if (fit.n < 2) return fit;
  double um = 0.0, vm = 0.0;
  for (int k = 0; k < fit.n; ++k) {
    um += u[k];
    vm += v[k];
  }
  um /= fit.n;
  vm /= fit.n;
  double suu = 0.0, suv = 0.0;
  for (int k = 0; k < fit.n; ++k) {
    suu += (u[k] - um) * (u[k] - um);
    suv += (u[k] - um) * (v[k] - vm);
  }
  if (suu == 0.0) return fit;
  fit.slope = suv / suu;
  fit.intercept = vm - fit.slope * um;
  if (fit.n > 2) {
    double ss = 0.0;
    for (int k = 0; k < fit.n; ++k) {
      const double r = v[k] - fit.intercept - fit.slope * u[k];
      ss += r * r;
    }
    const double se = std::sqrt(ss / (fit.n - 2) / suu);
    fit.ci95 = t_critical_95(fit.n - 2) * se;
  }
  fit.valid = true;
  return fit;
}

SweepRecord run_sweep(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
  ensure_dir(out_dir);
  ensure_dir(out_dir + "/plots");
  ensure_dir(out_dir + "/fields");

  const CaseContext ctx = prepare_case(cfg.shape, cfg.F, cfg.nx, cfg.ns);
  RunOptions opts;
  opts.deltas = cfg.deltas;
  opts.refine = cfg.refine;
  opts.run_fixed_point = false;
  opts.fp_max_iter = cfg.fp_max_iter;

  const int n = static_cast<int>(cfg.epsilons.size());
  std::vector<std::optional<EpsilonRun>> runs(n);
  std::vector<SweepPoint> points(n);

  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int k = next.fetch_add(1);
      if (k >= n) break;
      points[k].epsilon = cfg.epsilons[k];
      try {
        EpsilonRun run = run_epsilon(ctx, cfg.epsilons[k], opts);
        points[k] = point_from_run(run);
        runs[k] = std::move(run);
      } catch (const std::exception& err) {
        points[k].ok = false;
        points[k].error = err.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepRecord record;
  record.points = points;
  std::vector<double> eps_h, heights, eps_r, rmaxs;
  for (const SweepPoint& p : points) {
    if (!p.ok) continue;
    ++record.successes;
    if (p.max_height > 0.0) {
      eps_h.push_back(p.epsilon);
      heights.push_back(p.max_height);
    }
    if (p.r_max > 0.0) {
      eps_r.push_back(p.epsilon);
      rmaxs.push_back(p.r_max);
    }
    const bool all_stages = p.streamline_ok && p.island_count > 0 &&
                            (!p.fixed_point_ran || (p.fixed_point_ok && p.contraction < 0.95));
    if (all_stages && (!record.eps_star_valid || p.epsilon > record.eps_star)) {
      record.eps_star = p.epsilon;
      record.eps_star_valid = true;
    }
  }
  if (eps_h.size() >= 4) record.height_fit = loglog_fit(eps_h, heights);
  if (eps_r.size() >= 4) record.remainder_fit = loglog_fit(eps_r, rmaxs);

  const SweepPoint* prev_hess = nullptr;
  for (const SweepPoint& p : points) {
    if (!p.ok || !p.hessian_ok) continue;
    if (prev_hess &&
        std::abs(p.det_over_eps - prev_hess->det_over_eps) >
            0.5 * std::abs(prev_hess->det_over_eps)) {
      record.det_drift_flag = true;
    }
    prev_hess = &p;
  }

  // results.csv: one row per epsilon, cumulative slope in the last column
  {
    std::ofstream csv = open_out(out_dir + "/results.csv");
    csv << "epsilon,ok,newton_iterations,r_max,r_holder,islands,max_height,ydist_inf,"
           "ydist_over_eps,det_over_eps,contraction,slope_so_far\n";
    char buf[512];
    std::vector<double> se, sh;
    for (const SweepPoint& p : points) {
      std::string slope_so_far;
      if (p.ok && p.max_height > 0.0) {
        se.push_back(p.epsilon);
        sh.push_back(p.max_height);
        if (se.size() >= 4) {
          const FitResult f = loglog_fit(se, sh);
          std::snprintf(buf, sizeof(buf), "%.17g", f.slope);
          slope_so_far = buf;
        }
      }
      std::snprintf(buf, sizeof(buf), "%.17g,%d,%d,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,",
                    p.epsilon, p.ok ? 1 : 0, p.newton_iterations, p.r_max, p.r_holder,
                    p.island_count, p.max_height, p.ydist_inf, p.ydist_over_eps, p.det_over_eps,
                    p.contraction);
      csv << buf << slope_so_far << "\n";
    }
  }

  // per-epsilon artifacts
  for (int k = 0; k < n; ++k) {
    if (!runs[k]) continue;
    const EpsilonRun& run = *runs[k];
    {
      std::ofstream bin(out_dir + "/fields/eps_" + eps_tag(k) + ".bin", std::ios::binary);
      if (!bin) throw IoError("cannot open field output");
      write_binary(run.steady.field, bin);
    }
    const std::vector<CriticalPoint> cps = find_critical_points(run.steady.field);
    write_svg_plot(out_dir + "/plots/eps_" + eps_tag(k) + ".svg", run.steady.field, run.islands,
                   cps);
  }

  // summary.json
  json summary;
  summary["experiment"] = "sweep";
  summary["shape"] = shape_to_json(cfg.shape);
  summary["nonlinearity"] = cfg.F.describe();
  summary["grid"] = {{"nx", cfg.nx}, {"ns", cfg.ns}, {"refine", cfg.refine}};
  summary["deltas"] = cfg.deltas;
  json pts = json::array();
  for (const SweepPoint& p : points) pts.push_back(point_to_json(p));
  summary["points"] = pts;
  json islands_detail = json::array();
  for (int k = 0; k < n; ++k) {
    islands_detail.push_back(runs[k] ? islands_to_json(runs[k]->islands) : json::array());
  }
  summary["islands_detail"] = islands_detail;
  json fits;
  if (record.height_fit.valid) {
    fits["height_slope"] = record.height_fit.slope;
    fits["height_slope_ci95"] = record.height_fit.ci95;
  }
  if (record.remainder_fit.valid) {
    fits["remainder_slope"] = record.remainder_fit.slope;
    fits["remainder_slope_ci95"] = record.remainder_fit.ci95;
  }
  summary["fits"] = fits;
  if (record.eps_star_valid) summary["eps_star"] = record.eps_star;
  summary["successes"] = record.successes;
  summary["det_drift_flag"] = record.det_drift_flag;
  open_out(out_dir + "/summary.json") << summary.dump(2) << "\n";
  return record;
}

GenericitySummary run_genericity(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const double epsilon = cfg.epsilons.front();
  const CaseContext base_ctx = prepare_case(cfg.shape.base(), cfg.F, cfg.nx, cfg.ns);

  Rng rng(cfg.seed);
  GenericitySummary summary;
  summary.samples = cfg.samples;
  summary.epsilon = epsilon;
  summary.min_member_osc_rel = 1e300;

  RunOptions opts;
  opts.deltas = cfg.deltas;
  opts.refine = std::max(cfg.refine, 8);  // weak random members need fine contours

  for (int n = 0; n < cfg.samples; ++n) {
    FourierSeries h, g;
    for (int k = 0; k <= 4; ++k) h.set_mode(k, rng.uniform(-1.0, 1.0), k ? rng.uniform(-1.0, 1.0) : 0.0);
    for (int k = 0; k <= 4; ++k) g.set_mode(k, rng.uniform(-1.0, 1.0), k ? rng.uniform(-1.0, 1.0) : 0.0);
    const double scale = std::max({h.sup_bound(), g.sup_bound(), 1e-12});
    h *= 1.0 / scale;
    g *= 1.0 / scale;

    BoundaryShape shape = cfg.shape;
    shape.top_bump = h;
    shape.bottom_bump = g;
    shape.epsilon = epsilon;

    GenericitySample sample;
    sample.index = n;
    sample.b_prime = membership_b_prime(shape);

    const ScalarField phi = solve_first_order(base_ctx.base_grid, cfg.F, base_ctx.psi0_base, shape);
    const TraceRecord trace = gamma0_trace(phi, base_ctx.profile);
    sample.phi_max = phi.max_abs();
    sample.osc = trace.osc;
    sample.osc_rel = trace.osc / std::max(sample.phi_max, 1e-300);
    sample.b0 = membership_b0_from_trace(trace, base_ctx.profile.primary_stagnation().curvature,
                                         sample.phi_max)
                    .member;

    if (sample.b_prime) {
      ++summary.b_prime_count;
      summary.min_member_osc_rel = std::min(summary.min_member_osc_rel, sample.osc_rel);
      try {
        CaseContext ctx = base_ctx;
        ctx.shape = shape;
        ctx.phi = phi;
        const EpsilonRun run = run_epsilon(ctx, epsilon, opts);
        sample.steady_ok = true;
        sample.islands = static_cast<int>(run.islands.size());
        if (sample.islands > 0) ++summary.b_prime_with_islands;
      } catch (const std::exception& err) {
        sample.error = err.what();
      }
    } else {
      summary.max_complement_osc_rel = std::max(summary.max_complement_osc_rel, sample.osc_rel);
    }
    summary.records.push_back(sample);
  }
  if (summary.b_prime_count > 0) {
    summary.island_fraction =
        static_cast<double>(summary.b_prime_with_islands) / summary.b_prime_count;
  }
  if (summary.min_member_osc_rel == 1e300) summary.min_member_osc_rel = 0.0;

  json out;
  out["experiment"] = "genericity";
  out["seed"] = cfg.seed;
  out["samples"] = summary.samples;
  out["epsilon"] = summary.epsilon;
  out["b_prime_count"] = summary.b_prime_count;
  out["b_prime_with_islands"] = summary.b_prime_with_islands;
  out["island_fraction"] = summary.island_fraction;
  out["max_complement_osc_rel"] = summary.max_complement_osc_rel;
  out["min_member_osc_rel"] = summary.min_member_osc_rel;
  json recs = json::array();
  for (const GenericitySample& s : summary.records) {
    json r{{"index", s.index},   {"b_prime", s.b_prime}, {"b0", s.b0},
           {"osc", s.osc},       {"osc_rel", s.osc_rel}, {"phi_max", s.phi_max},
           {"islands", s.islands}};
    if (!s.error.empty()) r["error"] = s.error;
    recs.push_back(r);
  }
  out["records"] = recs;
  open_out(out_dir + "/summary.json") << out.dump(2) << "\n";
  return summary;
}

namespace {

// synthetic two-stagnation shear plus a wavy-wall modulation, for the
// disconnected-critical-set property case
struct SyntheticTwoStagnation {
  ShearProfile profile;
  ScalarField field;
};

SyntheticTwoStagnation make_two_stagnation_case(int nx, int ns, double eps) {
  const double w = 1.5 * 3.14159265358979323846;  // 3 pi / 2
  auto P = [&](double y) { return std::sin(w * y) / (w * w); };
  auto Pd = [&](double y) { return std::cos(w * y) / w; };
  auto q = [&](double y) { return std::cos(0.5 * 3.14159265358979323846 * y); };

  BoundaryShape shape;
  shape.top_bump = FourierSeries::cosine(1, 1.0);
  shape.bottom_bump = FourierSeries::cosine(1, 0.7);
  shape.epsilon = eps;
  shape.c_top = P(1.0);
  shape.c_bottom = P(-1.0);
  auto grid = build_grid(shape, nx, ns);

  SyntheticTwoStagnation out{ShearProfile(), ScalarField(grid)};
  std::vector<double> y(ns), psi(ns), dpsi(ns);
  for (int j = 0; j < ns; ++j) {
    y[j] = -1.0 + 2.0 * j / (ns - 1);
    psi[j] = P(y[j]);
    dpsi[j] = Pd(y[j]);
  }
  const double y_lo = -1.0 / 3.0, y_hi = 1.0 / 3.0;
  out.profile = ShearProfile::from_samples(
      std::move(y), std::move(psi), std::move(dpsi), P(-1.0), P(1.0),
      {{y_lo, P(y_lo), -std::sin(w * y_lo)}, {y_hi, P(y_hi), -std::sin(w * y_hi)}});
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ns; ++j) {
      const double yy = grid->y(i, j);
      out.field(i, j) = P(yy) + eps * q(yy) * std::cos(grid->x(i));
    }
  }
  return out;
}

}  // namespace

AppendixASummary run_appendix_a(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  AppendixASummary summary;
  summary.case_name = cfg.appendix_case;
  json out;
  out["experiment"] = "appendixA";
  out["case"] = summary.case_name;

  RunOptions opts;
  opts.deltas = cfg.deltas;
  opts.refine = cfg.refine;

  if (summary.case_name == "ctn-bottom") {
    // flat bottom, wavy top
    BoundaryShape shape = cfg.shape;
    shape.bottom_bump = FourierSeries();
    if (!shape.top_bump.has_nonconstant_mode(1e-14)) {
      shape.top_bump = FourierSeries::cosine(1, 1.0);
    }
    const CaseContext ctx = prepare_case(shape, cfg.F, cfg.nx, cfg.ns);
    summary.passed = true;
    for (double eps : cfg.epsilons) {
      const EpsilonRun run = run_epsilon(ctx, eps, opts);
      summary.epsilons.push_back(eps);
      summary.island_counts.push_back(static_cast<int>(run.islands.size()));
      if (run.islands.empty()) summary.passed = false;
    }
  } else if (summary.case_name == "flat-flat") {
    BoundaryShape shape = cfg.shape;
    shape.top_bump = FourierSeries();
    shape.bottom_bump = FourierSeries();
    const CaseContext ctx = prepare_case(shape, cfg.F, cfg.nx, cfg.ns);
    const double eps = cfg.epsilons.front();
    const EpsilonRun run = run_epsilon(ctx, eps, opts);
    summary.epsilons.push_back(eps);
    summary.island_counts.push_back(static_cast<int>(run.islands.size()));
    bool all_wrap = true;
    const double lo = run.steady.field.min(), hi = run.steady.field.max();
    for (int k = 1; k <= 20; ++k) {
      const double level = lo + (hi - lo) * k / 21.0;
      for (const Contour& c : trace_level_set(run.steady.field, level, 1)) {
        if (c.contractible()) all_wrap = false;
      }
    }
    summary.passed = run.islands.empty() && all_wrap;
    out["all_level_sets_wrap"] = all_wrap;
  } else if (summary.case_name == "islands-critical") {
    const double eps = cfg.epsilons.front();
    SyntheticTwoStagnation synth = make_two_stagnation_case(cfg.nx, cfg.ns, eps);
    int with_islands = 0;
    json per_level = json::array();
    for (std::size_t which = 0; which < synth.profile.stagnation().size(); ++which) {
      // rotate the targeted stagnation point to the front
      std::vector<StagnationPoint> stags = synth.profile.stagnation();
      std::rotate(stags.begin(), stags.begin() + which, stags.end());
      ShearProfile targeted = ShearProfile::from_samples(
          synth.profile.y(), synth.profile.psi(), synth.profile.dpsi(),
          synth.profile.c_bottom(), synth.profile.c_top(), stags);
      const auto islands = detect_islands(synth.field, targeted, cfg.deltas,
                                          {opts.refine, StreamlineOptions{}.window_cap});
      per_level.push_back({{"y0", stags.front().y}, {"islands", islands.size()}});
      if (!islands.empty()) ++with_islands;
    }
    summary.epsilons.push_back(eps);
    summary.island_counts.push_back(with_islands);
    summary.passed = with_islands >= 1;
    out["levels"] = per_level;
  } else if (summary.case_name == "singular-bdry") {
    // diagnostic only: constancy of |grad psi| along the wavy bottom wall
    const CaseContext ctx = prepare_case(cfg.shape, cfg.F, cfg.nx, cfg.ns);
    const double eps = cfg.epsilons.front();
    const EpsilonRun run = run_epsilon(ctx, eps, opts);
    const ScalarField& u = run.steady.field;
    const MappedGrid& g = u.grid();
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < g.nx(); ++i) {
      const double ds = g.ds();
      const double vs = (-25.0 * u(i, 0) + 48.0 * u(i, 1) - 36.0 * u(i, 2) + 16.0 * u(i, 3) -
                         3.0 * u(i, 4)) /
                        (12.0 * ds);
      const double dy = vs / g.thickness(i);
      const double slope = g.shape().bottom_deriv(g.x(i));
      const double grad = std::abs(dy) * std::sqrt(1.0 + slope * slope);
      lo = std::min(lo, grad);
      hi = std::max(hi, grad);
    }
    summary.wall_gradient_deviation = (hi - lo) / std::max(std::abs(hi), 1e-300);
    summary.epsilons.push_back(eps);
    summary.island_counts.push_back(static_cast<int>(run.islands.size()));
    summary.passed = true;
    out["wall_gradient_min"] = lo;
    out["wall_gradient_max"] = hi;
    out["wall_gradient_deviation"] = summary.wall_gradient_deviation;
  } else {
    throw ConfigError("unknown appendix case: " + summary.case_name);
  }

  out["epsilons"] = summary.epsilons;
  out["island_counts"] = summary.island_counts;
  out["passed"] = summary.passed;
  open_out(out_dir + "/summary.json") << out.dump(2) << "\n";
  if (!summary.passed) {
    throw AssertionFailed("appendix A case '" + summary.case_name +
                          "' failed; artifacts dumped to " + out_dir);
  }
  return summary;
}

FixedPointSummary run_fixed_point_experiment(const ExperimentConfig& cfg,
                                             const std::string& out_dir) {
  ensure_dir(out_dir);
  const CaseContext ctx = prepare_case(cfg.shape, cfg.F, cfg.nx, cfg.ns);
  RunOptions opts;
  opts.deltas = cfg.deltas;
  opts.refine = cfg.refine;
  opts.run_fixed_point = true;
  opts.fp_max_iter = cfg.fp_max_iter;
  const double eps = cfg.epsilons.front();
  const EpsilonRun run = run_epsilon(ctx, eps, opts);
  if (!run.fixed_point_error.empty()) throw NotContracting(run.fixed_point_error);

  FixedPointSummary summary;
  summary.epsilon = eps;
  summary.iterations = run.fixed_point.iterations;
  summary.converged = run.fixed_point.converged;
  summary.contraction = run.fixed_point.contraction_factor;
  summary.reconstruction_error = run.reconstruction_error;
  summary.ball_ok = true;
  for (double v : run.fixed_point.iterate_norms) {
    if (v > eps) summary.ball_ok = false;
  }

  json out;
  out["experiment"] = "fixedpoint";
  out["epsilon"] = eps;
  out["iterations"] = summary.iterations;
  out["converged"] = summary.converged;
  out["contraction"] = summary.contraction;
  out["reconstruction_error"] = summary.reconstruction_error;
  out["ball_ok"] = summary.ball_ok;
  out["iterate_norms"] = run.fixed_point.iterate_norms;
  out["diff_norms"] = run.fixed_point.diff_norms;
  out["eta_max"] = run.fixed_point.eta_eps.max_abs();
  out["beta_max"] = run.fixed_point.beta_eps.max_abs();
  open_out(out_dir + "/summary.json") << out.dump(2) << "\n";
  return summary;
}

void run_solve_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  ensure_dir(out_dir + "/fields");
  ensure_dir(out_dir + "/plots");
  const CaseContext ctx = prepare_case(cfg.shape, cfg.F, cfg.nx, cfg.ns);
  RunOptions opts;
  opts.deltas = cfg.deltas;
  opts.refine = cfg.refine;
  const EpsilonRun run = run_epsilon(ctx, cfg.epsilons.front(), opts);

  {
    std::ofstream bin(out_dir + "/fields/psi.bin", std::ios::binary);
    if (!bin) throw IoError("cannot open field output");
    write_binary(run.steady.field, bin);
  }
  {
    std::ofstream csv = open_out(out_dir + "/fields/psi.csv");
    write_csv(run.steady.field, csv);
  }
  const std::vector<CriticalPoint> cps = find_critical_points(run.steady.field);
  write_svg_plot(out_dir + "/plots/solution.svg", run.steady.field, run.islands, cps);
  {
    std::vector<Contour> contours;
    const double lo = run.steady.field.min(), hi = run.steady.field.max();
    for (int k = 1; k <= 20; ++k) {
      for (Contour& c : trace_level_set(run.steady.field, lo + (hi - lo) * k / 21.0, cfg.refine)) {
        contours.push_back(std::move(c));
      }
    }
    std::ofstream csv = open_out(out_dir + "/contours.csv");
    write_contours_csv(csv, contours);
  }

  json log;
  log["nonlinearity"] = cfg.F.describe();
  log["epsilon"] = run.epsilon;
  json steps = json::array();
  for (const NewtonStep& s : run.steady.trace.steps) {
    steps.push_back({{"iteration", s.iter}, {"residual", s.residual}, {"step_length", s.step_length}});
  }
  log["steps"] = steps;
  log["final_residual"] = run.steady.trace.final_residual;
  log["converged"] = run.steady.trace.converged;
  open_out(out_dir + "/newton_log.json") << log.dump(2) << "\n";

  json summary;
  summary["experiment"] = "solve";
  summary["shape"] = shape_to_json(cfg.shape);
  summary["point"] = point_to_json(point_from_run(run));
  summary["islands_detail"] = islands_to_json(run.islands);
  open_out(out_dir + "/summary.json") << summary.dump(2) << "\n";
}

void run_expand_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  ensure_dir(out_dir + "/fields");
  const CaseContext ctx = prepare_case(cfg.shape, cfg.F, cfg.nx, cfg.ns);
  RunOptions opts;
  opts.deltas = cfg.deltas;
  opts.refine = cfg.refine;
  const EpsilonRun run = run_epsilon(ctx, cfg.epsilons.front(), opts);

  {
    std::ofstream bin(out_dir + "/fields/phi.bin", std::ios::binary);
    if (!bin) throw IoError("cannot open field output");
    write_binary(run.expansion.phi, bin);
  }
  {
    std::ofstream bin(out_dir + "/fields/r_eps.bin", std::ios::binary);
    if (!bin) throw IoError("cannot open field output");
    write_binary(run.expansion.r_eps, bin);
  }
  {
    std::ofstream csv = open_out(out_dir + "/trace.csv");
    csv << "x,value\n";
    char buf[80];
    const TraceRecord& tr = run.expansion.phi_on_gamma;
    for (std::size_t k = 0; k < tr.x.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", tr.x[k], tr.value[k]);
      csv << buf;
    }
  }
  json summary;
  summary["experiment"] = "expand";
  summary["shape"] = shape_to_json(cfg.shape);
  summary["epsilon"] = run.epsilon;
  summary["r_max"] = run.expansion.r_max;
  summary["r_lipschitz"] = run.expansion.r_lipschitz;
  summary["r_holder"] = run.expansion.r_holder;
  summary["phi_trace"] = trace_to_json(run.expansion.phi_on_gamma);
  summary["point"] = point_to_json(point_from_run(run));
  open_out(out_dir + "/summary.json") << summary.dump(2) << "\n";
}

void run_oracle_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  json out;
  out["experiment"] = "oracle";
  const FourierSeries& h = cfg.shape.top_bump;
  const FourierSeries& g = cfg.shape.bottom_bump;
  json trace = json::array();
  for (int i = 0; i < 64; ++i) {
    const double x = kTwoPi * i / 64;
    trace.push_back({{"x", x},
                     {"phi_mid", couette_phi(h, g, x, 0.0)},
                     {"dyphi_mid", couette_phi_dy(h, g, x, 0.0)},
                     {"dyphi_mid_series", couette_dyphi_mid(h, x)}});
  }
  out["couette_midline"] = trace;

  const ShearProfile profile = solve_shear(cfg.F, cfg.shape.c_bottom, cfg.shape.c_top, 2049);
  json modes = json::array();
  if (profile.has_stagnation()) {
    std::vector<double> fprime(2049);
    for (int j = 0; j < 2049; ++j) fprime[j] = cfg.F.df(profile.psi()[j]);
    const double y0 = profile.primary_stagnation().y;
    for (int k = 1; k <= 4; ++k) {
      const ModeProfile mp = mode_ode_solve(k, fprime, 2049);
      modes.push_back({{"k", k}, {"phi_at_y0", mp.value(y0)}});
    }
    out["y0"] = y0;
  }
  out["mode_profiles"] = modes;
  open_out(out_dir + "/oracle.json") << out.dump(2) << "\n";
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
  switch (cfg.kind) {
    case ExperimentKind::Solve:
      run_solve_experiment(cfg, out_dir);
      return 0;
    case ExperimentKind::Expand:
      run_expand_experiment(cfg, out_dir);
      return 0;
    case ExperimentKind::Sweep: {
      const SweepRecord record = run_sweep(cfg, out_dir, jobs);
      const int wanted = std::min<int>(4, static_cast<int>(cfg.epsilons.size()));
      return record.successes >= wanted ? 0 : 1;
    }
    case ExperimentKind::Genericity:
      run_genericity(cfg, out_dir);
      return 0;
    case ExperimentKind::AppendixA:
      run_appendix_a(cfg, out_dir);
      return 0;
    case ExperimentKind::FixedPoint:
      run_fixed_point_experiment(cfg, out_dir);
      return 0;
    case ExperimentKind::Oracle:
      run_oracle_experiment(cfg, out_dir);
      return 0;
  }
  return 2;
}

}  // namespace islandlab
