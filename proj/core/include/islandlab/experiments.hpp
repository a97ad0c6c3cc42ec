#pragma once

#include <optional>
#include <string>
#include <vector>

#include "islandlab/config.hpp"
#include "islandlab/pipeline.hpp"

namespace islandlab {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double ci95 = 0.0;  // half-width of the 95% interval on the slope
  int n = 0;
  bool valid = false;
};

/// Least-squares slope of log y vs log x with a t-interval.
FitResult loglog_fit(std::span<const double> x, std::span<const double> y);

struct SweepPoint {
  double epsilon = 0.0;
  bool ok = false;
  std::string error;
  int newton_iterations = 0;
  double residual = 0.0;
  double r_max = 0.0, r_holder = 0.0;
  int island_count = 0;
  double max_height = 0.0;
  bool streamline_ok = false;
  double ydist_inf = 0.0, ydist_over_eps = 0.0;
  bool hessian_ok = false;
  double det_over_eps = 0.0, hyy = 0.0;
  bool fixed_point_ran = false, fixed_point_ok = false;
  double contraction = 0.0, reconstruction_error = 0.0;
};

struct SweepRecord {
  std::vector<SweepPoint> points;
  FitResult height_fit;
  FitResult remainder_fit;
  double eps_star = 0.0;
  bool eps_star_valid = false;
  int successes = 0;
  /// Set when D/eps moves by more than 50% between consecutive epsilons.
  bool det_drift_flag = false;
};

SweepRecord run_sweep(const ExperimentConfig& cfg, const std::string& out_dir, int jobs = 1);

struct GenericitySample {
  int index = 0;
  bool b_prime = false;
  bool b0 = false;
  double osc = 0.0, osc_rel = 0.0, phi_max = 0.0;
  bool steady_ok = false;
  int islands = 0;
  std::string error;
};

struct GenericitySummary {
  int samples = 0;
  double epsilon = 0.0;
  int b_prime_count = 0;
  int b_prime_with_islands = 0;
  double island_fraction = 0.0;  // among B' members
  double max_complement_osc_rel = 0.0;
  double min_member_osc_rel = 0.0;
  std::vector<GenericitySample> records;
};

GenericitySummary run_genericity(const ExperimentConfig& cfg, const std::string& out_dir);

struct AppendixASummary {
  std::string case_name;
  bool passed = false;
  std::vector<double> epsilons;
  std::vector<int> island_counts;
  double wall_gradient_deviation = 0.0;  // singular-bdry diagnostic
};

AppendixASummary run_appendix_a(const ExperimentConfig& cfg, const std::string& out_dir);

struct FixedPointSummary {
  double epsilon = 0.0;
  int iterations = 0;
  bool converged = false;
  double contraction = 0.0;
  double reconstruction_error = 0.0;
  bool ball_ok = false;  // every iterate stayed inside ||v|| <= epsilon
};

FixedPointSummary run_fixed_point_experiment(const ExperimentConfig& cfg,
                                             const std::string& out_dir);

void run_solve_experiment(const ExperimentConfig& cfg, const std::string& out_dir);
void run_expand_experiment(const ExperimentConfig& cfg, const std::string& out_dir);
void run_oracle_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Dispatches on cfg.kind; returns a process exit code.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, int jobs = 1);

}  // namespace islandlab
