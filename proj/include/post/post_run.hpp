#pragma once

#include <cstdint>
#include <vector>

#include "post/drb.hpp"
#include "post/nelder_mead.hpp"
#include "post/seed.hpp"

namespace post {

struct PostRunConfig {
  ObjectiveSpec objective;
  NMConfig nm = NMConfig::adaptive(6);
  std::vector<int> rb_m_grid = {2, 4, 8, 16, 32, 64};
  std::uint64_t run_seed = 1;
};

struct IterationRecord {
  int evals = 0;
  double best_objective = 0.0;
  bool improved = false;
};

struct PostRunReport {
  int cycle = 0;
  SeedResult seed;

  double native_objective = 0.0;  // DRB objective of the bare gate
  double seed_objective = 0.0;    // objective at the seed vertex
  std::vector<IterationRecord> iterations;
  double final_objective = 0.0;
  int last_improvement_iteration = 0;
  CorrectionParams final_params;

  RBCurve rb_native;
  RBCurve rb_corrected;
  double r_u = 0.0;
  double r_c = 0.0;
  double improvement = 0.0;

  // Budget bookkeeping: objective evaluations consumed.
  int baseline_evals = 0;   // native baseline + initial simplex
  int candidate_evals = 0;  // batched candidates across iterations
};

// One POST tune-up at a calibration cycle: freeze the DRB circuit cache,
// measure the native and seed-corrected baselines, run the adaptive
// Nelder-Mead until the stall rule fires, redefine the gate with the best
// parameters, and benchmark native vs corrected over the full m grid.
PostRunReport run_post(const DriftingDeviceModel& model, int cycle,
                       const SeedResult& seed, const PostRunConfig& config);

// Total candidate-objective evaluations a run consumed.
int experiment_budget(const PostRunReport& report);

}  // namespace post
