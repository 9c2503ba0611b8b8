#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "post/diamond.hpp"
#include "post/gst.hpp"
#include "post/post_run.hpp"

namespace post {

// Invalid configuration input; the CLI maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One self-contained experiment definition: the synthetic device, the GST
// run, the seed search, and the POST tune-ups across calibration cycles.
struct Scenario {
  std::uint64_t seed = 12345;
  std::string out_dir = "runs/default";

  NoiseConfig noise;
  DriftConfig drift;  // rng_seed is derived from the global seed

  long long gst_shots = 8190;
  std::vector<int> gst_lengths = {1, 2, 4, 8};
  bool gst_exact = false;
  bool gst_full_product = false;

  CorrectionMode mode = CorrectionMode::control_only;
  int seed_restarts = 8;
  std::vector<int> cycles = {0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30, 33};
  ObjectiveSpec objective;
  NMConfig nm;

  DiamondOptions diamond;

  void validate() const;
  DriftingDeviceModel make_model() const;
  PostRunConfig post_config(int cycle) const;

  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::string& path);
  nlohmann::json to_json() const;
};

// Defaults modeled on the experimental regime: dominantly coherent local
// bookend noise on the control qubit, a small cross-resonance term, a
// depolarizing floor, and drift tuned so day-to-day corrective channels
// move by a few hundredths in diamond distance.
Scenario default_scenario();

struct CycleOutcome {
  int cycle = 0;
  bool ok = true;
  std::string error;
  PostRunReport report;
};

struct CampaignResult {
  SeedResult seed;
  double gst_gram_condition = 0.0;
  PredictionResiduals gst_residuals;
  int gst_executions = 0;  // the economy claim: exactly one per campaign
  std::vector<CycleOutcome> cycles;
  DriftReport drift;
  double mean_improvement = 0.0;
  double median_improvement = 0.0;
};

// Full pipeline: one GST characterization at the first listed cycle, one
// seed search, then a POST run per cycle reusing that single seed.
// Per-cycle failures are recorded and the campaign continues.
CampaignResult run_campaign(const Scenario& scenario);

nlohmann::json campaign_to_json(const CampaignResult& result);

}  // namespace post
