// Command-line driver for the POST pipeline: characterize a noisy CNOT with
// gate set tomography on a simulated drifting device, seed corrective
// single-qubit unitaries, tune them with an adaptive Nelder-Mead loop whose
// objective is direct-RB infidelity, and track drift of the corrections.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "post/rng.hpp"
#include "post/scenario.hpp"
#include "post/serialize.hpp"

namespace {

using post::json;

struct CommonArgs {
  std::string scenario_path;
  std::optional<int> cycle;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool exact = false;
};

post::Scenario load_scenario(const CommonArgs& args) {
  post::Scenario s = args.scenario_path.empty()
                         ? post::default_scenario()
                         : post::Scenario::load(args.scenario_path);
  if (args.seed) s.seed = *args.seed;
  if (args.out) s.out_dir = *args.out;
  if (args.exact) {
    s.objective.exact_mode = true;
    s.gst_exact = true;
  }
  return s;
}

std::string cycle_dir(const post::Scenario& s, int cycle) {
  return s.out_dir + "/cycle_" + std::to_string(cycle);
}

int run_gst(const CommonArgs& args) {
  post::Scenario s = load_scenario(args);
  const int cycle = args.cycle.value_or(s.cycles.front());
  post::DriftingDeviceModel model = s.make_model();

  post::FiducialSet fiducials = post::default_fiducials();
  post::GermSet germs = post::default_germs();
  auto catalog = post::build_gst_catalog(fiducials, germs, s.gst_lengths,
                                         s.gst_full_product);
  post::GSTDataset dataset = post::collect(model, cycle, fiducials, germs,
                                           catalog, s.gst_exact ? 0 : s.gst_shots);
  post::LgstResult estimate = post::lgst_estimate(dataset, post::ideal_gateset());
  post::PredictionResiduals raw_res =
      post::prediction_residuals(estimate.raw, dataset);
  post::PredictionResiduals proj_res =
      post::prediction_residuals(estimate.projected, dataset);

  const std::string dir = cycle_dir(s, cycle);
  post::write_file(dir + "/dataset.txt", post::dataset_to_text(dataset));
  post::write_json_file(dir + "/gateset_raw.json",
                        post::gateset_to_json(estimate.raw));
  post::write_json_file(dir + "/gateset_cptp.json",
                        post::gateset_to_json(estimate.projected));

  json diag;
  diag["cycle"] = cycle;
  diag["unique_circuits"] = post::count_unique_circuits(catalog);
  diag["gram_condition"] = estimate.gram_condition;
  diag["projection_converged"] = estimate.projection_converged;
  diag["raw_residual_rms"] = raw_res.rms;
  diag["raw_residual_max"] = raw_res.max;
  diag["projected_residual_rms"] = proj_res.rms;
  diag["projected_residual_max"] = proj_res.max;
  json decay = json::array();
  for (const post::GermDecayRow& row :
       post::germ_decay_diagnostic(estimate.projected, dataset))
    decay.push_back({{"germ", row.germ},
                     {"L", row.length},
                     {"mean_observed_peak", row.mean_observed_peak},
                     {"rms_residual", row.rms_residual}});
  diag["germ_decay"] = decay;
  post::write_json_file(dir + "/gst_diagnostics.json", diag);

  std::cout << "gst: cycle " << cycle << ", "
            << post::count_unique_circuits(catalog) << " circuits, raw residual rms "
            << raw_res.rms << ", outputs in " << dir << "\n";
  return 0;
}

int run_seed(const std::string& estimate_path, const std::string& mode_str,
             int restarts, const std::string& out_path,
             std::uint64_t rng_seed, const std::string& tag) {
  post::GateSet estimate;
  try {
    estimate = post::gateset_from_json(post::read_json_file(estimate_path));
  } catch (const std::exception& e) {
    throw post::config_error(std::string("cannot read estimate: ") + e.what());
  }
  post::CorrectionMode mode = post::correction_mode_from_string(mode_str);
  post::SeedResult seed =
      post::find_seed(estimate.gate(post::names::cx), mode, restarts, rng_seed);
  post::write_json_file(out_path, post::seed_to_json(seed, tag));
  std::cout << "seed: residual " << seed.residual_distance << " (baseline "
            << seed.baseline_distance << ") -> " << out_path << "\n";
  return 0;
}

void write_post_outputs(const post::Scenario& s, int cycle,
                        const post::PostRunReport& report) {
  const std::string dir = cycle_dir(s, cycle);
  post::write_json_file(dir + "/report.json", post::post_report_to_json(report));
  post::write_file(dir + "/decay_native.csv",
                   post::rb_curve_to_csv(report.rb_native));
  post::write_file(dir + "/decay_corrected.csv",
                   post::rb_curve_to_csv(report.rb_corrected));
  std::vector<std::pair<std::string, post::CorrectionParams>> rows = {
      {"seed", report.seed.params},
      {"cycle-" + std::to_string(cycle), report.final_params}};
  std::string md = "# POST run, cycle " + std::to_string(cycle) + "\n\n" +
                   post::params_markdown_table(rows) + "\n" +
                   "native objective: " + std::to_string(report.native_objective) +
                   "\nfinal objective: " + std::to_string(report.final_objective) +
                   "\nr_u: " + std::to_string(report.r_u) +
                   "\nr_c: " + std::to_string(report.r_c) +
                   "\nimprovement: " + std::to_string(report.improvement) + "\n";
  post::write_file(dir + "/summary.md", md);
}

int run_post_cmd(const CommonArgs& args, const std::string& seed_path) {
  post::Scenario s = load_scenario(args);
  const int cycle = args.cycle.value_or(s.cycles.front());
  post::SeedResult seed;
  try {
    seed = post::seed_from_json(post::read_json_file(seed_path));
  } catch (const std::exception& e) {
    throw post::config_error(std::string("cannot read seed file: ") + e.what());
  }
  if (seed.params.mode != s.mode)
    throw post::config_error("seed file is " + post::to_string(seed.params.mode) +
                             " but the scenario wants " + post::to_string(s.mode));
  post::DriftingDeviceModel model = s.make_model();
  post::PostRunReport report =
      post::run_post(model, cycle, seed, s.post_config(cycle));
  write_post_outputs(s, cycle, report);
  std::cout << "post: cycle " << cycle << ", improvement "
            << report.improvement << ", budget "
            << post::experiment_budget(report) << " evaluations, outputs in "
            << cycle_dir(s, cycle) << "\n";
  return 0;
}

int run_campaign_cmd(const CommonArgs& args) {
  post::Scenario s = load_scenario(args);
  post::CampaignResult result = post::run_campaign(s);
  post::write_json_file(s.out_dir + "/campaign.json",
                        post::campaign_to_json(result));
  post::write_json_file(s.out_dir + "/seed.json",
                        post::seed_to_json(result.seed, "initial GST"));
  std::vector<std::pair<std::string, post::CorrectionParams>> rows;
  rows.emplace_back("initial GST", result.seed.params);
  for (const post::CycleOutcome& c : result.cycles) {
    if (!c.ok) continue;
    write_post_outputs(s, c.cycle, c.report);
    rows.emplace_back("cycle-" + std::to_string(c.cycle),
                      c.report.final_params);
  }
  if (!result.drift.series.empty())
    post::write_file(s.out_dir + "/drift.csv",
                     post::drift_report_to_csv(result.drift));
  std::string md = "# Campaign summary\n\n" + post::params_markdown_table(rows) +
                   "\nmean improvement: " + std::to_string(result.mean_improvement) +
                   "\nmedian improvement: " +
                   std::to_string(result.median_improvement) + "\n";
  post::write_file(s.out_dir + "/summary.md", md);
  std::cout << "campaign: " << result.cycles.size() << " cycles, mean improvement "
            << result.mean_improvement << ", median "
            << result.median_improvement << ", outputs in " << s.out_dir << "\n";
  return 0;
}

int run_drift_report(const std::string& campaign_dir,
                     const CommonArgs& args) {
  post::Scenario s = load_scenario(args);
  json campaign;
  try {
    campaign = post::read_json_file(campaign_dir + "/campaign.json");
  } catch (const std::exception& e) {
    throw post::config_error(std::string("cannot read campaign: ") + e.what());
  }
  post::SeedResult seed = post::seed_from_json(campaign.at("seed"));
  std::vector<std::pair<std::string, post::CorrectionParams>> history;
  for (const auto& row : campaign.at("cycles")) {
    if (!row.at("ok").get<bool>()) continue;
    history.emplace_back(
        "cycle-" + std::to_string(row.at("cycle").get<int>()),
        post::correction_from_json(row.at("report").at("final_params")));
  }
  post::DiamondOptions opts = s.diamond;
  opts.rng_seed = post::derive_seed(s.seed, {0x64726966'74637c69ULL});
  post::DriftReport report = post::drift_report(history, seed.params, opts);
  post::write_file(campaign_dir + "/drift.csv",
                   post::drift_report_to_csv(report));
  post::write_json_file(campaign_dir + "/drift.json",
                        post::drift_report_to_json(report));
  std::cout << "drift-report: " << report.series.size()
            << " entries, mean distance to seed " << report.mean_to_seed
            << ", mean step " << report.mean_step << "\n";
  return 0;
}

int run_bench(const CommonArgs& args, const std::string& params_path) {
  post::Scenario s = load_scenario(args);
  const int cycle = args.cycle.value_or(s.cycles.front());
  post::DriftingDeviceModel model = s.make_model();
  std::optional<post::CorrectionParams> params;
  if (!params_path.empty()) {
    json j = post::read_json_file(params_path);
    params = j.contains("params")
                 ? post::seed_from_json(j).params
                 : post::correction_from_json(j);
  }
  const std::uint64_t bench_seed =
      post::derive_seed(s.seed, {0x62656e63'687c7c01ULL, std::uint64_t(cycle)});
  std::vector<int> grid = {2, 4, 8, 16, 32, 64};
  post::RBCurve native =
      post::run_rb_curve(model, cycle, grid, s.objective, nullptr, bench_seed);
  const std::string dir = cycle_dir(s, cycle);
  post::write_file(dir + "/bench_native.csv", post::rb_curve_to_csv(native));
  json fits;
  fits["native"] = post::rb_curve_to_json(native);
  if (params) {
    post::RBCurve corrected = post::run_rb_curve(model, cycle, grid,
                                                 s.objective, &*params,
                                                 bench_seed);
    post::write_file(dir + "/bench_corrected.csv",
                     post::rb_curve_to_csv(corrected));
    fits["corrected"] = post::rb_curve_to_json(corrected);
    fits["improvement"] = post::improvement(native.fit.r, corrected.fit.r);
  }
  post::write_json_file(dir + "/bench.json", fits);
  std::cout << "bench: cycle " << cycle << ", r_native " << native.fit.r
            << ", outputs in " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Tomography-seeded CNOT tune-up on a simulated drifting device"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string seed_file;
  std::string estimate_file;
  std::string params_file;
  std::string campaign_dir;
  std::string mode_str = "control-only";
  std::string tag = "seed";
  int restarts = 8;
  std::uint64_t seed_rng = 1;
  std::string seed_out = "seed.json";

  auto add_common = [&](CLI::App* cmd, bool with_cycle = true) {
    cmd->add_option("--scenario", common.scenario_path,
                    "Scenario config file (JSON)");
    if (with_cycle)
      cmd->add_option("--cycle", [&](const CLI::results_t& r) {
        common.cycle = std::stoi(r[0]);
        return true;
      }, "Calibration cycle index");
    cmd->add_option("--out", [&](const CLI::results_t& r) {
      common.out = r[0];
      return true;
    }, "Output directory override");
    cmd->add_option("--seed", [&](const CLI::results_t& r) {
      common.seed = std::stoull(r[0]);
      return true;
    }, "Global seed override");
    cmd->add_flag("--exact", common.exact,
                  "Exact probabilities instead of shot sampling");
  };

  CLI::App* gst = app.add_subcommand("gst", "Run gate set tomography");
  add_common(gst);

  CLI::App* seed_cmd =
      app.add_subcommand("seed", "Seed corrections from a GST estimate");
  seed_cmd->add_option("--estimate", estimate_file, "Gateset estimate JSON")
      ->required();
  seed_cmd->add_option("--mode", mode_str, "control-only | both");
  seed_cmd->add_option("--restarts", restarts, "Random restarts");
  seed_cmd->add_option("--rng-seed", seed_rng, "Restart RNG seed");
  seed_cmd->add_option("--out", seed_out, "Output seed file");
  seed_cmd->add_option("--tag", tag, "Display row tag");

  CLI::App* post_cmd = app.add_subcommand("post", "Run one POST tune-up");
  add_common(post_cmd);
  post_cmd->add_option("--seed-file", seed_file, "Seed parameters JSON")
      ->required();

  CLI::App* campaign = app.add_subcommand(
      "campaign", "GST once, then POST across all scenario cycles");
  add_common(campaign, false);

  CLI::App* drift = app.add_subcommand(
      "drift-report", "Diamond-distance drift report from a campaign");
  drift->add_option("--campaign", campaign_dir, "Campaign output directory")
      ->required();
  add_common(drift, false);

  CLI::App* bench =
      app.add_subcommand("bench", "Decay-curve comparison only");
  add_common(bench);
  bench->add_option("--params", params_file,
                    "Correction parameters or seed JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gst->parsed()) return run_gst(common);
    if (seed_cmd->parsed())
      return run_seed(estimate_file, mode_str, restarts, seed_out, seed_rng,
                      tag);
    if (post_cmd->parsed()) return run_post_cmd(common, seed_file);
    if (campaign->parsed()) return run_campaign_cmd(common);
    if (drift->parsed()) return run_drift_report(campaign_dir, common);
    if (bench->parsed()) return run_bench(common, params_file);
  } catch (const post::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
