#include "post/post_run.hpp"

#include <stdexcept>

#include "post/rng.hpp"

namespace post {

namespace {
constexpr std::uint64_t kObjectiveStream = 0x706f7374'6f626a31ULL;
constexpr std::uint64_t kBenchStream = 0x706f7374'626e6368ULL;
}  // namespace

PostRunReport run_post(const DriftingDeviceModel& model, int cycle,
                       const SeedResult& seed, const PostRunConfig& config) {
  seed.params.validate();
  config.nm.validate();

  PostRunReport report;
  report.cycle = cycle;
  report.seed = seed;

  DrbObjective objective(
      model, cycle, config.objective,
      derive_seed(config.run_seed, {kObjectiveStream, std::uint64_t(cycle)}));

  const CorrectionMode mode = seed.params.mode;
  Objective fn = [&](const std::vector<double>& x) {
    CorrectionParams params{mode, x};
    return objective.evaluate(&params);
  };

  report.native_objective = objective.evaluate(nullptr);

  Simplex simplex = init_simplex(seed.params.angles, config.nm.init_step);
  for (SimplexVertex& v : simplex.vertices) v.value = fn(v.point);
  report.seed_objective = simplex.vertices.front().value;  // seed vertex
  simplex.sort();
  report.baseline_evals =
      1 + static_cast<int>(simplex.vertices.size());  // native + simplex

  double best = simplex.best().value;
  int stall_streak = 0;
  for (int it = 1; it <= config.nm.max_iterations; ++it) {
    IterationOutcome outcome = nm_iterate(simplex, fn, config.nm);
    if (simplex.best().value > best + 1e-12)
      throw std::logic_error("POST best objective worsened");
    best = simplex.best().value;
    report.iterations.push_back({outcome.evals, best, outcome.improved});
    report.candidate_evals += outcome.evals;
    if (outcome.improved) {
      stall_streak = 0;
      report.last_improvement_iteration = it;
    } else if (++stall_streak >= config.nm.no_improve_limit) {
      break;
    }
  }

  report.final_objective = simplex.best().value;
  report.final_params =
      CorrectionParams{mode, simplex.best().point}.canonicalized();

  // Step 5: full decay-curve comparison, shared circuits for both gates.
  const std::uint64_t bench_seed =
      derive_seed(config.run_seed, {kBenchStream, std::uint64_t(cycle)});
  report.rb_native = run_rb_curve(model, cycle, config.rb_m_grid,
                                  config.objective, nullptr, bench_seed);
  report.rb_corrected =
      run_rb_curve(model, cycle, config.rb_m_grid, config.objective,
                   &report.final_params, bench_seed);
  report.r_u = report.rb_native.fit.r;
  report.r_c = report.rb_corrected.fit.r;
  report.improvement = improvement(report.r_u, report.r_c);
  return report;
}

int experiment_budget(const PostRunReport& report) {
  return report.baseline_evals + report.candidate_evals;
}

}  // namespace post
