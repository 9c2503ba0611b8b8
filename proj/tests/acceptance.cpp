// Acceptance suite: end-to-end checks of the tomography-seeded tune-up
// pipeline at pinned tolerances. Each criterion prints one pass/fail line;
// the process exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "post/gates.hpp"
#include "post/rng.hpp"
#include "post/scenario.hpp"
#include "post/serialize.hpp"

using namespace post;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int id, const char* name, bool pass, const std::string& detail,
            double elapsed, double budget_s) {
  bool ok = pass && elapsed < budget_s;
  if (!ok) ++failures;
  std::printf("[%s] criterion %2d: %-22s %s (%.1fs / budget %.0fs)\n",
              ok ? "PASS" : "FAIL", id, name, detail.c_str(), elapsed,
              budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

//-------------------------------------------------------------------------
// 1. PTM conversions match the brute-force trace formula.
//-------------------------------------------------------------------------
void criterion_1() {
  Timer t;
  std::mt19937_64 rng(0xACC1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    int nq = (trial % 2) + 1;
    int d = 1 << nq;
    if (trial % 3 == 0) {
      CMat u = oracles::random_unitary(d, rng);
      Mat diff = ptm_from_unitary(u, nq).entries -
                 oracles::brute_force_ptm({u}, nq);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    } else {
      auto kraus = oracles::random_kraus_channel(d, 2 + trial % 3, rng);
      Mat diff = ptm_from_kraus(kraus, nq).entries -
                 oracles::brute_force_ptm(kraus, nq);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  report(1, "ptm oracle", worst < 1e-12, fmt("max |delta| = %.2e", worst),
         t.seconds(), 5);
}

//-------------------------------------------------------------------------
// 2. Composition is a homomorphism against Kraus-level composition.
//-------------------------------------------------------------------------
void criterion_2() {
  Timer t;
  std::mt19937_64 rng(0xACC2);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto k1 = oracles::random_kraus_channel(4, 2, rng);
    auto k2 = oracles::random_kraus_channel(4, 3, rng);
    PauliTransferMatrix lhs =
        compose(ptm_from_kraus(k2, 2), ptm_from_kraus(k1, 2));
    PauliTransferMatrix rhs =
        ptm_from_kraus(oracles::compose_kraus(k2, k1), 2);
    worst = std::max(worst,
                     (lhs.entries - rhs.entries).cwiseAbs().maxCoeff());
  }
  report(2, "composition", worst < 1e-10, fmt("max |delta| = %.2e", worst),
         t.seconds(), 5);
}

//-------------------------------------------------------------------------
// 3. LGST on exact probabilities predicts every collected circuit.
//-------------------------------------------------------------------------
NoiseConfig random_device_noise(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-0.4, 0.4);
  std::uniform_real_distribution<double> rate(0.0, 0.02);
  NoiseConfig cfg;
  cfg.bookend_angles = {angle(rng), angle(rng), angle(rng),
                        angle(rng), angle(rng), angle(rng)};
  cfg.cross_resonance_angle = 0.5 * angle(rng);
  cfg.depolarizing_2q = rate(rng);
  cfg.depolarizing_1q = 0.1 * rate(rng);
  cfg.single_qubit_overrotation = 0.2 * angle(rng);
  cfg.prep_error = rate(rng);
  cfg.readout_error = rate(rng);
  return cfg;
}

void criterion_3() {
  Timer t;
  std::mt19937_64 rng(0xACC3);
  FiducialSet fid = default_fiducials();
  GermSet germs = default_germs();
  auto catalog = build_gst_catalog(fid, germs, {1, 2, 4, 8});
  double worst = 0.0;
  for (int device = 0; device < 5; ++device) {
    DriftConfig drift;
    drift.rng_seed = 0xD0 + device;
    DriftingDeviceModel model(random_device_noise(rng), drift);
    GSTDataset dataset = collect(model, 0, fid, germs, catalog, 0);
    LgstResult est = lgst_estimate(dataset, ideal_gateset());
    PredictionResiduals res = prediction_residuals(est.raw, dataset);
    worst = std::max(worst, res.max);
  }
  report(3, "lgst exactness", worst < 1e-10,
         fmt("max |pred - obs| = %.2e over 5 devices", worst), t.seconds(),
         30);
}

//-------------------------------------------------------------------------
// 4. Seed search recovers constructed bookends and hits the analytic
//    incoherent floor under added depolarizing noise.
//-------------------------------------------------------------------------
void criterion_4() {
  Timer t;
  std::mt19937_64 rng(0xACC4);
  std::uniform_real_distribution<double> angle(-1.2, 1.2);
  const double q = 0.02;
  const double floor = q * std::sqrt(15.0);
  double worst_residual = 0.0, worst_floor_err = 0.0;
  for (int device = 0; device < 20; ++device) {
    using namespace gates;
    CMat v1 = unitary_from_params(angle(rng), angle(rng), angle(rng));
    CMat v2 = unitary_from_params(angle(rng), angle(rng), angle(rng));
    PauliTransferMatrix g =
        compose(ptm_from_unitary(on_control(v1), 2),
                compose(cnot_ptm(), ptm_from_unitary(on_control(v2), 2)));
    SeedResult seed =
        find_seed(g, CorrectionMode::control_only, 8, 0xBEEF + device);
    worst_residual = std::max(worst_residual, seed.residual_distance);

    PauliTransferMatrix noisy = compose(depolarizing_ptm(q, 2), g);
    SeedResult floor_seed =
        find_seed(noisy, CorrectionMode::control_only, 8, 0xFEED + device);
    worst_floor_err = std::max(
        worst_floor_err, std::abs(floor_seed.residual_distance - floor) / floor);
  }
  bool pass = worst_residual < 1e-6 && worst_floor_err < 0.01;
  report(4, "seed recovery", pass,
         fmt("max residual = %.2e, floor err = %.2f%%", worst_residual,
             100 * worst_floor_err),
         t.seconds(), 60);
}

//-------------------------------------------------------------------------
// 5. Decay-fit recovery in exact and shot modes; r identity.
//-------------------------------------------------------------------------
void criterion_5() {
  Timer t;
  const double A = 0.25, B = 0.75, p = 0.95;
  const std::vector<int> grid = {2, 4, 8, 16, 32, 64};

  std::vector<DecayPoint> exact;
  for (int m : grid) exact.push_back({m, A + B * std::pow(p, m), 0.0});
  DecayFit exact_fit = fit_decay(exact);
  bool exact_ok = std::abs(exact_fit.p - p) < 1e-6;
  bool identity_ok = exact_fit.r == (15.0 / 16.0) * (1.0 - exact_fit.p);

  int hits = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    std::mt19937_64 rng = make_rng(0xACC5, {std::uint64_t(rep)});
    std::vector<DecayPoint> pts;
    for (int m : grid) {
      double truth = A + B * std::pow(p, m);
      std::binomial_distribution<long long> bin(8190, truth);
      double sum = 0, sum_sq = 0;
      for (int c = 0; c < 20; ++c) {
        double f = bin(rng) / 8190.0;
        sum += f;
        sum_sq += f * f;
      }
      double mean = sum / 20;
      double var = std::max(0.0, sum_sq / 20 - mean * mean);
      pts.push_back({m, mean, std::sqrt(var / 20)});
    }
    DecayFit fit = fit_decay(pts);
    if (std::abs(fit.p - p) < 5e-3) ++hits;
  }
  bool pass = exact_ok && identity_ok && hits >= 95;
  report(5, "rb fit recovery", pass,
         fmt("exact |dp| = %.1e, shot hits %d/100", std::abs(exact_fit.p - p),
             hits),
         t.seconds(), 120);
}

//-------------------------------------------------------------------------
// 6-8, 10. Default-scenario ensemble: improvement, seeding value,
// convergence profile, and budget.
//-------------------------------------------------------------------------
struct EnsembleRun {
  PostRunReport seeded;
  PostRunReport zero_seeded;
};

std::vector<EnsembleRun> run_ensemble(int instances, int cycle) {
  Scenario base = default_scenario();
  base.gst_exact = true;
  base.objective.exact_mode = true;
  FiducialSet fid = default_fiducials();
  GermSet germs = default_germs();
  auto catalog = build_gst_catalog(fid, germs, base.gst_lengths, false);

  std::vector<EnsembleRun> runs;
  for (int inst = 0; inst < instances; ++inst) {
    Scenario s = base;
    s.seed = 0xE000 + inst;
    DriftingDeviceModel model = s.make_model();
    GSTDataset dataset =
        collect(model, s.cycles.front(), fid, germs, catalog, 0);
    LgstResult est = lgst_estimate(dataset, ideal_gateset());
    SeedResult seed =
        find_seed(est.projected.gate(names::cx), s.mode, s.seed_restarts,
                  derive_seed(s.seed, {0x5EED}));
    EnsembleRun run;
    run.seeded = run_post(model, cycle, seed, s.post_config(cycle));
    SeedResult zero;
    zero.params = CorrectionParams::zero(s.mode);
    zero.baseline_distance = zero.residual_distance = seed.baseline_distance;
    run.zero_seeded = run_post(model, cycle, zero, s.post_config(cycle));
    runs.push_back(std::move(run));
  }
  return runs;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

void criteria_6_to_8(const std::vector<EnsembleRun>& runs, double elapsed) {
  // 6: corrected beats native in >= 95% of runs, median improvement >= 10%.
  {
    int wins = 0;
    std::vector<double> improvements;
    for (const EnsembleRun& run : runs) {
      if (run.seeded.r_c < run.seeded.r_u) ++wins;
      improvements.push_back(run.seeded.improvement);
    }
    double med = median(improvements);
    bool pass = wins >= static_cast<int>(0.95 * runs.size()) && med >= 0.10;
    report(6, "post improvement", pass,
           fmt("r_c < r_u in %d/%zu, median improvement %.0f%%", wins,
               runs.size(), 100 * med),
           elapsed, 300);
  }

  // 7: median iterations to the midpoint threshold, seeded vs zero start.
  {
    std::vector<double> seeded_iters, zero_iters;
    for (const EnsembleRun& run : runs) {
      double native = run.seeded.native_objective;
      double best_final =
          std::min(run.seeded.final_objective, run.zero_seeded.final_objective);
      double threshold = native - 0.5 * (native - best_final);
      auto iters_to = [&](const PostRunReport& r) {
        if (r.seed_objective <= threshold) return 0;
        for (size_t i = 0; i < r.iterations.size(); ++i)
          if (r.iterations[i].best_objective <= threshold)
            return static_cast<int>(i) + 1;
        return static_cast<int>(r.iterations.size()) + 1;
      };
      seeded_iters.push_back(iters_to(run.seeded));
      zero_iters.push_back(iters_to(run.zero_seeded));
    }
    double med_seeded = median(seeded_iters);
    double med_zero = median(zero_iters);
    report(7, "seeding value", med_seeded < med_zero,
           fmt("median iterations to threshold: %.1f seeded vs %.1f zero",
               med_seeded, med_zero),
           elapsed, 600);
  }

  // 8: >= 80% of the improvement lands in the first three iterations for
  //    >= 70% of runs.
  {
    int profile_ok = 0;
    for (const EnsembleRun& run : runs) {
      double start = run.seeded.seed_objective;
      double final_ = run.seeded.final_objective;
      double at3 = start;
      for (size_t i = 0; i < run.seeded.iterations.size() && i < 3; ++i)
        at3 = run.seeded.iterations[i].best_objective;
      double frac =
          start - final_ > 1e-15 ? (start - at3) / (start - final_) : 1.0;
      if (frac >= 0.8) ++profile_ok;
    }
    bool pass = profile_ok >= static_cast<int>(0.7 * runs.size());
    report(8, "convergence profile", pass,
           fmt(">=80%% of gain in 3 iterations on %d/%zu runs", profile_ok,
               runs.size()),
           elapsed, 60);
  }

}

// 10: every default run stays under 150 candidate-objective evaluations.
void criterion_10(const std::vector<EnsembleRun>& runs, double elapsed) {
  int max_budget = 0;
  for (const EnsembleRun& run : runs)
    max_budget = std::max(max_budget, experiment_budget(run.seeded));
  report(10, "experiment budget", max_budget < 150,
         fmt("max budget %d evaluations (< 150)", max_budget), elapsed, 60);
}

//-------------------------------------------------------------------------
// 9. Diamond bounds: ordering and the dense-sampled oracle.
//-------------------------------------------------------------------------
using ChannelFn = std::function<CMat(const CMat&)>;

double dense_oracle(const ChannelFn& l1, const ChannelFn& l2, int samples,
                    std::mt19937_64& rng) {
  std::array<std::array<CMat, 2>, 2> delta;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      CMat e = CMat::Zero(2, 2);
      e(i, k) = 1.0;
      delta[i][k] = l1(e) - l2(e);
    }
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    CVec psi = oracles::haar_state(4, rng);
    CMat out = CMat::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        CMat anc(2, 2);
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l)
            anc(j, l) = psi(i * 2 + j) * std::conj(psi(k * 2 + l));
        out += oracles::kron(delta[i][k], anc);
      }
    Eigen::SelfAdjointEigenSolver<CMat> es(out);
    best = std::max(best, 0.5 * es.eigenvalues().cwiseAbs().sum());
  }
  return best;
}

void criterion_9() {
  Timer t;
  bool ordering_ok = true;
  std::mt19937_64 rng(0xACC9);
  for (int trial = 0; trial < 6; ++trial) {
    PauliTransferMatrix a =
        ptm_from_kraus(oracles::random_kraus_channel(4, 2, rng), 2);
    PauliTransferMatrix b =
        ptm_from_kraus(oracles::random_kraus_channel(4, 2, rng), 2);
    DiamondOptions opts;
    opts.num_samples = 400;
    opts.polish_iterations = 100;
    opts.rng_seed = 0x90 + trial;
    DiamondBounds bounds = diamond_bounds(a, b, opts);
    ordering_ok &= bounds.lower <= bounds.upper + 1e-12;
  }

  const double q = 0.08, theta = 0.2;
  DiamondOptions opts;
  opts.num_samples = 2000;
  opts.polish_iterations = 400;
  opts.rng_seed = 0x91;
  DiamondBounds dep_bounds = diamond_bounds(
      PauliTransferMatrix::identity(1), gates::depolarizing_ptm(q, 1), opts);
  opts.rng_seed = 0x92;
  DiamondBounds rot_bounds = diamond_bounds(
      PauliTransferMatrix::identity(1), ptm_from_unitary(gates::rz(theta), 1),
      opts);

  ChannelFn identity = [](const CMat& x) { return x; };
  ChannelFn dep = [&](const CMat& x) {
    return CMat((1.0 - q) * x + q * x.trace() * CMat::Identity(2, 2) / 2.0);
  };
  CMat u = gates::rz(theta);
  ChannelFn rot = [&](const CMat& x) { return CMat(u * x * u.adjoint()); };
  std::mt19937_64 oracle_rng(0xACCA);
  double dep_oracle = dense_oracle(identity, dep, 100000, oracle_rng);
  double rot_oracle = dense_oracle(identity, rot, 100000, oracle_rng);

  double dep_err = std::abs(dep_bounds.lower - dep_oracle) / dep_oracle;
  double rot_err = std::abs(rot_bounds.lower - rot_oracle) / rot_oracle;
  bool pass = ordering_ok && dep_err < 0.02 && rot_err < 0.02 &&
              dep_bounds.upper >= 3.0 * q / 4.0 - 1e-9;
  report(9, "diamond bounds", pass,
         fmt("oracle gap: dep %.2f%%, rot %.2f%%", 100 * dep_err,
             100 * rot_err),
         t.seconds(), 120);
}

//-------------------------------------------------------------------------
// 11. Campaign economy: one GST execution, bit-reproducible.
//-------------------------------------------------------------------------
void criterion_11() {
  Timer t;
  Scenario s = default_scenario();
  s.seed = 0xCA111;
  s.gst_exact = true;
  s.objective.exact_mode = true;
  // 12 cycles as configured by default.
  CampaignResult a = run_campaign(s);
  CampaignResult b = run_campaign(s);
  bool gst_once = a.gst_executions == 1 && b.gst_executions == 1;
  bool reproducible = campaign_to_json(a).dump() == campaign_to_json(b).dump();
  int ok_cycles = 0;
  for (const CycleOutcome& c : a.cycles) ok_cycles += c.ok;
  bool pass = gst_once && reproducible && a.cycles.size() == 12 &&
              ok_cycles == 12;
  report(11, "campaign economy", pass,
         fmt("gst runs = %d, %d/12 cycles ok, reproducible = %s",
             a.gst_executions, ok_cycles, reproducible ? "yes" : "no"),
         t.seconds(), 300);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  Timer ensemble_timer;
  std::vector<EnsembleRun> runs = run_ensemble(20, 6);
  double ensemble_elapsed = ensemble_timer.seconds();
  criteria_6_to_8(runs, ensemble_elapsed);
  criterion_9();
  criterion_10(runs, ensemble_elapsed);
  criterion_11();
  std::printf("================\n%s (%d failure%s)\n",
              failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
