#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "post/device.hpp"
#include "post/gates.hpp"
#include "post/rng.hpp"
#include "post/scenario.hpp"

using namespace post;

namespace {

NoiseConfig table_like_config() {
  NoiseConfig cfg;
  cfg.bookend_angles = {0.046, -1.271, 0.480, 0.029, 0.480, 0.393};
  return cfg;
}

std::vector<std::string> random_circuit(std::mt19937_64& rng, int len) {
  auto names_list = gateset_names();
  std::uniform_int_distribution<size_t> pick(0, names_list.size() - 1);
  std::vector<std::string> c;
  for (int i = 0; i < len; ++i) c.push_back(names_list[pick(rng)]);
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("device");

TEST_CASE("zero noise config reproduces the ideal gateset") {
  GateSet noisy = noisy_gateset(NoiseConfig{});
  GateSet ideal = ideal_gateset();
  for (const std::string& name : gateset_names())
    CHECK(frobenius_distance(noisy.gate(name), ideal.gate(name)) < 1e-12);
  CHECK((noisy.rho.components - ideal.rho.components).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(noisy.spam_valid());
}

TEST_CASE("noisy_cnot with all-zero config is the ideal CNOT") {
  CHECK(frobenius_distance(noisy_cnot(NoiseConfig{}), gates::cnot_ptm()) <
        1e-12);
}

TEST_CASE("pure two-qubit depolarizing scales all rows but the first") {
  NoiseConfig cfg;
  cfg.depolarizing_2q = 0.04;
  PauliTransferMatrix r = noisy_cnot(cfg);
  const Mat& ideal = gates::cnot_ptm().entries;
  CHECK((r.entries.row(0) - ideal.row(0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((r.entries.bottomRows(15) - 0.96 * ideal.bottomRows(15))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("buried bookend unitaries move the CNOT away from ideal, reproducibly") {
  NoiseConfig cfg = table_like_config();
  PauliTransferMatrix r1 = noisy_cnot(cfg);
  PauliTransferMatrix r2 = noisy_cnot(cfg);
  double dist = frobenius_distance(r1, gates::cnot_ptm());
  CHECK(dist > 0.1);
  CHECK((r1.entries - r2.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_cptp(r1));
}

TEST_CASE("probabilities in noise config are validated") {
  NoiseConfig cfg;
  cfg.depolarizing_2q = 0.3;
  CHECK_THROWS_AS(noisy_gateset(cfg), std::invalid_argument);
  NoiseConfig bad_angles;
  bad_angles.bookend_angles = {0.1, 0.2};
  CHECK_THROWS_AS(noisy_gateset(bad_angles), std::invalid_argument);
}

TEST_CASE("gateset at cycle 0 with zero drift equals the base gateset") {
  Scenario s = default_scenario();
  DriftConfig no_drift;
  no_drift.rng_seed = 42;
  DriftingDeviceModel model(s.noise, no_drift);
  GateSet at0 = model.gateset_at_cycle(0);
  GateSet at7 = model.gateset_at_cycle(7);
  GateSet base = noisy_gateset(s.noise);
  for (const std::string& name : gateset_names()) {
    CHECK((at0.gate(name).entries - base.gate(name).entries).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((at7.gate(name).entries - base.gate(name).entries).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("drift walk is deterministic and actually moves the angles") {
  Scenario s = default_scenario();
  DriftConfig drift;
  drift.per_cycle_sigma = 0.02;
  drift.depolarizing_jitter = 0.02;
  drift.rng_seed = 99;
  DriftingDeviceModel model(s.noise, drift);

  NoiseConfig c5a = model.config_at_cycle(5);
  NoiseConfig c5b = model.config_at_cycle(5);
  for (size_t i = 0; i < c5a.bookend_angles.size(); ++i) {
    CHECK(c5a.bookend_angles[i] == c5b.bookend_angles[i]);
    CHECK(c5a.bookend_angles[i] != s.noise.bookend_angles[i]);
  }
  CHECK(c5a.depolarizing_2q == c5b.depolarizing_2q);
  CHECK(c5a.depolarizing_2q != s.noise.depolarizing_2q);

  // Bit-identical gatesets from identical (seed, cycle).
  GateSet g1 = model.gateset_at_cycle(5);
  GateSet g2 = DriftingDeviceModel(s.noise, drift).gateset_at_cycle(5);
  for (const std::string& name : gateset_names())
    CHECK((g1.gate(name).entries - g2.gate(name).entries).cwiseAbs().maxCoeff() ==
          0.0);
  CHECK_THROWS_AS(model.config_at_cycle(-1), std::invalid_argument);
}

TEST_CASE("every gate at every probed cycle is CPTP and SPAM stays valid") {
  Scenario s = default_scenario();
  DriftConfig drift = s.drift;
  drift.rng_seed = 7;
  DriftingDeviceModel model(s.noise, drift);
  for (int cycle : {0, 3, 11, 25, 40}) {
    GateSet gs = model.gateset_at_cycle(cycle);
    for (const std::string& name : gateset_names())
      CHECK(is_cptp(gs.gate(name), 1e-9));
    CHECK(gs.spam_valid());
  }
}

TEST_CASE("zero-noise model reproduces ideal probabilities on random circuits") {
  DriftConfig drift;
  drift.rng_seed = 3;
  DriftingDeviceModel model(NoiseConfig{}, drift);
  GateSet ideal = ideal_gateset();
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> circuit = random_circuit(rng, 8);
    std::vector<double> probs = model.exact_probabilities(0, circuit);
    std::vector<double> expected = circuit_probabilities(ideal, circuit);
    for (int b = 0; b < 4; ++b)
      CHECK(std::abs(probs[b] - expected[b]) < 1e-12);
  }
}

TEST_CASE("empty circuit on an ideal device lands every shot on 00") {
  DriftConfig drift;
  drift.rng_seed = 5;
  DriftingDeviceModel model(NoiseConfig{}, drift);
  std::vector<long long> counts = model.simulate_counts(0, {}, 8190);
  CHECK(counts[0] == 8190);
  CHECK(counts[1] + counts[2] + counts[3] == 0);
}

TEST_CASE("two X(pi/2) pulses flip the control deterministically") {
  DriftConfig drift;
  drift.rng_seed = 5;
  DriftingDeviceModel model(NoiseConfig{}, drift);
  std::vector<long long> counts =
      model.simulate_counts(0, {names::xi, names::xi}, 8190);
  CHECK(counts[2] == 8190);  // outcome "10"
}

TEST_CASE("unknown gate names are rejected") {
  DriftConfig drift;
  DriftingDeviceModel model(NoiseConfig{}, drift);
  CHECK_THROWS_AS(model.simulate_counts(0, {"Gxx"}, 10), std::invalid_argument);
  CHECK_THROWS_AS(model.simulate_counts(0, {}, 0), std::invalid_argument);
}

TEST_CASE("sampled frequencies agree with exact probabilities (chi-square)") {
  Scenario s = default_scenario();
  DriftConfig drift = s.drift;
  drift.rng_seed = 21;
  DriftingDeviceModel model(s.noise, drift);
  const long long shots = 8190;
  // dof = 3 critical value at significance 0.001.
  const double critical = 16.266;
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<std::string> circuit = random_circuit(rng, 6);
    std::vector<double> probs = model.exact_probabilities(0, circuit);
    std::vector<long long> counts = model.simulate_counts(0, circuit, shots);
    long long total = 0;
    double chi2 = 0.0;
    for (int b = 0; b < 4; ++b) {
      total += counts[b];
      double expected = probs[b] * shots;
      if (expected > 1e-9)
        chi2 += (counts[b] - expected) * (counts[b] - expected) / expected;
      else
        CHECK(counts[b] == 0);
    }
    CHECK(total == shots);
    CHECK(chi2 < critical);
  }
}

TEST_SUITE_END();
