#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "post/gateset.hpp"

namespace post {

// Static noise parameters of the synthetic device. The bookend angles bury
// local unitaries around the native CNOT: [theta,phi,lambda] of the
// post-CNOT unitary followed by the pre-CNOT one (control only, 6 angles),
// or post-pair then pre-pair (both qubits, 12 angles).
struct NoiseConfig {
  std::vector<double> bookend_angles = std::vector<double>(6, 0.0);
  double cross_resonance_angle = 0.0;
  double depolarizing_2q = 0.0;
  double depolarizing_1q = 0.0;
  double single_qubit_overrotation = 0.0;
  double prep_error = 0.0;
  double readout_error = 0.0;

  bool both_qubit_bookends() const { return bookend_angles.size() == 12; }
  void validate() const;
};

// Gaussian random walk on the coherent angles per calibration cycle, with
// the stochastic strengths jittered multiplicatively.
struct DriftConfig {
  double per_cycle_sigma = 0.0;
  double depolarizing_jitter = 0.0;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

// Noisy native CNOT:
//   dep_2q . ptm(U_post) . ptm(ZX error) . ptm(CNOT) . ptm(U_pre)
PauliTransferMatrix noisy_cnot(const NoiseConfig& config);

// An arbitrary single-qubit gate as the device executes it: the rotation
// angle scales by (1 + overrotation/(pi/2)) so a native pi/2 pulse is off
// by exactly `single_qubit_overrotation`, followed by dep_1q.
PauliTransferMatrix noisy_one_qubit_gate(double theta, double phi,
                                         double lambda, int qubit,
                                         const NoiseConfig& config);

// Ground-truth synthetic device. Immutable; every query is deterministic in
// (seed, cycle), and count sampling derives a substream from
// (seed, cycle, circuit hash) so concurrent circuit simulation is race-free.
class DriftingDeviceModel {
 public:
  DriftingDeviceModel(NoiseConfig base, DriftConfig drift);

  const NoiseConfig& base() const { return base_; }
  const DriftConfig& drift() const { return drift_; }
  std::uint64_t seed() const { return drift_.rng_seed; }

  // Base config advanced by `cycle` steps of the seeded drift walk.
  NoiseConfig config_at_cycle(int cycle) const;

  GateSet gateset_at_cycle(int cycle) const;

  std::vector<double> exact_probabilities(
      int cycle, const std::vector<std::string>& circuit) const;

  std::vector<long long> simulate_counts(
      int cycle, const std::vector<std::string>& circuit,
      long long shots) const;

  // Same sampling substream as simulate_counts, against a gateset the
  // caller already built for this cycle (bulk collection path).
  std::vector<long long> sample_counts(const GateSet& gs, int cycle,
                                       const std::vector<std::string>& circuit,
                                       long long shots) const;

 private:
  NoiseConfig base_;
  DriftConfig drift_;
};

// Builds the full noisy gateset for a fixed noise configuration.
GateSet noisy_gateset(const NoiseConfig& config);

}  // namespace post
