#include "post/device.hpp"

#include <cmath>
#include <stdexcept>

#include "post/gates.hpp"
#include "post/rng.hpp"

namespace post {

namespace {

constexpr std::uint64_t kDriftStream = 0x64726966'74777c6bULL;
constexpr std::uint64_t kCountStream = 0x636f756e'74737c01ULL;

void check_probability(double p, const char* what) {
  if (p < 0.0 || p > 0.25)
    throw std::invalid_argument(std::string(what) +
                                " must be in [0, 0.25], got " +
                                std::to_string(p));
}

PauliTransferMatrix bookend_pair_ptm(const std::vector<double>& angles,
                                     size_t offset, bool both_qubits) {
  using namespace gates;
  CMat u_ctrl = unitary_from_params(angles[offset], angles[offset + 1],
                                    angles[offset + 2]);
  CMat u = both_qubits
               ? kron(u_ctrl, unitary_from_params(angles[offset + 3],
                                                  angles[offset + 4],
                                                  angles[offset + 5]))
               : on_control(u_ctrl);
  return ptm_from_unitary(u, 2);
}

}  // namespace

void NoiseConfig::validate() const {
  if (bookend_angles.size() != 6 && bookend_angles.size() != 12)
    throw std::invalid_argument("bookend_angles must hold 6 or 12 angles");
  check_probability(depolarizing_2q, "depolarizing_2q");
  check_probability(depolarizing_1q, "depolarizing_1q");
  check_probability(prep_error, "prep_error");
  check_probability(readout_error, "readout_error");
}

void DriftConfig::validate() const {
  if (per_cycle_sigma < 0.0 || depolarizing_jitter < 0.0)
    throw std::invalid_argument("drift sigmas must be >= 0");
}

PauliTransferMatrix noisy_cnot(const NoiseConfig& config) {
  using namespace gates;
  const bool both = config.both_qubit_bookends();
  const size_t pre_offset = both ? 6 : 3;
  PauliTransferMatrix post_u = bookend_pair_ptm(config.bookend_angles, 0, both);
  PauliTransferMatrix pre_u =
      bookend_pair_ptm(config.bookend_angles, pre_offset, both);
  PauliTransferMatrix zx =
      ptm_from_unitary(zx_rotation(config.cross_resonance_angle), 2);
  PauliTransferMatrix r = compose(zx, compose(cnot_ptm(), pre_u));
  r = compose(post_u, r);
  return compose(depolarizing_ptm(config.depolarizing_2q, 2), r);
}

PauliTransferMatrix noisy_one_qubit_gate(double theta, double phi,
                                         double lambda, int qubit,
                                         const NoiseConfig& config) {
  using namespace gates;
  double scaled = theta * (1.0 + config.single_qubit_overrotation / (M_PI / 2));
  CMat u = unitary_from_params(scaled, phi, lambda);
  PauliTransferMatrix r =
      ptm_from_unitary(qubit == 0 ? on_control(u) : on_target(u), 2);
  return compose(depolarizing_on_qubit_ptm(config.depolarizing_1q, qubit), r);
}

GateSet noisy_gateset(const NoiseConfig& config) {
  using namespace gates;
  config.validate();
  GateSet gs = ideal_gateset();
  const double hp = M_PI / 2;

  PauliTransferMatrix idle_noise =
      compose(depolarizing_on_qubit_ptm(config.depolarizing_1q, 0),
              depolarizing_on_qubit_ptm(config.depolarizing_1q, 1));
  gs.gates[names::idle] = idle_noise;
  gs.gates[names::xi] = noisy_one_qubit_gate(hp, -hp, hp, 0, config);
  gs.gates[names::ix] = noisy_one_qubit_gate(hp, -hp, hp, 1, config);
  gs.gates[names::yi] = noisy_one_qubit_gate(hp, 0.0, 0.0, 0, config);
  gs.gates[names::iy] = noisy_one_qubit_gate(hp, 0.0, 0.0, 1, config);
  gs.gates[names::cx] = noisy_cnot(config);

  // Depolarized preparation of |00>.
  CVec ket00 = CVec::Zero(4);
  ket00(0) = 1.0;
  CMat rho = (1.0 - config.prep_error) * (ket00 * ket00.adjoint()) +
             config.prep_error * CMat::Identity(4, 4) / 4.0;
  gs.rho = DensityVector::from_matrix(rho, 2);

  // Symmetric per-qubit readout flips; effects still sum to identity.
  const double em = config.readout_error;
  CMat e0(2, 2), e1(2, 2);
  e0 << 1.0 - em, 0, 0, em;
  e1 << em, 0, 0, 1.0 - em;
  const CMat one_q[2] = {e0, e1};
  gs.effects.clear();
  for (int b = 0; b < 4; ++b) {
    CMat effect = kron(one_q[(b >> 1) & 1], one_q[b & 1]);
    std::string label = {char('0' + (b >> 1)), char('0' + (b & 1))};
    gs.effects.push_back(MeasurementEffect::from_matrix(effect, 2, label));
  }
  return gs;
}

DriftingDeviceModel::DriftingDeviceModel(NoiseConfig base, DriftConfig drift)
    : base_(std::move(base)), drift_(drift) {
  base_.validate();
  drift_.validate();
}

NoiseConfig DriftingDeviceModel::config_at_cycle(int cycle) const {
  if (cycle < 0) throw std::invalid_argument("cycle must be >= 0");
  NoiseConfig cfg = base_;
  for (int step = 1; step <= cycle; ++step) {
    std::mt19937_64 rng =
        make_rng(drift_.rng_seed, {kDriftStream, std::uint64_t(step)});
    std::normal_distribution<double> walk(0.0, drift_.per_cycle_sigma);
    for (double& a : cfg.bookend_angles) a = gates::wrap_angle(a + walk(rng));
    cfg.cross_resonance_angle =
        gates::wrap_angle(cfg.cross_resonance_angle + walk(rng));
    cfg.single_qubit_overrotation =
        gates::wrap_angle(cfg.single_qubit_overrotation + walk(rng));
    std::normal_distribution<double> jitter(0.0, drift_.depolarizing_jitter);
    auto jittered = [&](double q) {
      double scaled = q * std::max(0.0, 1.0 + jitter(rng));
      return std::min(0.25, std::max(0.0, scaled));
    };
    cfg.depolarizing_2q = jittered(cfg.depolarizing_2q);
    cfg.depolarizing_1q = jittered(cfg.depolarizing_1q);
  }
  return cfg;
}

GateSet DriftingDeviceModel::gateset_at_cycle(int cycle) const {
  return noisy_gateset(config_at_cycle(cycle));
}

std::vector<double> DriftingDeviceModel::exact_probabilities(
    int cycle, const std::vector<std::string>& circuit) const {
  return circuit_probabilities(gateset_at_cycle(cycle), circuit);
}

std::vector<long long> DriftingDeviceModel::simulate_counts(
    int cycle, const std::vector<std::string>& circuit,
    long long shots) const {
  return sample_counts(gateset_at_cycle(cycle), cycle, circuit, shots);
}

std::vector<long long> DriftingDeviceModel::sample_counts(
    const GateSet& gs, int cycle, const std::vector<std::string>& circuit,
    long long shots) const {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  std::vector<double> probs = circuit_probabilities(gs, circuit);
  std::mt19937_64 rng =
      make_rng(drift_.rng_seed,
               {kCountStream, std::uint64_t(cycle),
                hash_string(circuit_to_string(circuit))});
  return sample_multinomial(probs, shots, rng);
}

}  // namespace post
