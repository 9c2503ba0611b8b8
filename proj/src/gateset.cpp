#include "post/gateset.hpp"

#include <sstream>
#include <stdexcept>

#include "post/gates.hpp"

namespace post {

std::vector<std::string> gateset_names() {
  return {names::idle, names::xi, names::ix, names::yi, names::iy, names::cx};
}

const PauliTransferMatrix& GateSet::gate(const std::string& name) const {
  auto it = gates.find(name);
  if (it == gates.end())
    throw std::invalid_argument("unknown gate name: " + name);
  return it->second;
}

bool GateSet::spam_valid(double tol) const {
  if (std::abs(rho.trace_component() - 1.0 / std::sqrt(double(rho.dim()))) >
      tol)
    return false;
  if (rho.purity() > 1.0 + tol) return false;
  Eigen::SelfAdjointEigenSolver<CMat> rho_es(rho.to_matrix());
  if (rho_es.eigenvalues().minCoeff() < -tol) return false;
  Vec sum = Vec::Zero(rho.components.size());
  for (const MeasurementEffect& e : effects) {
    Eigen::SelfAdjointEigenSolver<CMat> es(e.to_matrix());
    if (es.eigenvalues().minCoeff() < -tol) return false;
    if (es.eigenvalues().maxCoeff() > 1.0 + tol) return false;
    sum += e.components;
  }
  // Effects must sum to the identity effect: sqrt(d) on the trace component.
  Vec identity_effect = Vec::Zero(sum.size());
  identity_effect(0) = std::sqrt(double(rho.dim()));
  return (sum - identity_effect).cwiseAbs().maxCoeff() <= tol;
}

GateSet ideal_gateset() {
  using namespace gates;
  GateSet gs;
  gs.num_qubits = 2;
  CVec ket00 = CVec::Zero(4);
  ket00(0) = 1.0;
  gs.rho = DensityVector::from_pure(ket00, 2);
  for (int b = 0; b < 4; ++b) {
    CMat proj = CMat::Zero(4, 4);
    proj(b, b) = 1.0;
    std::string label = {char('0' + (b >> 1)), char('0' + (b & 1))};
    gs.effects.push_back(MeasurementEffect::from_matrix(proj, 2, label));
  }
  const double hp = M_PI / 2;
  gs.gates[names::idle] = PauliTransferMatrix::identity(2);
  gs.gates[names::xi] = ideal_ptm(on_control(rx(hp)), 2);
  gs.gates[names::ix] = ideal_ptm(on_target(rx(hp)), 2);
  gs.gates[names::yi] = ideal_ptm(on_control(ry(hp)), 2);
  gs.gates[names::iy] = ideal_ptm(on_target(ry(hp)), 2);
  gs.gates[names::cx] = cnot_ptm();
  return gs;
}

std::string circuit_to_string(const std::vector<std::string>& circuit) {
  if (circuit.empty()) return "{}";
  std::ostringstream os;
  for (size_t i = 0; i < circuit.size(); ++i) {
    if (i) os << ":";
    os << circuit[i];
  }
  return os.str();
}

std::vector<std::string> circuit_from_string(const std::string& s) {
  if (s == "{}") return {};
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':'))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

DensityVector propagate(const GateSet& gs,
                        const std::vector<std::string>& circuit) {
  DensityVector state = gs.rho;
  for (const std::string& name : circuit)
    state = apply(gs.gate(name), state);
  return state;
}

std::vector<double> circuit_probabilities(const GateSet& gs,
                                          const std::vector<std::string>& circuit) {
  DensityVector state = propagate(gs, circuit);
  std::vector<double> probs;
  probs.reserve(gs.effects.size());
  double total = 0.0;
  for (const MeasurementEffect& e : gs.effects) {
    double p = clamp01(e.components.dot(state.components));
    probs.push_back(p);
    total += p;
  }
  if (total <= 0.0) throw std::runtime_error("degenerate outcome distribution");
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<long long> sample_multinomial(const std::vector<double>& probs,
                                          long long shots,
                                          std::mt19937_64& rng) {
  std::vector<long long> counts(probs.size(), 0);
  long long remaining = shots;
  double mass = 1.0;
  for (size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    double p = mass > 0.0 ? std::min(1.0, std::max(0.0, probs[i] / mass)) : 0.0;
    std::binomial_distribution<long long> bin(remaining, p);
    long long c = bin(rng);
    counts[i] = c;
    remaining -= c;
    mass -= probs[i];
  }
  counts.back() = remaining;
  return counts;
}

}  // namespace post
