#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "post/pauli.hpp"

namespace post {

// Native gate names shared across the pipeline. Gxi acts on qubit 0 (the
// CNOT control), Gix on qubit 1.
namespace names {
inline const std::string idle = "Gi";
inline const std::string xi = "Gxi";
inline const std::string ix = "Gix";
inline const std::string yi = "Gyi";
inline const std::string iy = "Giy";
inline const std::string cx = "Gcx";
}  // namespace names

std::vector<std::string> gateset_names();

// Preparation, measurement effects, and named gates characterized together.
struct GateSet {
  int num_qubits = 2;
  DensityVector rho;
  std::vector<MeasurementEffect> effects;  // outcome order 00, 01, 10, 11
  std::map<std::string, PauliTransferMatrix> gates;

  const PauliTransferMatrix& gate(const std::string& name) const;
  bool spam_valid(double tol = 1e-7) const;
};

// The ideal version of the native gateset with perfect SPAM.
GateSet ideal_gateset();

std::string circuit_to_string(const std::vector<std::string>& circuit);
std::vector<std::string> circuit_from_string(const std::string& s);

DensityVector propagate(const GateSet& gs,
                        const std::vector<std::string>& circuit);

// Outcome probabilities for a circuit: clamped to [0,1] and renormalized,
// suitable for sampling.
std::vector<double> circuit_probabilities(const GateSet& gs,
                                          const std::vector<std::string>& circuit);

std::vector<long long> sample_multinomial(const std::vector<double>& probs,
                                          long long shots,
                                          std::mt19937_64& rng);

}  // namespace post
