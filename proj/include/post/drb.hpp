#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "post/correction.hpp"
#include "post/device.hpp"

namespace post {

struct DRBLayer {
  bool is_cnot = false;
  // Gate names on (qubit 0, qubit 1) when not a CNOT layer.
  std::string gate_q0;
  std::string gate_q1;
};

// One direct-RB circuit: a product-stabilizer preparation layer compiled
// from native pi/2 pulses, m core layers, and the noiselessly propagated
// ideal output used as the success projector.
struct DRBCircuit {
  std::vector<std::string> prep;
  std::vector<DRBLayer> layers;
  DensityVector ideal_output;
  int m = 0;
  int cnot_count = 0;

  std::vector<std::string> flattened() const;
};

// Core layers draw a CNOT with probability cnot_fraction, otherwise
// independent uniformly random X(pi/2)/Y(pi/2) pulses on each qubit.
DRBCircuit generate_drb_circuit(int m, double cnot_fraction,
                                std::mt19937_64& rng);

// Overlap of the noisy output with the ideal-output projector. When a
// correction is given every CNOT layer runs as corrective unitary, native
// CNOT, corrective unitary, all with the device's gate errors. shots == 0
// returns the exact value; otherwise a binomial estimate at `shots`.
double success_probability(const DriftingDeviceModel& model, int cycle,
                           const DRBCircuit& circuit,
                           const CorrectionParams* correction, long long shots,
                           std::mt19937_64* rng);

struct DecayPoint {
  int m = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Fit of P_m = A + B p^m; r = (15/16)(1 - p) for two qubits.
struct DecayFit {
  double A = 0.0;
  double B = 0.0;
  double p = 0.0;
  double r = 0.0;
  bool converged = false;
  double chi2 = 0.0;
  std::array<double, 3> cov_diag{};  // (A, B, p) variance estimates
};

double rb_number(double p);

// Grid-initialized damped Gauss-Newton; a dense p-grid at step 1e-4 backs
// up pathological inputs (flagged via `converged`).
DecayFit fit_decay(const std::vector<DecayPoint>& points);

// r_u / r_c - 1. Saturates to +infinity when r_c <= 0.
double improvement(double r_u, double r_c);

// Overall RB number of a mixed-layer experiment:
// r = fraction * r_cnot + (1 - fraction) * r_single.
double mixture_rb_number(double r_cnot, double r_single, double cnot_fraction);

struct ObjectiveSpec {
  int m = 16;
  int num_circuits = 20;
  long long shots = 8190;
  double cnot_fraction = 0.75;
  bool exact_mode = false;

  void validate() const;
};

// The POST objective: mean infidelity 1 - P over a frozen set of DRB
// circuits at fixed m. All candidate evaluations within one run share the
// same circuits, so the exact-mode objective is a pure function of the
// correction parameters.
class DrbObjective {
 public:
  DrbObjective(const DriftingDeviceModel& model, int cycle, ObjectiveSpec spec,
               std::uint64_t circuit_seed);

  // correction == nullptr evaluates the native gate.
  double evaluate(const CorrectionParams* correction);
  double operator()(const CorrectionParams& params) { return evaluate(&params); }

  const std::vector<DRBCircuit>& circuits() const { return circuits_; }
  int evaluations() const { return evaluations_; }
  const ObjectiveSpec& spec() const { return spec_; }

 private:
  GateSet gateset_;       // cached at the target cycle
  NoiseConfig config_;
  ObjectiveSpec spec_;
  std::uint64_t seed_;
  std::vector<DRBCircuit> circuits_;
  int evaluations_ = 0;
};

struct RBCurve {
  std::vector<DecayPoint> points;
  DecayFit fit;
};

// Full decay curve over an m-grid; circuits at each m are seeded by
// (seed, m, index) so corrected and native runs see identical circuits.
RBCurve run_rb_curve(const DriftingDeviceModel& model, int cycle,
                     const std::vector<int>& m_grid, const ObjectiveSpec& spec,
                     const CorrectionParams* correction,
                     std::uint64_t curve_seed);

}  // namespace post
