#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "post/device.hpp"
#include "post/gateset.hpp"

namespace post {

// Short sequences generating informationally complete preparations and
// measurements. Index 0 must be the empty sequence on both sides.
struct FiducialSet {
  std::vector<std::vector<std::string>> prep;
  std::vector<std::vector<std::string>> meas;
};

// Gate compositions repeated L times to amplify errors.
struct GermSet {
  std::vector<std::vector<std::string>> germs;
  int max_length = 8;
};

// Fixed catalogs: per qubit {empty, X(pi/2), Y(pi/2), X(pi/2)^2} tensored
// across both qubits (16 fiducials per side), and the six gateset elements
// as singleton germs plus a few short compositions.
FiducialSet default_fiducials();
GermSet default_germs();

// (prep fiducial, germ, meas fiducial, repetition) indices of one record.
// germ == -1 denotes the empty germ used for the Gram matrix.
struct SequenceKey {
  int prep = 0;
  int germ = -1;
  int meas = 0;
  int length = 0;

  friend bool operator==(const SequenceKey&, const SequenceKey&) = default;
};

struct SequenceEntry {
  SequenceKey key;
  std::vector<std::string> circuit;
};

// One entry per (i, j, k, L) over the full fiducial product. L = 0 yields
// the bare F_i F_k circuit. Entries are deterministic and duplicate circuit
// strings are collected only once downstream.
std::vector<SequenceEntry> generate_sequences(const FiducialSet& fiducials,
                                              const GermSet& germs,
                                              const std::vector<int>& lengths);

// Desk-scale experiment catalog: the Gram block (empty germ), every
// singleton germ over the full fiducial product at L = 1, and a reduced
// diagonal fiducial grid for the remaining (germ, L) diagnostics. With
// full_product set, every germ and length uses the full product.
std::vector<SequenceEntry> build_gst_catalog(const FiducialSet& fiducials,
                                             const GermSet& germs,
                                             const std::vector<int>& lengths,
                                             bool full_product = false);

int count_unique_circuits(const std::vector<SequenceEntry>& entries);

struct GSTRecord {
  SequenceKey key;
  std::vector<std::string> circuit;
  std::array<double, 4> counts{};  // outcome frequencies when shots == 0
  long long shots = 0;             // 0 marks an exact-probability record
};

struct GSTDataset {
  int num_qubits = 2;
  FiducialSet fiducials;
  GermSet germs;
  std::vector<GSTRecord> records;

  std::array<double, 4> frequencies(const GSTRecord& r) const;
  const GSTRecord* find(const SequenceKey& key) const;
};

// Runs every cataloged circuit on the device; shots == 0 stores exact
// outcome probabilities. Identical circuit strings are simulated once and
// shared across keys.
GSTDataset collect(const DriftingDeviceModel& model, int cycle,
                   const FiducialSet& fiducials, const GermSet& germs,
                   const std::vector<SequenceEntry>& entries, long long shots);

struct ProjectionResult {
  PauliTransferMatrix ptm;
  bool converged = false;
  int iterations = 0;
  double cp_violation = 0.0;
  double tp_violation = 0.0;
};

// Alternating projection in Choi space: clip negative eigenvalues,
// renormalize the trace, re-impose the TP row; stops when both violations
// are below tol or after max_iterations (flagged, best iterate returned).
ProjectionResult project_cptp(const PauliTransferMatrix& r, double tol = 1e-8,
                              int max_iterations = 200);

struct LgstResult {
  GateSet raw;        // linear inversion in the target frame
  GateSet projected;  // CPTP-projected gates, valid SPAM
  double gram_condition = 0.0;
  bool projection_converged = true;
};

// Linear-inversion GST fixed to the target gateset's frame. Requires the
// Gram block and every gate's singleton germ at L = 1.
LgstResult lgst_estimate(const GSTDataset& dataset, const GateSet& target);

struct PredictionResiduals {
  double rms = 0.0;
  double max = 0.0;
  int num_records = 0;
};

// Gauge-invariant estimate quality: forward-simulated outcome probabilities
// against the dataset's observed frequencies.
PredictionResiduals prediction_residuals(const GateSet& estimate,
                                         const GSTDataset& dataset);

struct GermDecayRow {
  int germ = 0;
  int length = 0;
  double mean_observed_peak = 0.0;  // mean max-outcome frequency
  double rms_residual = 0.0;        // prediction residual at this (germ, L)
};

// Diagnostic consumer of the long-germ records; they take no part in the
// linear inversion.
std::vector<GermDecayRow> germ_decay_diagnostic(const GateSet& estimate,
                                                const GSTDataset& dataset);

}  // namespace post
