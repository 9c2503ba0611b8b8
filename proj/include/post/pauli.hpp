#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace post {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using complex_t = std::complex<double>;

// Structural tolerances for 16x16-scale double arithmetic.
inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kCpEigenvalueFloor = -1e-10;

//=========================================================================
// Pauli basis
//=========================================================================

// Ordered, normalized n-qubit Pauli product basis (n <= 2).
//
// Elements are tensor products of {I, X, Y, Z}/sqrt(2), ordered
// lexicographically per qubit with qubit 0 as the leftmost tensor factor:
// II, IX, IY, IZ, XI, XX, ... for two qubits. Element 0 is I^{(x)n}/sqrt(d),
// and Tr(P_i P_j) = delta_ij.
class PauliBasis {
 public:
  explicit PauliBasis(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return dim_; }                          // d = 2^n
  int size() const { return static_cast<int>(elements_.size()); }  // d^2
  const CMat& element(int i) const { return elements_.at(i); }

  // Shared immutable instances for n = 1, 2.
  static const PauliBasis& get(int num_qubits);

 private:
  int num_qubits_;
  int dim_;
  std::vector<CMat> elements_;
};

//=========================================================================
// Domain types
//=========================================================================

// State in Hilbert-Schmidt coordinates: component k = Tr(P_k rho).
// Component 0 of a unit-trace state equals 1/sqrt(d); the Euclidean norm
// is bounded by 1, with equality iff the state is pure.
struct DensityVector {
  int num_qubits = 1;
  Vec components;

  int dim() const { return 1 << num_qubits; }
  double trace_component() const { return components(0); }
  double purity() const { return components.squaredNorm(); }

  static DensityVector from_matrix(const CMat& rho, int num_qubits);
  static DensityVector from_pure(const CVec& psi, int num_qubits);
  CMat to_matrix() const;
};

// Dual vector of a POVM effect: component k = Tr(P_k E).
struct MeasurementEffect {
  std::string label;
  int num_qubits = 1;
  Vec components;

  static MeasurementEffect from_matrix(const CMat& effect, int num_qubits,
                                       std::string label);
  CMat to_matrix() const;
};

// Real d^2 x d^2 superoperator in the normalized Pauli basis.
// Trace preservation shows up as first row (1, 0, ..., 0); complete
// positivity as a positive semidefinite Choi matrix.
struct PauliTransferMatrix {
  int num_qubits = 1;
  Mat entries;

  int dim() const { return 1 << num_qubits; }
  int size() const { return static_cast<int>(entries.rows()); }

  static PauliTransferMatrix identity(int num_qubits);
};

// Choi state of a channel, trace-1 normalization. PSD iff the channel is CP.
struct ChoiMatrix {
  int num_qubits = 1;
  CMat entries;

  double min_eigenvalue() const;
  double trace_real() const { return entries.trace().real(); }
};

//=========================================================================
// Conversions
//=========================================================================

// R_ij = Tr(P_i U P_j U^dag). Rejects non-unitary input; the exception
// message carries ||U^dag U - I||_max as a diagnostic.
PauliTransferMatrix ptm_from_unitary(const CMat& u, int num_qubits);

// R_ij = Tr(P_i sum_k K_k P_j K_k^dag). The Kraus set may be trace
// non-increasing; sum K^dag K <= I is enforced within tolerance.
PauliTransferMatrix ptm_from_kraus(const std::vector<CMat>& kraus,
                                   int num_qubits);

ChoiMatrix choi_from_ptm(const PauliTransferMatrix& r);
PauliTransferMatrix ptm_from_choi(const ChoiMatrix& c);

//=========================================================================
// Channel algebra and metrics
//=========================================================================

// Matrix product second * first; `first` acts first in time.
PauliTransferMatrix compose(const PauliTransferMatrix& second,
                            const PauliTransferMatrix& first);

DensityVector apply(const PauliTransferMatrix& r, const DensityVector& rho);

// Raw <<E| R |rho>>. May fall epsilon outside [0,1] for noisy estimates;
// clamp only when reporting.
double probability(const MeasurementEffect& effect,
                   const PauliTransferMatrix& g, const DensityVector& rho);

inline double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

double frobenius_distance(const PauliTransferMatrix& a,
                          const PauliTransferMatrix& b);

// 1 - (Tr(target^T R) + d) / (d^2 + d) for a unitary target PTM.
double average_gate_infidelity(const PauliTransferMatrix& r,
                               const PauliTransferMatrix& target);

bool is_trace_preserving(const PauliTransferMatrix& r,
                         double tol = kStructuralTol);
double tp_violation(const PauliTransferMatrix& r);
bool is_cptp(const PauliTransferMatrix& r, double tol = kStructuralTol);

}  // namespace post
