#pragma once

#include <string>
#include <vector>

#include "post/pauli.hpp"

namespace post {

enum class CorrectionMode {
  control_only,  // 6 angles: (U1 (x) I) . G . (U2 (x) I)
  both_qubits,   // 12 angles: (U1 (x) U2) . G . (U3 (x) U4)
};

int param_count(CorrectionMode mode);
std::string to_string(CorrectionMode mode);
CorrectionMode correction_mode_from_string(const std::string& s);

// Bookend-unitary angles, ordered (theta, phi, lambda) per unitary with the
// post-CNOT unitaries first, matching the matrix order of the corrected
// product. Angles are unconstrained while optimizing; canonicalize to
// (-pi, pi] for reporting.
struct CorrectionParams {
  CorrectionMode mode = CorrectionMode::control_only;
  std::vector<double> angles;

  static CorrectionParams zero(CorrectionMode mode);
  static CorrectionParams from_angles(CorrectionMode mode,
                                      std::vector<double> angles);
  CorrectionParams canonicalized() const;
  void validate() const;
};

// Applies ideal corrective unitaries around a two-qubit channel. In matrix
// order U1/U2 multiply from the left (act last in time) and the trailing
// pair acts first.
PauliTransferMatrix corrected_ptm(const PauliTransferMatrix& g_bar,
                                  const CorrectionParams& params);

// The corrected gate treated as three perfect gates: corrections around an
// ideal CNOT. Always a unitary channel.
PauliTransferMatrix corrective_channel(const CorrectionParams& params);

}  // namespace post
