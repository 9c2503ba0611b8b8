#include "post/correction.hpp"

#include <stdexcept>

#include "post/gates.hpp"

namespace post {

int param_count(CorrectionMode mode) {
  return mode == CorrectionMode::control_only ? 6 : 12;
}

std::string to_string(CorrectionMode mode) {
  return mode == CorrectionMode::control_only ? "control-only" : "both";
}

CorrectionMode correction_mode_from_string(const std::string& s) {
  if (s == "control-only" || s == "control_only")
    return CorrectionMode::control_only;
  if (s == "both" || s == "both-qubits" || s == "both_qubits")
    return CorrectionMode::both_qubits;
  throw std::invalid_argument("unknown correction mode: " + s);
}

CorrectionParams CorrectionParams::zero(CorrectionMode mode) {
  return {mode, std::vector<double>(param_count(mode), 0.0)};
}

CorrectionParams CorrectionParams::from_angles(CorrectionMode mode,
                                               std::vector<double> angles) {
  CorrectionParams p{mode, std::move(angles)};
  p.validate();
  return p;
}

CorrectionParams CorrectionParams::canonicalized() const {
  CorrectionParams out = *this;
  for (double& a : out.angles) a = gates::wrap_angle(a);
  return out;
}

void CorrectionParams::validate() const {
  if (static_cast<int>(angles.size()) != param_count(mode))
    throw std::invalid_argument(
        "correction parameter count does not match mode: expected " +
        std::to_string(param_count(mode)) + ", got " +
        std::to_string(angles.size()));
}

PauliTransferMatrix corrected_ptm(const PauliTransferMatrix& g_bar,
                                  const CorrectionParams& params) {
  using namespace gates;
  params.validate();
  if (g_bar.num_qubits != 2)
    throw std::invalid_argument("corrected_ptm requires a two-qubit channel");
  const std::vector<double>& a = params.angles;
  CMat post_u, pre_u;
  if (params.mode == CorrectionMode::control_only) {
    post_u = on_control(unitary_from_params(a[0], a[1], a[2]));
    pre_u = on_control(unitary_from_params(a[3], a[4], a[5]));
  } else {
    post_u = kron(unitary_from_params(a[0], a[1], a[2]),
                  unitary_from_params(a[3], a[4], a[5]));
    pre_u = kron(unitary_from_params(a[6], a[7], a[8]),
                 unitary_from_params(a[9], a[10], a[11]));
  }
  PauliTransferMatrix r = compose(g_bar, ptm_from_unitary(pre_u, 2));
  return compose(ptm_from_unitary(post_u, 2), r);
}

PauliTransferMatrix corrective_channel(const CorrectionParams& params) {
  return corrected_ptm(gates::cnot_ptm(), params);
}

}  // namespace post
