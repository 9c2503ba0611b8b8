#pragma once

#include "post/pauli.hpp"

namespace post::gates {

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

//=========================================================================
// Unitaries (qubit 0 = control = leftmost tensor factor)
//=========================================================================

CMat kron(const CMat& a, const CMat& b);

CMat identity2();
CMat pauli_x();
CMat pauli_y();
CMat pauli_z();

CMat rx(double theta);
CMat ry(double theta);
CMat rz(double theta);

// U(theta, phi, lambda) =
//   [[cos(theta/2),              -e^{i lambda} sin(theta/2)],
//    [e^{i phi} sin(theta/2),     e^{i(lambda+phi)} cos(theta/2)]]
CMat unitary_from_params(double theta, double phi, double lambda);

CMat cnot();
// exp(-i angle/2 * Z (x) X): coherent cross-resonance style error.
CMat zx_rotation(double angle);

CMat on_control(const CMat& u);  // u (x) I
CMat on_target(const CMat& u);   // I (x) u

//=========================================================================
// Ideal PTMs and standard channels
//=========================================================================

PauliTransferMatrix ideal_ptm(const CMat& u, int num_qubits);
const PauliTransferMatrix& cnot_ptm();

// rho -> (1-q) rho + q I/d. PTM is diag(1, 1-q, ..., 1-q).
std::vector<CMat> depolarizing_kraus(double q, int num_qubits);
PauliTransferMatrix depolarizing_ptm(double q, int num_qubits);

// Depolarizing acting on one qubit of a two-qubit register.
PauliTransferMatrix depolarizing_on_qubit_ptm(double q, int qubit);

std::vector<CMat> amplitude_damping_kraus(double gamma);

}  // namespace post::gates
