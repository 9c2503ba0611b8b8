#include "post/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace post::gates {

namespace {
constexpr complex_t kI(0.0, 1.0);
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat identity2() { return CMat::Identity(2, 2); }

CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat pauli_y() {
  CMat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMat rx(double theta) {
  CMat m(2, 2);
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, -kI * s, -kI * s, c;
  return m;
}

CMat ry(double theta) {
  CMat m(2, 2);
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, -s, s, c;
  return m;
}

CMat rz(double theta) {
  CMat m(2, 2);
  m << std::exp(-kI * (theta / 2)), 0, 0, std::exp(kI * (theta / 2));
  return m;
}

CMat unitary_from_params(double theta, double phi, double lambda) {
  CMat m(2, 2);
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, -std::exp(kI * lambda) * s, std::exp(kI * phi) * s,
      std::exp(kI * (lambda + phi)) * c;
  return m;
}

CMat cnot() {
  CMat m = CMat::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

CMat zx_rotation(double angle) {
  // Z(x)X is an involution, so exp(-i a/2 ZX) = cos(a/2) I - i sin(a/2) ZX.
  CMat zx = kron(pauli_z(), pauli_x());
  return std::cos(angle / 2) * CMat::Identity(4, 4) -
         kI * std::sin(angle / 2) * zx;
}

CMat on_control(const CMat& u) { return kron(u, identity2()); }
CMat on_target(const CMat& u) { return kron(identity2(), u); }

PauliTransferMatrix ideal_ptm(const CMat& u, int num_qubits) {
  return ptm_from_unitary(u, num_qubits);
}

const PauliTransferMatrix& cnot_ptm() {
  static const PauliTransferMatrix r = ptm_from_unitary(cnot(), 2);
  return r;
}

std::vector<CMat> depolarizing_kraus(double q, int num_qubits) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("depolarizing strength must be in [0,1]");
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  const double d = static_cast<double>(basis.dim());
  const double d2 = d * d;
  // rho -> (1-q) rho + q I/d expands over the unnormalized Pauli group as
  // weight (1 - q (d^2-1)/d^2) on I and q/d^2 on every other element.
  std::vector<CMat> kraus;
  kraus.reserve(basis.size());
  const double norm = std::pow(std::sqrt(2.0), num_qubits);
  for (int i = 0; i < basis.size(); ++i) {
    CMat p = norm * basis.element(i);  // unnormalized Pauli product
    double w = (i == 0) ? 1.0 - q * (d2 - 1.0) / d2 : q / d2;
    kraus.push_back(std::sqrt(w) * p);
  }
  return kraus;
}

PauliTransferMatrix depolarizing_ptm(double q, int num_qubits) {
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  Vec diag = Vec::Constant(basis.size(), 1.0 - q);
  diag(0) = 1.0;
  return {num_qubits, Mat(diag.asDiagonal())};
}

PauliTransferMatrix depolarizing_on_qubit_ptm(double q, int qubit) {
  if (qubit != 0 && qubit != 1)
    throw std::invalid_argument("qubit index must be 0 or 1");
  Mat one = depolarizing_ptm(q, 1).entries;
  Mat id = Mat::Identity(4, 4);
  const Mat& a = (qubit == 0) ? one : id;
  const Mat& b = (qubit == 0) ? id : one;
  Mat out(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block(i * 4, j * 4, 4, 4) = a(i, j) * b;
  return {2, out};
}

std::vector<CMat> amplitude_damping_kraus(double gamma) {
  CMat k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {k0, k1};
}

}  // namespace post::gates
