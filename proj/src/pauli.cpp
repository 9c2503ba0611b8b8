#include "post/pauli.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace post {

namespace {

constexpr complex_t kI(0.0, 1.0);

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<CMat> single_qubit_paulis() {
  CMat id = CMat::Identity(2, 2);
  CMat x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  return {id, x, y, z};
}

void check_supported_qubits(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 2)
    throw std::invalid_argument("pauli basis supports 1 or 2 qubits, got " +
                                std::to_string(num_qubits));
}

// Column-major vectorization, so vec(A rho B) = (B^T kron A) vec(rho).
CVec vec_col(const CMat& m) {
  CVec v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) v(k++) = m(r, c);
  return v;
}

// Rows are vec(P_i)^dag: maps column-stacked superoperators into Pauli
// coordinates, R = V S V^dag.
const CMat& pauli_vec_frame(int num_qubits) {
  static const CMat frames[2] = {
      [] {
        const PauliBasis& b = PauliBasis::get(1);
        CMat v(b.size(), b.size());
        for (int i = 0; i < b.size(); ++i)
          v.row(i) = vec_col(b.element(i)).adjoint();
        return v;
      }(),
      [] {
        const PauliBasis& b = PauliBasis::get(2);
        CMat v(b.size(), b.size());
        for (int i = 0; i < b.size(); ++i)
          v.row(i) = vec_col(b.element(i)).adjoint();
        return v;
      }(),
  };
  check_supported_qubits(num_qubits);
  return frames[num_qubits - 1];
}

// kron(P_i, P_j^T) table backing the PTM <-> Choi conversions.
const std::vector<CMat>& choi_pauli_table(int num_qubits) {
  static const std::vector<CMat> tables[2] = {
      [] {
        const PauliBasis& b = PauliBasis::get(1);
        std::vector<CMat> t;
        t.reserve(16);
        for (int i = 0; i < b.size(); ++i)
          for (int j = 0; j < b.size(); ++j)
            t.push_back(kron(b.element(i), b.element(j).transpose()));
        return t;
      }(),
      [] {
        const PauliBasis& b = PauliBasis::get(2);
        std::vector<CMat> t;
        t.reserve(256);
        for (int i = 0; i < b.size(); ++i)
          for (int j = 0; j < b.size(); ++j)
            t.push_back(kron(b.element(i), b.element(j).transpose()));
        return t;
      }(),
  };
  check_supported_qubits(num_qubits);
  return tables[num_qubits - 1];
}

void check_same_size(int a_qubits, Eigen::Index a_size, int b_qubits,
                     Eigen::Index b_size, const char* what) {
  if (a_qubits != b_qubits || a_size != b_size) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a_qubits << "q/" << a_size
        << " vs " << b_qubits << "q/" << b_size << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

//=========================================================================
// PauliBasis
//=========================================================================

PauliBasis::PauliBasis(int num_qubits) : num_qubits_(num_qubits) {
  check_supported_qubits(num_qubits);
  dim_ = 1 << num_qubits;
  const double norm = 1.0 / std::sqrt(2.0);
  std::vector<CMat> single = single_qubit_paulis();
  if (num_qubits == 1) {
    for (const CMat& p : single) elements_.push_back(norm * p);
  } else {
    for (const CMat& a : single)
      for (const CMat& b : single)
        elements_.push_back(norm * norm * kron(a, b));
  }
}

const PauliBasis& PauliBasis::get(int num_qubits) {
  static const PauliBasis one(1);
  static const PauliBasis two(2);
  check_supported_qubits(num_qubits);
  return num_qubits == 1 ? one : two;
}

//=========================================================================
// DensityVector / MeasurementEffect
//=========================================================================

DensityVector DensityVector::from_matrix(const CMat& rho, int num_qubits) {
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  if (rho.rows() != basis.dim() || rho.cols() != basis.dim())
    throw std::invalid_argument("density matrix has wrong dimension");
  DensityVector out;
  out.num_qubits = num_qubits;
  out.components = Vec(basis.size());
  for (int k = 0; k < basis.size(); ++k)
    out.components(k) = (basis.element(k) * rho).trace().real();
  return out;
}

DensityVector DensityVector::from_pure(const CVec& psi, int num_qubits) {
  CVec n = psi / psi.norm();
  return from_matrix(n * n.adjoint(), num_qubits);
}

CMat DensityVector::to_matrix() const {
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  CMat rho = CMat::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.size(); ++k)
    rho += components(k) * basis.element(k);
  return rho;
}

MeasurementEffect MeasurementEffect::from_matrix(const CMat& effect,
                                                 int num_qubits,
                                                 std::string label) {
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  MeasurementEffect out;
  out.label = std::move(label);
  out.num_qubits = num_qubits;
  out.components = Vec(basis.size());
  for (int k = 0; k < basis.size(); ++k)
    out.components(k) = (basis.element(k) * effect).trace().real();
  return out;
}

CMat MeasurementEffect::to_matrix() const {
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  CMat e = CMat::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.size(); ++k)
    e += components(k) * basis.element(k);
  return e;
}

PauliTransferMatrix PauliTransferMatrix::identity(int num_qubits) {
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  return {num_qubits, Mat::Identity(basis.size(), basis.size())};
}

double ChoiMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(entries);
  return es.eigenvalues().minCoeff();
}

//=========================================================================
// Conversions
//=========================================================================

PauliTransferMatrix ptm_from_unitary(const CMat& u, int num_qubits) {
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  if (u.rows() != basis.dim() || u.cols() != basis.dim())
    throw std::invalid_argument("unitary has wrong dimension");
  double dist =
      (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (dist > 1e-10) {
    std::ostringstream msg;
    msg << "matrix is not unitary: ||U^dag U - I||_max = " << dist;
    throw std::invalid_argument(msg.str());
  }
  return ptm_from_kraus({u}, num_qubits);
}

PauliTransferMatrix ptm_from_kraus(const std::vector<CMat>& kraus,
                                   int num_qubits) {
  if (kraus.empty()) throw std::invalid_argument("empty Kraus list");
  const PauliBasis& basis = PauliBasis::get(num_qubits);
  const int d = basis.dim();
  CMat total = CMat::Zero(d, d);
  for (const CMat& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("Kraus operator has wrong dimension");
    total += k.adjoint() * k;
  }
  // Trace non-increasing is allowed; eigenvalues of I - sum K^dag K >= -tol.
  Eigen::SelfAdjointEigenSolver<CMat> es(CMat::Identity(d, d) - total);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::invalid_argument("Kraus set is trace increasing");

  CMat superop = CMat::Zero(d * d, d * d);
  for (const CMat& k : kraus) superop += kron(k.conjugate(), k);
  const CMat& frame = pauli_vec_frame(num_qubits);
  CMat r = frame * superop * frame.adjoint();
  if (r.imag().cwiseAbs().maxCoeff() > 1e-11)
    throw std::runtime_error("PTM has unexpected imaginary part");
  return {num_qubits, r.real()};
}

ChoiMatrix choi_from_ptm(const PauliTransferMatrix& r) {
  const std::vector<CMat>& table = choi_pauli_table(r.num_qubits);
  const int n = r.size();
  const double d = static_cast<double>(r.dim());
  CMat choi = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      choi += (r.entries(i, j) / d) * table[i * n + j];
  return {r.num_qubits, choi};
}

PauliTransferMatrix ptm_from_choi(const ChoiMatrix& c) {
  const std::vector<CMat>& table = choi_pauli_table(c.num_qubits);
  const int n = static_cast<int>(std::sqrt(static_cast<double>(table.size())) + 0.5);
  const double d = std::sqrt(static_cast<double>(n));
  Mat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) = d * (c.entries * table[i * n + j]).trace().real();
  return {c.num_qubits, r};
}

//=========================================================================
// Channel algebra and metrics
//=========================================================================

PauliTransferMatrix compose(const PauliTransferMatrix& second,
                            const PauliTransferMatrix& first) {
  check_same_size(second.num_qubits, second.size(), first.num_qubits,
                  first.size(), "compose");
  return {second.num_qubits, second.entries * first.entries};
}

DensityVector apply(const PauliTransferMatrix& r, const DensityVector& rho) {
  check_same_size(r.num_qubits, r.size(), rho.num_qubits,
                  rho.components.size(), "apply");
  return {rho.num_qubits, r.entries * rho.components};
}

double probability(const MeasurementEffect& effect,
                   const PauliTransferMatrix& g, const DensityVector& rho) {
  check_same_size(effect.num_qubits, effect.components.size(), g.num_qubits,
                  g.size(), "probability");
  return effect.components.dot(g.entries * rho.components);
}

double frobenius_distance(const PauliTransferMatrix& a,
                          const PauliTransferMatrix& b) {
  check_same_size(a.num_qubits, a.size(), b.num_qubits, b.size(),
                  "frobenius_distance");
  return (a.entries - b.entries).norm();
}

double average_gate_infidelity(const PauliTransferMatrix& r,
                               const PauliTransferMatrix& target) {
  check_same_size(r.num_qubits, r.size(), target.num_qubits, target.size(),
                  "average_gate_infidelity");
  const double d = static_cast<double>(r.dim());
  double tr = (target.entries.transpose() * r.entries).trace();
  return 1.0 - (tr + d) / (d * d + d);
}

double tp_violation(const PauliTransferMatrix& r) {
  Vec row = r.entries.row(0);
  row(0) -= 1.0;
  return row.cwiseAbs().maxCoeff();
}

bool is_trace_preserving(const PauliTransferMatrix& r, double tol) {
  return tp_violation(r) <= tol;
}

bool is_cptp(const PauliTransferMatrix& r, double tol) {
  return is_trace_preserving(r, tol) &&
         choi_from_ptm(r).min_eigenvalue() >= -tol;
}

}  // namespace post
