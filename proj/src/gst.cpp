#include "post/gst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace post {

namespace {

std::vector<std::string> repeat_germ(const std::vector<std::string>& germ,
                                     int times) {
  std::vector<std::string> out;
  out.reserve(germ.size() * times);
  for (int t = 0; t < times; ++t)
    out.insert(out.end(), germ.begin(), germ.end());
  return out;
}

std::vector<std::string> assemble(const std::vector<std::string>& prep,
                                  const std::vector<std::string>& germ_part,
                                  const std::vector<std::string>& meas) {
  std::vector<std::string> circuit = prep;
  circuit.insert(circuit.end(), germ_part.begin(), germ_part.end());
  circuit.insert(circuit.end(), meas.begin(), meas.end());
  return circuit;
}

struct KeyHash {
  size_t operator()(const SequenceKey& k) const {
    return std::hash<long long>()(((long long)(k.prep + 1) << 40) ^
                                  ((long long)(k.germ + 1) << 24) ^
                                  ((long long)(k.meas + 1) << 8) ^ k.length);
  }
};

using RecordIndex = std::unordered_map<SequenceKey, int, KeyHash>;

RecordIndex build_index(const GSTDataset& ds) {
  RecordIndex idx;
  for (int i = 0; i < static_cast<int>(ds.records.size()); ++i)
    idx.emplace(ds.records[i].key, i);
  return idx;
}

DensityVector project_state(const DensityVector& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.to_matrix());
  Vec vals = es.eigenvalues().cwiseMax(0.0);
  double total = vals.sum();
  if (total <= 0.0) throw std::runtime_error("degenerate state estimate");
  vals /= total;
  CMat fixed = es.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<complex_t>() *
               es.eigenvectors().adjoint();
  return DensityVector::from_matrix(fixed, rho.num_qubits);
}

std::vector<MeasurementEffect> project_effects(
    const std::vector<MeasurementEffect>& effects) {
  std::vector<CMat> mats;
  mats.reserve(effects.size());
  for (const MeasurementEffect& e : effects) mats.push_back(e.to_matrix());
  const int d = static_cast<int>(mats.front().rows());
  // Alternate eigenvalue clipping with completeness restoration.
  for (int round = 0; round < 8; ++round) {
    for (CMat& m : mats) {
      Eigen::SelfAdjointEigenSolver<CMat> es(m);
      Vec vals = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
      m = es.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<complex_t>() *
          es.eigenvectors().adjoint();
    }
    CMat deficit = CMat::Identity(d, d);
    for (const CMat& m : mats) deficit -= m;
    for (CMat& m : mats) m += deficit / static_cast<double>(mats.size());
  }
  std::vector<MeasurementEffect> out;
  for (size_t b = 0; b < mats.size(); ++b)
    out.push_back(MeasurementEffect::from_matrix(
        mats[b], effects[b].num_qubits, effects[b].label));
  return out;
}

}  // namespace

//=========================================================================
// Catalogs
//=========================================================================

FiducialSet default_fiducials() {
  using std::vector;
  const vector<vector<std::string>> q0 = {
      {}, {names::xi}, {names::yi}, {names::xi, names::xi}};
  const vector<vector<std::string>> q1 = {
      {}, {names::ix}, {names::iy}, {names::ix, names::ix}};
  FiducialSet out;
  for (const auto& a : q0)
    for (const auto& b : q1) {
      vector<std::string> f = a;
      f.insert(f.end(), b.begin(), b.end());
      out.prep.push_back(f);
    }
  out.meas = out.prep;
  return out;
}

GermSet default_germs() {
  GermSet g;
  for (const std::string& name : gateset_names()) g.germs.push_back({name});
  g.germs.push_back({names::cx, names::xi});
  g.germs.push_back({names::cx, names::iy});
  g.germs.push_back({names::xi, names::ix});
  g.germs.push_back({names::yi, names::cx, names::ix});
  g.max_length = 8;
  return g;
}

std::vector<SequenceEntry> generate_sequences(const FiducialSet& fiducials,
                                              const GermSet& germs,
                                              const std::vector<int>& lengths) {
  if (lengths.empty()) throw std::invalid_argument("no germ lengths given");
  if (!std::is_sorted(lengths.begin(), lengths.end()))
    throw std::invalid_argument("germ lengths must be ascending");
  std::vector<SequenceEntry> out;
  for (int j = 0; j < static_cast<int>(germs.germs.size()); ++j) {
    for (int L : lengths) {
      std::vector<std::string> germ_part = repeat_germ(germs.germs[j], L);
      for (int i = 0; i < static_cast<int>(fiducials.prep.size()); ++i)
        for (int k = 0; k < static_cast<int>(fiducials.meas.size()); ++k)
          out.push_back({{i, j, k, L},
                         assemble(fiducials.prep[i], germ_part,
                                  fiducials.meas[k])});
    }
  }
  return out;
}

std::vector<SequenceEntry> build_gst_catalog(const FiducialSet& fiducials,
                                             const GermSet& germs,
                                             const std::vector<int>& lengths,
                                             bool full_product) {
  std::vector<SequenceEntry> out;
  const int n_prep = static_cast<int>(fiducials.prep.size());
  const int n_meas = static_cast<int>(fiducials.meas.size());
  // Gram block: bare F_i F_k circuits.
  for (int i = 0; i < n_prep; ++i)
    for (int k = 0; k < n_meas; ++k)
      out.push_back(
          {{i, -1, k, 0},
           assemble(fiducials.prep[i], {}, fiducials.meas[k])});

  // Fiducial pairs kept for the long-germ diagnostics.
  const std::vector<int> diag = {0, 5, 10, 15};
  for (int j = 0; j < static_cast<int>(germs.germs.size()); ++j) {
    const bool singleton = germs.germs[j].size() == 1;
    for (int L : lengths) {
      if (L < 1) continue;
      std::vector<std::string> germ_part = repeat_germ(germs.germs[j], L);
      if (full_product || (singleton && L == 1)) {
        for (int i = 0; i < n_prep; ++i)
          for (int k = 0; k < n_meas; ++k)
            out.push_back({{i, j, k, L},
                           assemble(fiducials.prep[i], germ_part,
                                    fiducials.meas[k])});
      } else {
        for (int p : diag) {
          if (p >= n_prep || p >= n_meas) continue;
          out.push_back({{p, j, p, L},
                         assemble(fiducials.prep[p], germ_part,
                                  fiducials.meas[p])});
        }
      }
    }
  }
  return out;
}

int count_unique_circuits(const std::vector<SequenceEntry>& entries) {
  std::unordered_map<std::string, int> seen;
  for (const SequenceEntry& e : entries) seen.emplace(circuit_to_string(e.circuit), 1);
  return static_cast<int>(seen.size());
}

//=========================================================================
// Dataset
//=========================================================================

std::array<double, 4> GSTDataset::frequencies(const GSTRecord& r) const {
  if (r.shots == 0) return r.counts;
  std::array<double, 4> f{};
  for (int b = 0; b < 4; ++b)
    f[b] = r.counts[b] / static_cast<double>(r.shots);
  return f;
}

const GSTRecord* GSTDataset::find(const SequenceKey& key) const {
  for (const GSTRecord& r : records)
    if (r.key == key) return &r;
  return nullptr;
}

GSTDataset collect(const DriftingDeviceModel& model, int cycle,
                   const FiducialSet& fiducials, const GermSet& germs,
                   const std::vector<SequenceEntry>& entries,
                   long long shots) {
  if (entries.empty()) throw std::invalid_argument("empty circuit catalog");
  GSTDataset ds;
  ds.fiducials = fiducials;
  ds.germs = germs;
  const GateSet gs = model.gateset_at_cycle(cycle);

  // Simulate each distinct circuit once; all keys aliasing the same string
  // share its outcome data.
  std::unordered_map<std::string, std::array<double, 4>> by_circuit;
  for (const SequenceEntry& e : entries) {
    const std::string cs = circuit_to_string(e.circuit);
    auto it = by_circuit.find(cs);
    if (it == by_circuit.end()) {
      std::array<double, 4> data{};
      if (shots == 0) {
        std::vector<double> probs = circuit_probabilities(gs, e.circuit);
        for (int b = 0; b < 4; ++b) data[b] = probs[b];
      } else {
        std::vector<long long> counts =
            model.sample_counts(gs, cycle, e.circuit, shots);
        for (int b = 0; b < 4; ++b) data[b] = static_cast<double>(counts[b]);
      }
      it = by_circuit.emplace(cs, data).first;
    }
    ds.records.push_back({e.key, e.circuit, it->second, shots});
  }
  return ds;
}

//=========================================================================
// CPTP projection
//=========================================================================

ProjectionResult project_cptp(const PauliTransferMatrix& r, double tol,
                              int max_iterations) {
  PauliTransferMatrix current = r;
  ProjectionResult best{r, false, 0, 0.0, 0.0};
  double best_violation = std::numeric_limits<double>::infinity();

  for (int it = 0; it <= max_iterations; ++it) {
    ChoiMatrix choi = choi_from_ptm(current);
    Eigen::SelfAdjointEigenSolver<CMat> es(choi.entries);
    const double cp_v = std::max(0.0, -es.eigenvalues().minCoeff());
    const double tp_v = tp_violation(current);
    const double total = std::max(cp_v, tp_v);
    if (total < best_violation) {
      best_violation = total;
      best = {current, false, it, cp_v, tp_v};
    }
    if (cp_v < tol && tp_v < tol) {
      best.converged = true;
      return best;
    }
    if (it == max_iterations) break;

    // CP step: clip the Choi spectrum (Euclidean projection onto the PSD
    // cone). The TP step below renormalizes the trace, since tr(Choi) is
    // exactly the first PTM entry.
    Vec vals = es.eigenvalues().cwiseMax(0.0);
    if (vals.sum() <= 0.0)
      throw std::runtime_error("projection collapsed to zero");
    choi.entries = es.eigenvectors() *
                   vals.asDiagonal().toDenseMatrix().cast<complex_t>() *
                   es.eigenvectors().adjoint();
    current = ptm_from_choi(choi);
    // TP step: pin the first row.
    current.entries.row(0).setZero();
    current.entries(0, 0) = 1.0;
  }
  return best;
}

//=========================================================================
// Linear-inversion estimate
//=========================================================================

LgstResult lgst_estimate(const GSTDataset& dataset, const GateSet& target) {
  if (dataset.records.empty()) throw std::invalid_argument("empty dataset");
  const FiducialSet& fid = dataset.fiducials;
  if (fid.prep.empty() || fid.meas.empty())
    throw std::invalid_argument("dataset carries no fiducial catalog");
  if (!fid.prep[0].empty() || !fid.meas[0].empty())
    throw std::invalid_argument("fiducial 0 must be the empty sequence");

  const int n_prep = static_cast<int>(fid.prep.size());
  const int n_meas = static_cast<int>(fid.meas.size());
  const int n_eff = static_cast<int>(target.effects.size());
  const RecordIndex index = build_index(dataset);

  auto record_freqs = [&](const SequenceKey& key) {
    auto it = index.find(key);
    if (it == index.end()) {
      std::ostringstream msg;
      msg << "dataset lacks record (prep=" << key.prep << ", germ=" << key.germ
          << ", meas=" << key.meas << ", L=" << key.length << ")";
      throw std::invalid_argument(msg.str());
    }
    return dataset.frequencies(dataset.records[it->second]);
  };

  // Gram matrix rows are (meas fiducial, outcome), columns prep fiducials.
  Mat p_gram(n_meas * n_eff, n_prep);
  Vec gram_noise_var = Vec::Zero(n_prep);
  for (int i = 0; i < n_prep; ++i)
    for (int k = 0; k < n_meas; ++k) {
      auto it = index.find({i, -1, k, 0});
      if (it == index.end())
        throw std::invalid_argument("dataset lacks the Gram block");
      const GSTRecord& rec = dataset.records[it->second];
      std::array<double, 4> f = dataset.frequencies(rec);
      for (int b = 0; b < n_eff; ++b) {
        p_gram(k * n_eff + b, i) = f[b];
        if (rec.shots > 0)
          gram_noise_var(i) +=
              f[b] * (1.0 - f[b]) / static_cast<double>(rec.shots);
      }
    }

  Eigen::JacobiSVD<Mat> svd(p_gram,
                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  const double cond =
      sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                              : std::numeric_limits<double>::infinity();
  if (!(cond < 1e6))
    throw std::runtime_error(
        "informationally incomplete fiducials: Gram condition number " +
        std::to_string(cond));

  // Normal equations with the sampling-noise covariance subtracted from the
  // diagonal: E[P^T P] = P_true^T P_true + diag(noise variances), so the
  // subtraction removes the leading finite-shot inversion bias. Columns are
  // independent circuits, so the correction is diagonal, and it vanishes on
  // exact-probability data.
  Mat gtg = p_gram.transpose() * p_gram;
  gtg -= Mat(gram_noise_var.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Mat> gtg_es(gtg);
  Mat solve_frame;  // maps P_gate blocks into the data frame
  if (gtg_es.eigenvalues().minCoeff() >
      1e-10 * gtg_es.eigenvalues().maxCoeff()) {
    solve_frame = gtg.ldlt().solve(p_gram.transpose());
  } else {
    // Over-subtraction guard: fall back to the plain pseudo-inverse.
    solve_frame = svd.matrixV() * sv.cwiseInverse().asDiagonal() *
                  svd.matrixU().transpose();
  }

  // Target-frame matrices: columns F_i |rho>>, rows <<E_b| F_k.
  Mat b_hat(16, n_prep);
  for (int i = 0; i < n_prep; ++i)
    b_hat.col(i) = propagate(target, fid.prep[i]).components;
  if (n_prep != 16)
    throw std::runtime_error("prep fiducial count must equal d^2 = 16");
  Eigen::FullPivLU<Mat> b_lu(b_hat);
  if (!b_lu.isInvertible())
    throw std::runtime_error("target fiducial frame is singular");
  Mat b_inv = b_lu.inverse();

  LgstResult result;
  result.gram_condition = cond;
  GateSet raw;
  raw.num_qubits = target.num_qubits;

  // Locate each gate's singleton germ.
  for (const auto& [name, unused] : target.gates) {
    (void)unused;
    int germ_idx = -1;
    for (int j = 0; j < static_cast<int>(dataset.germs.germs.size()); ++j)
      if (dataset.germs.germs[j] == std::vector<std::string>{name})
        germ_idx = j;
    if (germ_idx < 0)
      throw std::invalid_argument("no singleton germ for gate " + name);

    Mat p_gate(n_meas * n_eff, n_prep);
    for (int i = 0; i < n_prep; ++i)
      for (int k = 0; k < n_meas; ++k) {
        std::array<double, 4> f = record_freqs({i, germ_idx, k, 1});
        for (int b = 0; b < n_eff; ++b) p_gate(k * n_eff + b, i) = f[b];
      }
    Mat x_gate = solve_frame * p_gate;   // gate in the data frame
    raw.gates[name] = {target.num_qubits, b_hat * x_gate * b_inv};
  }

  raw.rho = {target.num_qubits, b_hat.col(0)};
  for (int b = 0; b < n_eff; ++b) {
    MeasurementEffect e;
    e.label = target.effects[b].label;
    e.num_qubits = target.num_qubits;
    e.components = (p_gram.row(b) * b_inv).transpose();
    raw.effects.push_back(e);
  }

  result.raw = raw;
  result.projected = raw;
  result.projection_converged = true;
  for (auto& [name, gate] : result.projected.gates) {
    ProjectionResult proj = project_cptp(gate);
    gate = proj.ptm;
    result.projection_converged &= proj.converged;
  }
  result.projected.rho = project_state(raw.rho);
  result.projected.effects = project_effects(raw.effects);
  return result;
}

//=========================================================================
// Diagnostics
//=========================================================================

namespace {

std::array<double, 4> predict(const GateSet& estimate,
                              const std::vector<std::string>& circuit) {
  DensityVector state = propagate(estimate, circuit);
  std::array<double, 4> p{};
  for (int b = 0; b < 4; ++b)
    p[b] = estimate.effects[b].components.dot(state.components);
  return p;
}

}  // namespace

PredictionResiduals prediction_residuals(const GateSet& estimate,
                                         const GSTDataset& dataset) {
  PredictionResiduals out;
  double sum_sq = 0.0;
  long long n = 0;
  for (const GSTRecord& r : dataset.records) {
    std::array<double, 4> pred = predict(estimate, r.circuit);
    std::array<double, 4> obs = dataset.frequencies(r);
    for (int b = 0; b < 4; ++b) {
      double d = pred[b] - obs[b];
      sum_sq += d * d;
      out.max = std::max(out.max, std::abs(d));
      ++n;
    }
    ++out.num_records;
  }
  out.rms = n > 0 ? std::sqrt(sum_sq / static_cast<double>(n)) : 0.0;
  return out;
}

std::vector<GermDecayRow> germ_decay_diagnostic(const GateSet& estimate,
                                                const GSTDataset& dataset) {
  std::map<std::pair<int, int>, std::vector<const GSTRecord*>> groups;
  for (const GSTRecord& r : dataset.records)
    if (r.key.germ >= 0 && r.key.length >= 1)
      groups[{r.key.germ, r.key.length}].push_back(&r);

  std::vector<GermDecayRow> rows;
  for (const auto& [gl, recs] : groups) {
    GermDecayRow row;
    row.germ = gl.first;
    row.length = gl.second;
    double sum_peak = 0.0, sum_sq = 0.0;
    long long n = 0;
    for (const GSTRecord* r : recs) {
      std::array<double, 4> obs = dataset.frequencies(*r);
      std::array<double, 4> pred = predict(estimate, r->circuit);
      sum_peak += *std::max_element(obs.begin(), obs.end());
      for (int b = 0; b < 4; ++b) {
        double d = pred[b] - obs[b];
        sum_sq += d * d;
        ++n;
      }
    }
    row.mean_observed_peak = sum_peak / static_cast<double>(recs.size());
    row.rms_residual = std::sqrt(sum_sq / static_cast<double>(n));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace post
