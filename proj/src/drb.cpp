#include "post/drb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "post/gates.hpp"
#include "post/rng.hpp"

namespace post {

namespace {

constexpr std::uint64_t kDrbCircuitStream = 0x64726263'69726331ULL;
constexpr std::uint64_t kDrbShotStream = 0x64726273'686f7431ULL;
constexpr std::uint64_t kCurveCircuitStream = 0x72626376'63697263ULL;
constexpr std::uint64_t kCurveShotStream = 0x72626376'73686f74ULL;

// Product-stabilizer preparations reachable with native pi/2 pulses:
// |0>, |1>, |+>, |->, |+i>, |-i> per qubit.
const std::vector<std::vector<int>>& stabilizer_preps() {
  // 0 = X(pi/2) pulse, 1 = Y(pi/2) pulse per entry.
  static const std::vector<std::vector<int>> seqs = {
      {}, {0, 0}, {1}, {1, 1, 1}, {0, 0, 0}, {0}};
  return seqs;
}

std::string pulse_name(int kind, int qubit) {
  if (kind == 0) return qubit == 0 ? names::xi : names::ix;
  return qubit == 0 ? names::yi : names::iy;
}

// The corrected CNOT as the device executes it: noisy corrective unitaries
// around the native gate.
PauliTransferMatrix corrected_cx_execution(const GateSet& gs,
                                           const NoiseConfig& cfg,
                                           const CorrectionParams& params) {
  params.validate();
  const std::vector<double>& a = params.angles;
  const PauliTransferMatrix& native = gs.gate(names::cx);
  if (params.mode == CorrectionMode::control_only) {
    PauliTransferMatrix post = noisy_one_qubit_gate(a[0], a[1], a[2], 0, cfg);
    PauliTransferMatrix pre = noisy_one_qubit_gate(a[3], a[4], a[5], 0, cfg);
    return compose(post, compose(native, pre));
  }
  PauliTransferMatrix post =
      compose(noisy_one_qubit_gate(a[0], a[1], a[2], 0, cfg),
              noisy_one_qubit_gate(a[3], a[4], a[5], 1, cfg));
  PauliTransferMatrix pre =
      compose(noisy_one_qubit_gate(a[6], a[7], a[8], 0, cfg),
              noisy_one_qubit_gate(a[9], a[10], a[11], 1, cfg));
  return compose(post, compose(native, pre));
}

double exact_success(const GateSet& gs, const PauliTransferMatrix& cx_exec,
                     const DRBCircuit& circuit) {
  DensityVector state = gs.rho;
  for (const std::string& name : circuit.prep)
    state = apply(gs.gate(name), state);
  for (const DRBLayer& layer : circuit.layers) {
    if (layer.is_cnot) {
      state = apply(cx_exec, state);
    } else {
      state = apply(gs.gate(layer.gate_q0), state);
      state = apply(gs.gate(layer.gate_q1), state);
    }
  }
  return circuit.ideal_output.components.dot(state.components);
}

}  // namespace

std::vector<std::string> DRBCircuit::flattened() const {
  std::vector<std::string> out = prep;
  for (const DRBLayer& layer : layers) {
    if (layer.is_cnot) {
      out.push_back(names::cx);
    } else {
      out.push_back(layer.gate_q0);
      out.push_back(layer.gate_q1);
    }
  }
  return out;
}

DRBCircuit generate_drb_circuit(int m, double cnot_fraction,
                                std::mt19937_64& rng) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (cnot_fraction < 0.0 || cnot_fraction > 1.0)
    throw std::invalid_argument("cnot_fraction must be in [0,1]");

  DRBCircuit circuit;
  circuit.m = m;
  std::uniform_int_distribution<int> prep_pick(0, 5);
  std::uniform_int_distribution<int> pulse_pick(0, 1);
  std::bernoulli_distribution is_cnot(cnot_fraction);

  for (int q = 0; q < 2; ++q)
    for (int kind : stabilizer_preps()[prep_pick(rng)])
      circuit.prep.push_back(pulse_name(kind, q));

  for (int layer_idx = 0; layer_idx < m; ++layer_idx) {
    DRBLayer layer;
    layer.is_cnot = is_cnot(rng);
    if (layer.is_cnot) {
      ++circuit.cnot_count;
    } else {
      layer.gate_q0 = pulse_name(pulse_pick(rng), 0);
      layer.gate_q1 = pulse_name(pulse_pick(rng), 1);
    }
    circuit.layers.push_back(std::move(layer));
  }

  const GateSet ideal = ideal_gateset();
  circuit.ideal_output = propagate(ideal, circuit.flattened());
  return circuit;
}

double success_probability(const DriftingDeviceModel& model, int cycle,
                           const DRBCircuit& circuit,
                           const CorrectionParams* correction, long long shots,
                           std::mt19937_64* rng) {
  const GateSet gs = model.gateset_at_cycle(cycle);
  const NoiseConfig cfg = model.config_at_cycle(cycle);
  PauliTransferMatrix cx_exec =
      correction ? corrected_cx_execution(gs, cfg, *correction)
                 : gs.gate(names::cx);
  double p = exact_success(gs, cx_exec, circuit);
  if (shots == 0) return p;
  if (rng == nullptr)
    throw std::invalid_argument("shot sampling requires an RNG");
  std::binomial_distribution<long long> bin(shots, clamp01(p));
  return static_cast<double>(bin(*rng)) / static_cast<double>(shots);
}

double rb_number(double p) { return (15.0 / 16.0) * (1.0 - p); }

double improvement(double r_u, double r_c) {
  if (r_c <= 0.0) return std::numeric_limits<double>::infinity();
  return r_u / r_c - 1.0;
}

double mixture_rb_number(double r_cnot, double r_single,
                         double cnot_fraction) {
  return cnot_fraction * r_cnot + (1.0 - cnot_fraction) * r_single;
}

//=========================================================================
// Decay fitting
//=========================================================================

namespace {

struct WeightedPoints {
  std::vector<double> m, y, w;
};

WeightedPoints weigh(const std::vector<DecayPoint>& points) {
  WeightedPoints wp;
  bool any_stderr = false;
  for (const DecayPoint& pt : points) any_stderr |= pt.stderr_ > 0.0;
  for (const DecayPoint& pt : points) {
    wp.m.push_back(static_cast<double>(pt.m));
    wp.y.push_back(pt.mean);
    double sigma = any_stderr ? std::max(pt.stderr_, 1e-6) : 1.0;
    wp.w.push_back(1.0 / (sigma * sigma));
  }
  return wp;
}

double chi2_of(const WeightedPoints& wp, double a, double b, double p) {
  double chi2 = 0;
  for (size_t i = 0; i < wp.m.size(); ++i) {
    double r = a + b * std::pow(p, wp.m[i]) - wp.y[i];
    chi2 += wp.w[i] * r * r;
  }
  return chi2;
}

// Weighted least squares for (A, B) at fixed p, constrained to [0, 1]:
// both are success-probability parameters, and the box keeps slow
// non-exponential decays off the degenerate A -> -inf, B -> +inf ridge.
double solve_linear(const WeightedPoints& wp, double p, double& a, double& b) {
  double sw = 0, swx = 0, swxx = 0, swy = 0, swxy = 0;
  for (size_t i = 0; i < wp.m.size(); ++i) {
    double x = std::pow(p, wp.m[i]);
    sw += wp.w[i];
    swx += wp.w[i] * x;
    swxx += wp.w[i] * x * x;
    swy += wp.w[i] * wp.y[i];
    swxy += wp.w[i] * x * wp.y[i];
  }
  double det = sw * swxx - swx * swx;
  if (std::abs(det) < 1e-14 * std::max(1.0, sw * swxx)) {
    a = std::clamp(swy / sw, 0.0, 1.0);
    b = 0.0;
    return chi2_of(wp, a, b, p);
  }
  a = (swy * swxx - swx * swxy) / det;
  b = (sw * swxy - swx * swy) / det;
  if (a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)
    return chi2_of(wp, a, b, p);

  // Project onto the box: fix each variable at its clamp and re-solve the
  // other, keep the better corner.
  double a1 = std::clamp(a, 0.0, 1.0);
  double b1 = swxx > 0.0 ? std::clamp((swxy - a1 * swx) / swxx, 0.0, 1.0) : 0.0;
  double b2 = std::clamp(b, 0.0, 1.0);
  double a2 = sw > 0.0 ? std::clamp((swy - b2 * swx) / sw, 0.0, 1.0) : 0.0;
  double c1 = chi2_of(wp, a1, b1, p);
  double c2 = chi2_of(wp, a2, b2, p);
  if (c1 <= c2) {
    a = a1;
    b = b1;
    return c1;
  }
  a = a2;
  b = b2;
  return c2;
}

double grid_search(const WeightedPoints& wp, double step, double& a,
                   double& b) {
  double best_p = 0.0, best_chi2 = std::numeric_limits<double>::infinity();
  for (double p = 0.0; p <= 1.0 + 1e-12; p += step) {
    double ga, gb;
    double pc = std::min(p, 1.0);
    double chi2 = solve_linear(wp, pc, ga, gb);
    // Machine-level ties (e.g. constant no-decay data) resolve toward the
    // larger p so noiseless input reports p = 1, r = 0.
    bool better = chi2 < best_chi2 - 1e-12 * (1.0 + best_chi2);
    bool tie = std::abs(chi2 - best_chi2) <= 1e-12 * (1.0 + best_chi2);
    if (better || (tie && pc > best_p)) {
      best_chi2 = chi2;
      best_p = pc;
      a = ga;
      b = gb;
    }
  }
  return best_p;
}

// Damped Gauss-Newton over (A, B, p). Returns true on convergence.
bool refine(const WeightedPoints& wp, double& a, double& b, double& p,
            std::array<double, 3>& cov_diag, double& chi2_out) {
  double chi2 = chi2_of(wp, a, b, p);
  double lambda = 1e-6;
  bool converged = false;

  for (int outer = 0; outer < 200; ++outer) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < wp.m.size(); ++i) {
      double sq = std::sqrt(wp.w[i]);
      double pm = std::pow(p, wp.m[i]);
      double dpdp = wp.m[i] >= 1.0 ? b * wp.m[i] * std::pow(p, wp.m[i] - 1.0)
                                   : 0.0;
      Eigen::Vector3d j(sq, sq * pm, sq * dpdp);
      double r = sq * (a + b * pm - wp.y[i]);
      jtj += j * j.transpose();
      jtr += j * r;
    }

    bool stepped = false;
    for (int inner = 0; inner < 12; ++inner) {
      Eigen::Matrix3d damped = jtj;
      for (int k = 0; k < 3; ++k)
        damped(k, k) += lambda * std::max(jtj(k, k), 1e-12);
      Eigen::Vector3d delta = damped.ldlt().solve(-jtr);
      double na = std::clamp(a + delta(0), 0.0, 1.0);
      double nb = std::clamp(b + delta(1), 0.0, 1.0);
      double np = std::clamp(p + delta(2), 0.0, 1.0);
      double nchi2 = chi2_of(wp, na, nb, np);
      if (std::isfinite(nchi2) && nchi2 <= chi2) {
        double drop = chi2 - nchi2;
        a = na;
        b = nb;
        p = np;
        chi2 = nchi2;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (drop < 1e-15 * (1.0 + chi2)) converged = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) {
      converged = true;  // no descent direction left at double precision
      break;
    }
    if (converged) break;
  }

  chi2_out = chi2;
  // Covariance estimate from the final weighted Jacobian.
  Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < wp.m.size(); ++i) {
    double sq = std::sqrt(wp.w[i]);
    double pm = std::pow(p, wp.m[i]);
    double dpdp = wp.m[i] >= 1.0 ? b * wp.m[i] * std::pow(p, wp.m[i] - 1.0)
                                 : 0.0;
    Eigen::Vector3d j(sq, sq * pm, sq * dpdp);
    jtj += j * j.transpose();
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
  if (lu.isInvertible()) {
    Eigen::Matrix3d cov = lu.inverse();
    cov_diag = {cov(0, 0), cov(1, 1), cov(2, 2)};
  } else {
    cov_diag = {0.0, 0.0, 0.0};
  }
  return converged;
}

}  // namespace

DecayFit fit_decay(const std::vector<DecayPoint>& points) {
  std::vector<int> ms;
  for (const DecayPoint& pt : points) ms.push_back(pt.m);
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  if (ms.size() < 3)
    throw std::invalid_argument("fit_decay needs >= 3 distinct lengths");

  WeightedPoints wp = weigh(points);
  DecayFit fit;
  fit.p = grid_search(wp, 1e-3, fit.A, fit.B);
  fit.converged = refine(wp, fit.A, fit.B, fit.p, fit.cov_diag, fit.chi2);

  if (!fit.converged) {
    // Dense fallback guarantees a usable result for pathological data.
    DecayFit fallback;
    fallback.p = grid_search(wp, 1e-4, fallback.A, fallback.B);
    fallback.chi2 = chi2_of(wp, fallback.A, fallback.B, fallback.p);
    if (fallback.chi2 < fit.chi2) {
      fallback.converged = false;
      fallback.cov_diag = fit.cov_diag;
      fit = fallback;
    }
  }

  fit.p = std::clamp(fit.p, 0.0, 1.0);
  fit.r = rb_number(fit.p);
  return fit;
}

//=========================================================================
// Objective
//=========================================================================

void ObjectiveSpec::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (num_circuits < 1)
    throw std::invalid_argument("num_circuits must be >= 1");
  if (!exact_mode && shots < 1)
    throw std::invalid_argument("shots must be >= 1 in sampling mode");
  if (cnot_fraction < 0.0 || cnot_fraction > 1.0)
    throw std::invalid_argument("cnot_fraction must be in [0,1]");
}

DrbObjective::DrbObjective(const DriftingDeviceModel& model, int cycle,
                           ObjectiveSpec spec, std::uint64_t circuit_seed)
    : gateset_(model.gateset_at_cycle(cycle)),
      config_(model.config_at_cycle(cycle)),
      spec_(spec),
      seed_(circuit_seed) {
  spec_.validate();
  for (int i = 0; i < spec_.num_circuits; ++i) {
    std::mt19937_64 rng =
        make_rng(seed_, {kDrbCircuitStream, std::uint64_t(i)});
    circuits_.push_back(
        generate_drb_circuit(spec_.m, spec_.cnot_fraction, rng));
  }
}

double DrbObjective::evaluate(const CorrectionParams* correction) {
  const int eval_id = evaluations_++;
  PauliTransferMatrix cx_exec =
      correction ? corrected_cx_execution(gateset_, config_, *correction)
                 : gateset_.gate(names::cx);

  double total = 0.0;
  for (size_t i = 0; i < circuits_.size(); ++i) {
    double p = exact_success(gateset_, cx_exec, circuits_[i]);
    if (!spec_.exact_mode) {
      std::mt19937_64 rng =
          make_rng(seed_, {kDrbShotStream, std::uint64_t(eval_id),
                           std::uint64_t(i)});
      std::binomial_distribution<long long> bin(spec_.shots, clamp01(p));
      p = static_cast<double>(bin(rng)) / static_cast<double>(spec_.shots);
    }
    total += 1.0 - p;
  }
  return total / static_cast<double>(circuits_.size());
}

RBCurve run_rb_curve(const DriftingDeviceModel& model, int cycle,
                     const std::vector<int>& m_grid, const ObjectiveSpec& spec,
                     const CorrectionParams* correction,
                     std::uint64_t curve_seed) {
  const GateSet gs = model.gateset_at_cycle(cycle);
  const NoiseConfig cfg = model.config_at_cycle(cycle);
  PauliTransferMatrix cx_exec =
      correction ? corrected_cx_execution(gs, cfg, *correction)
                 : gs.gate(names::cx);

  RBCurve curve;
  for (int m : m_grid) {
    std::vector<double> values;
    for (int i = 0; i < spec.num_circuits; ++i) {
      std::mt19937_64 circuit_rng =
          make_rng(curve_seed,
                   {kCurveCircuitStream, std::uint64_t(m), std::uint64_t(i)});
      DRBCircuit circuit =
          generate_drb_circuit(m, spec.cnot_fraction, circuit_rng);
      double p = exact_success(gs, cx_exec, circuit);
      if (!spec.exact_mode) {
        std::mt19937_64 shot_rng = make_rng(
            curve_seed, {kCurveShotStream, std::uint64_t(m), std::uint64_t(i),
                         correction ? 1ULL : 0ULL});
        std::binomial_distribution<long long> bin(spec.shots, clamp01(p));
        p = static_cast<double>(bin(shot_rng)) /
            static_cast<double>(spec.shots);
      }
      values.push_back(p);
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    double stderr_ = values.size() > 1
                         ? std::sqrt(var / (static_cast<double>(values.size()) - 1.0) /
                                     static_cast<double>(values.size()))
                         : 0.0;
    curve.points.push_back({m, mean, stderr_});
  }
  curve.fit = fit_decay(curve.points);
  return curve;
}

}  // namespace post
