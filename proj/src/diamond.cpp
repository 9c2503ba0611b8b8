#include "post/diamond.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "post/gates.hpp"
#include "post/nelder_mead.hpp"
#include "post/rng.hpp"

namespace post {

namespace {

constexpr std::uint64_t kSampleStream = 0x6469616d'73616d70ULL;
constexpr std::uint64_t kDriftPairStream = 0x64726966'74706172ULL;

double trace_norm_hermitian(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  return es.eigenvalues().cwiseAbs().sum();
}

// (Delta (x) id)(|psi><psi|) for |psi> with system-major amplitudes, given
// the unnormalized Choi difference delta_j. Block (i,k) of the output is
// B * delta_j(i,k) * B^dag with B = Psi^T.
double halved_output_trace_distance(const CMat& delta_j, const CVec& psi,
                                    int d) {
  CMat b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(j, i) = psi(i * d + j);  // Psi^T
  CMat out(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      out.block(i * d, k * d, d, d) =
          b * delta_j.block(i * d, k * d, d, d) * b.adjoint();
  return 0.5 * trace_norm_hermitian(out);
}

CVec gaussian_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = complex_t(normal(rng), normal(rng));
  return psi / psi.norm();
}

}  // namespace

DiamondBounds diamond_bounds(const PauliTransferMatrix& phi1,
                             const PauliTransferMatrix& phi2,
                             const DiamondOptions& options) {
  if (phi1.num_qubits != phi2.num_qubits || phi1.size() != phi2.size())
    throw std::invalid_argument("diamond_bounds: dimension mismatch");
  const bool both_tp = is_trace_preserving(phi1) && is_trace_preserving(phi2);
  if (!is_cptp(phi1, 1e-7) || !is_cptp(phi2, 1e-7))
    std::cerr << "diamond_bounds: warning: input channel is not CPTP\n";

  const int d = phi1.dim();
  const double dd = static_cast<double>(d);
  CMat delta_j =
      dd * (choi_from_ptm(phi1).entries - choi_from_ptm(phi2).entries);

  DiamondBounds bounds;
  bounds.num_samples = options.num_samples;
  double upper = 0.5 * trace_norm_hermitian(delta_j);
  // Outputs of TP maps are unit-trace, so the halved distance is <= 1.
  if (both_tp) upper = std::min(upper, 1.0);

  CVec best_psi = CVec::Zero(d * d);
  best_psi(0) = 1.0;
  double best = halved_output_trace_distance(delta_j, best_psi, d);
  std::mt19937_64 rng = make_rng(options.rng_seed, {kSampleStream});
  for (int s = 0; s < options.num_samples; ++s) {
    CVec psi = gaussian_state(d * d, rng);
    double v = halved_output_trace_distance(delta_j, psi, d);
    if (v > best) {
      best = v;
      best_psi = psi;
    }
  }

  // Polish the best sampled state over its real parametrization.
  if (options.polish_iterations > 0 && upper > 1e-14) {
    const int nreal = 2 * d * d;
    Objective neg = [&](const std::vector<double>& x) {
      CVec psi(d * d);
      double norm_sq = 0.0;
      for (int i = 0; i < d * d; ++i) {
        psi(i) = complex_t(x[2 * i], x[2 * i + 1]);
        norm_sq += std::norm(psi(i));
      }
      if (norm_sq < 1e-12) return 0.0;
      psi /= std::sqrt(norm_sq);
      return -halved_output_trace_distance(delta_j, psi, d);
    };
    std::vector<double> start(nreal);
    for (int i = 0; i < d * d; ++i) {
      start[2 * i] = best_psi(i).real();
      start[2 * i + 1] = best_psi(i).imag();
    }
    NMConfig config = NMConfig::adaptive(nreal);
    config.shrink_enabled = true;
    config.init_step = 0.05;
    config.max_iterations = options.polish_iterations;
    config.no_improve_limit = options.polish_iterations;
    NMResult res = nm_minimize(neg, start, config);
    best = std::max(best, -res.best_value);
  }

  bounds.lower = std::min(best, upper);
  bounds.upper = upper;
  return bounds;
}

DriftReport drift_report(
    const std::vector<std::pair<std::string, CorrectionParams>>& history,
    const CorrectionParams& gst_seed, const DiamondOptions& options) {
  if (history.size() < 2)
    throw std::invalid_argument("drift report needs >= 2 history entries");

  const PauliTransferMatrix ideal = gates::cnot_ptm();
  const PauliTransferMatrix seed_channel = corrective_channel(gst_seed);

  DriftReport report;
  PauliTransferMatrix previous = ideal;  // placeholder until first entry
  for (size_t i = 0; i < history.size(); ++i) {
    const auto& [tag, params] = history[i];
    PauliTransferMatrix channel = corrective_channel(params);
    DriftEntry entry;
    entry.tag = tag;
    DiamondOptions opt = options;
    opt.rng_seed = derive_seed(options.rng_seed,
                               {kDriftPairStream, std::uint64_t(i), 0});
    entry.to_ideal = diamond_bounds(channel, ideal, opt);
    opt.rng_seed = derive_seed(options.rng_seed,
                               {kDriftPairStream, std::uint64_t(i), 1});
    entry.to_seed = diamond_bounds(channel, seed_channel, opt);
    if (i > 0) {
      opt.rng_seed = derive_seed(options.rng_seed,
                                 {kDriftPairStream, std::uint64_t(i), 2});
      entry.to_previous = diamond_bounds(channel, previous, opt);
    }
    previous = channel;
    report.series.push_back(std::move(entry));
  }

  double sum = 0.0, sum_sq = 0.0;
  for (const DriftEntry& e : report.series) {
    sum += e.to_seed.lower;
    sum_sq += e.to_seed.lower * e.to_seed.lower;
  }
  const double n = static_cast<double>(report.series.size());
  report.mean_to_seed = sum / n;
  report.var_to_seed = sum_sq / n - report.mean_to_seed * report.mean_to_seed;

  double step_sum = 0.0;
  int steps = 0;
  for (const DriftEntry& e : report.series)
    if (e.to_previous) {
      step_sum += e.to_previous->lower;
      ++steps;
    }
  report.mean_step = steps > 0 ? step_sum / steps : 0.0;
  return report;
}

}  // namespace post
