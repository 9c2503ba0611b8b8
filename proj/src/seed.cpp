#include "post/seed.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "post/gates.hpp"
#include "post/nelder_mead.hpp"
#include "post/rng.hpp"

namespace post {

namespace {
constexpr std::uint64_t kSeedSearchStream = 0x73656564'7372636cULL;
}

SeedResult find_seed(const PauliTransferMatrix& g_bar, CorrectionMode mode,
                     int restarts, std::uint64_t rng_seed) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const int dim = param_count(mode);
  const PauliTransferMatrix& target = gates::cnot_ptm();

  // The squared distance is smooth and quadratic near an exact optimum,
  // which Nelder-Mead polishes far better than the conical sqrt landscape.
  Objective squared = [&](const std::vector<double>& x) {
    PauliTransferMatrix c = corrected_ptm(g_bar, {mode, x});
    return (c.entries - target.entries).squaredNorm();
  };

  NMConfig config = NMConfig::adaptive(dim);
  config.shrink_enabled = true;
  config.init_step = 0.25;
  config.max_iterations = 6000;
  config.no_improve_limit = 60;
  config.improvement_tol = 0.0;
  config.convergence_spread = 1e-20;

  std::vector<double> best_x;
  double best_f = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> start(dim, 0.0);
    if (r > 0) {
      std::mt19937_64 rng =
          make_rng(rng_seed, {kSeedSearchStream, std::uint64_t(r)});
      std::uniform_real_distribution<double> u(-M_PI, M_PI);
      for (double& x : start) x = u(rng);
    }
    NMResult res = nm_minimize(squared, start, config);
    if (res.best_value < best_f) {
      best_f = res.best_value;
      best_x = res.best_point;
    }
  }

  SeedResult out;
  out.params = CorrectionParams{mode, best_x}.canonicalized();
  out.baseline_distance = frobenius_distance(g_bar, target);
  out.residual_distance =
      std::min(std::sqrt(std::max(0.0, best_f)), out.baseline_distance);
  out.theoretical_minimum_infidelity =
      average_gate_infidelity(corrected_ptm(g_bar, out.params), target);
  return out;
}

}  // namespace post
