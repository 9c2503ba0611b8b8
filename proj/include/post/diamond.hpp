#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "post/correction.hpp"

namespace post {

// Certified bracket on the diamond distance
//   sup_rho (1/2) || (Phi1 - Phi2)(x)id (rho) ||_1.
// The lower bound maximizes over sampled ancilla-extended pure states with
// a Nelder-Mead polish; the upper bound is half the trace norm of the
// unnormalized Choi difference.
struct DiamondBounds {
  double lower = 0.0;
  double upper = 0.0;
  int num_samples = 0;
};

struct DiamondOptions {
  int num_samples = 2000;
  int polish_iterations = 400;
  std::uint64_t rng_seed = 1;
};

DiamondBounds diamond_bounds(const PauliTransferMatrix& phi1,
                             const PauliTransferMatrix& phi2,
                             const DiamondOptions& options = {});

struct DriftEntry {
  std::string tag;
  DiamondBounds to_ideal;
  DiamondBounds to_seed;
  std::optional<DiamondBounds> to_previous;  // absent for the first entry
};

struct DriftReport {
  std::vector<DriftEntry> series;
  // Statistics over the lower bounds of the distance-to-seed series and of
  // the step-to-step changes.
  double mean_to_seed = 0.0;
  double var_to_seed = 0.0;
  double mean_step = 0.0;
};

// Diamond distances of each day's corrective channel from the ideal CNOT,
// from the initial seed's channel, and from the previous entry.
DriftReport drift_report(
    const std::vector<std::pair<std::string, CorrectionParams>>& history,
    const CorrectionParams& gst_seed, const DiamondOptions& options = {});

}  // namespace post
