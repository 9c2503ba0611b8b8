#pragma once

#include <cstdint>

#include "post/correction.hpp"

namespace post {

// Outcome of the Frobenius-distance seed search.
struct SeedResult {
  CorrectionParams params;
  double residual_distance = 0.0;  // ||corrected - ideal CNOT||_F at optimum
  double baseline_distance = 0.0;  // same with zero correction
  // Average gate infidelity of the best corrected map against the ideal
  // CNOT, assuming perfect corrective gates.
  double theoretical_minimum_infidelity = 0.0;
};

// Minimizes || corrected_ptm(g_bar, params) - ptm(CNOT) ||_F over the
// bookend angles with multi-restart Nelder-Mead (start at zero plus
// restarts-1 seeded random starts). residual <= baseline always holds
// because the zero start's base vertex evaluates the uncorrected distance.
SeedResult find_seed(const PauliTransferMatrix& g_bar, CorrectionMode mode,
                     int restarts = 8, std::uint64_t rng_seed = 1);

}  // namespace post
