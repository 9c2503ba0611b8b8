#pragma once

#include <functional>
#include <vector>

namespace post {

using Objective = std::function<double(const std::vector<double>&)>;

// Adaptive Nelder-Mead configuration. The coefficients follow the
// dimension-adaptive choice alpha = 1, beta = 1 + 2/d, gamma = 0.75 - 1/(2d),
// delta = 1 - 1/d. Shrinking is optional; with it disabled a fully rejected
// candidate set leaves the simplex unchanged and the iteration is recorded
// as a stall.
struct NMConfig {
  double alpha = 1.0;
  double beta = 2.0;
  double gamma = 0.5;
  double delta = 0.5;
  double init_step = 0.1;
  int no_improve_limit = 5;
  int max_iterations = 200;
  bool shrink_enabled = false;
  // Minimum decrease of the best value that counts as an improvement for
  // the stall rule.
  double improvement_tol = 0.0;
  // Optional early stop when worst - best falls below this spread (0 = off).
  double convergence_spread = 0.0;

  static NMConfig adaptive(int dim);
  void validate() const;
};

struct SimplexVertex {
  std::vector<double> point;
  double value = 0.0;
};

// Vertices kept sorted ascending by objective value.
struct Simplex {
  std::vector<SimplexVertex> vertices;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
  const SimplexVertex& best() const { return vertices.front(); }
  const SimplexVertex& worst() const { return vertices.back(); }
  double spread() const { return worst().value - best().value; }
  void sort();
};

// Vertex 0 = seed, vertex i = seed + step * e_i. Values are not evaluated.
Simplex init_simplex(const std::vector<double>& seed, double step);

struct IterationOutcome {
  int evals = 0;          // objective evaluations consumed this iteration
  bool accepted = false;  // any vertex replaced (or shrink applied)
  bool improved = false;  // best value decreased by more than improvement_tol
  double best_value = 0.0;
};

// One batched Nelder-Mead iteration: reflection, expansion, outside and
// inside contraction are all evaluated before the acceptance logic runs.
// The best value never worsens. Requires a sorted simplex with evaluated
// vertices.
IterationOutcome nm_iterate(Simplex& simplex, const Objective& objective,
                            const NMConfig& config);

struct NMResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  int iterations = 0;
  int init_evals = 0;
  int candidate_evals = 0;
  int last_improvement_iteration = 0;  // 0 = no iteration improved on the seed
  std::vector<IterationOutcome> history;
  bool stalled = false;  // terminated by the no-improvement rule
};

// Full minimization driver: builds and evaluates the initial simplex, then
// iterates until `no_improve_limit` consecutive non-improving iterations,
// `max_iterations`, or the optional spread criterion.
NMResult nm_minimize(const Objective& objective,
                     const std::vector<double>& start, const NMConfig& config);

}  // namespace post
