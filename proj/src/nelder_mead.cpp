#include "post/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace post {

namespace {

std::vector<double> centroid_of_best(const Simplex& s) {
  const size_t d = s.vertices.size() - 1;
  std::vector<double> c(s.vertices[0].point.size(), 0.0);
  for (size_t v = 0; v < d; ++v)
    for (size_t k = 0; k < c.size(); ++k) c[k] += s.vertices[v].point[k];
  for (double& x : c) x /= static_cast<double>(d);
  return c;
}

std::vector<double> affine(const std::vector<double>& base,
                           const std::vector<double>& dir, double t) {
  std::vector<double> out(base.size());
  for (size_t k = 0; k < base.size(); ++k)
    out[k] = base[k] + t * (dir[k] - base[k]);
  return out;
}

double safe_eval(const Objective& objective, const std::vector<double>& x) {
  double v = objective(x);
  // A failed evaluation discards the candidate rather than the vertex.
  if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
  return v;
}

}  // namespace

NMConfig NMConfig::adaptive(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  NMConfig c;
  const double d = static_cast<double>(dim);
  c.alpha = 1.0;
  c.beta = 1.0 + 2.0 / d;
  c.gamma = 0.75 - 1.0 / (2.0 * d);
  c.delta = 1.0 - 1.0 / d;
  return c;
}

void NMConfig::validate() const {
  if (alpha <= 0.0 || beta <= 1.0 || gamma <= 0.0 || gamma >= 1.0 ||
      delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("invalid Nelder-Mead coefficients");
  if (init_step <= 0.0) throw std::invalid_argument("init_step must be > 0");
  if (no_improve_limit < 1 || max_iterations < 0)
    throw std::invalid_argument("invalid iteration limits");
}

void Simplex::sort() {
  std::stable_sort(vertices.begin(), vertices.end(),
                   [](const SimplexVertex& a, const SimplexVertex& b) {
                     return a.value < b.value;
                   });
}

Simplex init_simplex(const std::vector<double>& seed, double step) {
  if (step <= 0.0) throw std::invalid_argument("simplex step must be > 0");
  if (seed.empty()) throw std::invalid_argument("empty seed point");
  Simplex s;
  s.vertices.push_back({seed, 0.0});
  for (size_t i = 0; i < seed.size(); ++i) {
    std::vector<double> p = seed;
    p[i] += step;
    s.vertices.push_back({std::move(p), 0.0});
  }
  return s;
}

IterationOutcome nm_iterate(Simplex& simplex, const Objective& objective,
                            const NMConfig& config) {
  const size_t n = simplex.vertices.size();
  if (n < 2) throw std::invalid_argument("simplex has too few vertices");
  IterationOutcome out;
  const double best_before = simplex.best().value;
  const double second_worst = simplex.vertices[n - 2].value;
  const double worst = simplex.worst().value;

  const std::vector<double> center = centroid_of_best(simplex);
  const std::vector<double>& xw = simplex.worst().point;

  // All four candidates are evaluated up front so a hardware backend could
  // submit them as one batch.
  std::vector<double> xr = affine(center, xw, -config.alpha);
  std::vector<double> xe = affine(center, xr, config.beta);
  std::vector<double> xoc = affine(center, xr, config.gamma);
  std::vector<double> xic = affine(center, xr, -config.gamma);
  const double fr = safe_eval(objective, xr);
  const double fe = safe_eval(objective, xe);
  const double foc = safe_eval(objective, xoc);
  const double fic = safe_eval(objective, xic);
  out.evals = 4;

  std::vector<double>* replacement = nullptr;
  double replacement_value = 0.0;
  bool want_shrink = false;

  if (fr < best_before) {
    if (fe < fr) {
      replacement = &xe;
      replacement_value = fe;
    } else {
      replacement = &xr;
      replacement_value = fr;
    }
  } else if (fr < second_worst) {
    replacement = &xr;
    replacement_value = fr;
  } else if (fr < worst) {
    if (foc <= fr) {
      replacement = &xoc;
      replacement_value = foc;
    } else {
      want_shrink = true;
    }
  } else {
    if (fic < worst) {
      replacement = &xic;
      replacement_value = fic;
    } else {
      want_shrink = true;
    }
  }

  if (replacement != nullptr) {
    simplex.vertices.back() = {std::move(*replacement), replacement_value};
    simplex.sort();
    out.accepted = true;
  } else if (want_shrink && config.shrink_enabled) {
    const std::vector<double> x0 = simplex.vertices[0].point;
    for (size_t v = 1; v < n; ++v) {
      simplex.vertices[v].point = affine(x0, simplex.vertices[v].point,
                                         config.delta);
      simplex.vertices[v].value = safe_eval(objective, simplex.vertices[v].point);
      ++out.evals;
    }
    simplex.sort();
    out.accepted = true;
  }
  // Otherwise the candidate set is discarded and the simplex is unchanged.

  out.best_value = simplex.best().value;
  out.improved = best_before - out.best_value > config.improvement_tol;
  if (out.best_value > best_before + 1e-15)
    throw std::logic_error("Nelder-Mead best value worsened");
  return out;
}

NMResult nm_minimize(const Objective& objective,
                     const std::vector<double>& start,
                     const NMConfig& config) {
  config.validate();
  Simplex simplex = init_simplex(start, config.init_step);
  NMResult result;
  for (SimplexVertex& v : simplex.vertices) {
    v.value = safe_eval(objective, v.point);
    ++result.init_evals;
  }
  simplex.sort();

  int stall_streak = 0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationOutcome outcome = nm_iterate(simplex, objective, config);
    result.history.push_back(outcome);
    result.candidate_evals += outcome.evals;
    result.iterations = it;
    if (outcome.improved) {
      stall_streak = 0;
      result.last_improvement_iteration = it;
    } else {
      ++stall_streak;
    }
    if (stall_streak >= config.no_improve_limit) {
      result.stalled = true;
      break;
    }
    if (config.convergence_spread > 0.0 &&
        simplex.spread() < config.convergence_spread)
      break;
  }

  result.best_point = simplex.best().point;
  result.best_value = simplex.best().value;
  return result;
}

}  // namespace post
