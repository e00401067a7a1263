#pragma once

// Nelder-Mead downhill simplex in n dimensions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "growthfit/errors.hpp"

namespace growthfit {

struct NelderMeadOptions {
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  std::size_t max_iters = 5000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
  std::size_t n_iters = 0;
  std::vector<double> best_trace;  // best vertex value after each iteration
};

inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& x0, const NelderMeadOptions& opts = {}) {
  if (x0.empty()) throw Error(errc::domain, "nelder_mead requires a nonempty x0");
  if (opts.f_tol <= 0.0 || opts.x_tol <= 0.0)
    throw Error(errc::domain, "nelder_mead tolerances must be positive");

  const std::size_t n = x0.size();
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  std::vector<std::vector<double>> verts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i)
    verts[i + 1][i] += 0.05 * std::max(std::abs(x0[i]), 0.1);

  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = objective(verts[i]);

  std::vector<std::size_t> order(n + 1);
  const auto sort_order = [&] {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };

  NelderMeadResult res;
  std::vector<double> centroid(n), trial(n);
  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    sort_order();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double f_spread = fv[worst] - fv[best];
    double x_spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        x_spread = std::max(x_spread, std::abs(verts[i][j] - verts[best][j]));
    if (f_spread < opts.f_tol && x_spread < opts.x_tol) {
      res.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += verts[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

    const auto blend = [&](double coef) {
      for (std::size_t j = 0; j < n; ++j)
        trial[j] = centroid[j] + coef * (centroid[j] - verts[worst][j]);
    };

    blend(kReflect);
    const std::vector<double> reflected = trial;
    const double f_reflected = objective(reflected);

    if (f_reflected < fv[best]) {
      blend(kExpand);
      const double f_expanded = objective(trial);
      if (f_expanded < f_reflected) {
        verts[worst] = trial;
        fv[worst] = f_expanded;
      } else {
        verts[worst] = reflected;
        fv[worst] = f_reflected;
      }
    } else if (f_reflected < fv[second_worst]) {
      verts[worst] = reflected;
      fv[worst] = f_reflected;
    } else {
      bool shrink = false;
      if (f_reflected < fv[worst]) {
        blend(kContract);  // outside contraction
        const double f_contracted = objective(trial);
        if (f_contracted <= f_reflected) {
          verts[worst] = trial;
          fv[worst] = f_contracted;
        } else {
          shrink = true;
        }
      } else {
        blend(-kContract);  // inside contraction
        const double f_contracted = objective(trial);
        if (f_contracted < fv[worst]) {
          verts[worst] = trial;
          fv[worst] = f_contracted;
        } else {
          shrink = true;
        }
      }
      if (shrink) {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            verts[i][j] = verts[best][j] + kShrink * (verts[i][j] - verts[best][j]);
          fv[i] = objective(verts[i]);
        }
      }
    }

    res.n_iters = iter + 1;
    res.best_trace.push_back(*std::min_element(fv.begin(), fv.end()));
  }

  sort_order();
  res.x = verts[order.front()];
  res.f = fv[order.front()];
  return res;
}

}  // namespace growthfit
