#pragma once

// Shared test utilities: sample construction, total-mass quadrature,
// KS statistics with a fast path for quadrature-backed CDFs, scratch
// directories, and a least-squares slope.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "growthfit/distributions.hpp"
#include "growthfit/quadrature.hpp"
#include "growthfit/rng.hpp"
#include "growthfit/samples.hpp"

namespace testsup {

inline growthfit::GrowthSample make_sample(std::vector<double> values,
                                           std::string label = "test") {
  growthfit::GrowthSample sample;
  sample.values = std::move(values);
  sample.label = std::move(label);
  return sample;
}

inline growthfit::GrowthSample draw_sample(const growthfit::ModelParams& params,
                                           std::size_t n, std::uint64_t seed) {
  growthfit::RngStream rng(seed);
  return make_sample(growthfit::draw_many(params, n, rng));
}

// Integration window wide enough that the closure terms come from the far
// tails where the analytic CDFs are accurate.
inline std::pair<double, double> mass_window(const growthfit::ModelParams& params) {
  struct Visitor {
    std::pair<double, double> operator()(const growthfit::NormalParams& p) const {
      return {p.mu - 60.0 * p.sigma, p.mu + 60.0 * p.sigma};
    }
    std::pair<double, double> operator()(const growthfit::StudentTParams& p) const {
      return {p.mu - 60.0 * p.sigma, p.mu + 60.0 * p.sigma};
    }
    std::pair<double, double> operator()(const growthfit::AdLnParams& p) const {
      const double scale = p.sigma + 1.0 / std::min(p.alpha, p.beta);
      return {p.mu - 60.0 * scale, p.mu + 60.0 * scale};
    }
    std::pair<double, double> operator()(const growthfit::ASubParams& p) const {
      const double scale = std::max(p.a_l, p.a_r);
      return {p.mu - 60.0 * scale, p.mu + 60.0 * scale};
    }
    std::pair<double, double> operator()(const growthfit::TMixParams& p) const {
      double lo = p.mu[0], hi = p.mu[0], scale = p.sigma[0];
      for (std::size_t j = 0; j < p.n_components(); ++j) {
        lo = std::min(lo, p.mu[j]);
        hi = std::max(hi, p.mu[j]);
        scale = std::max(scale, p.sigma[j]);
      }
      return {lo - 60.0 * scale, hi + 60.0 * scale};
    }
  };
  return std::visit(Visitor{}, params);
}

// Body quadrature plus analytic tail closure; should equal 1 for any
// properly normalized density with a consistent CDF.
inline double total_mass(const growthfit::ModelParams& params) {
  const auto [lo, hi] = mass_window(params);
  const double body = growthfit::quad::integrate(
      [&params](double g) { return std::exp(growthfit::log_pdf(params, g)); },
      lo, hi, 1e-10);
  return body + growthfit::cdf(params, lo) + (1.0 - growthfit::cdf(params, hi));
}

// CDF on an ascending grid; the adln CDF integrates incrementally between
// grid points instead of re-integrating from the anchor each time.
inline std::vector<double> cdf_on_sorted_grid(const growthfit::ModelParams& params,
                                              const std::vector<double>& sorted) {
  std::vector<double> out(sorted.size());
  if (sorted.empty()) return out;
  if (!std::holds_alternative<growthfit::AdLnParams>(params)) {
    for (std::size_t i = 0; i < sorted.size(); ++i)
      out[i] = growthfit::cdf(params, sorted[i]);
    return out;
  }
  const auto& adln = std::get<growthfit::AdLnParams>(params);
  const growthfit::detail::AdLnEval ev(adln);
  out[0] = ev.cdf(sorted[0]);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double inc = growthfit::quad::integrate(
        [&ev](double g) { return std::exp(ev.log_pdf(g)); }, sorted[i - 1],
        sorted[i], 1e-11);
    out[i] = std::min(1.0, out[i - 1] + inc);
  }
  return out;
}

inline double ks_statistic(const growthfit::ModelParams& params,
                           std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  const std::vector<double> fitted = cdf_on_sorted_grid(params, draws);
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double hi = (static_cast<double>(i) + 1.0) / n - fitted[i];
    const double lo = fitted[i] - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("growthfit_" + tag + "_" + std::to_string(++counter));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline double ls_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testsup
