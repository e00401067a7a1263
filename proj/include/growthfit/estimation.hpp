#pragma once

// Maximum-likelihood fitting: parameter transforms onto unconstrained
// coordinates, multi-start Nelder-Mead, and observed-information standard
// errors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <vector>

#include "growthfit/distributions.hpp"
#include "growthfit/errors.hpp"
#include "growthfit/nelder_mead.hpp"
#include "growthfit/rng.hpp"
#include "growthfit/samples.hpp"

namespace growthfit {

struct FitOptions {
  std::size_t n_starts = 8;
  std::size_t max_iters = 5000;
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  double se_step = 1e-4;  // relative central-difference step
  std::uint64_t seed = 0;
};

struct FitResult {
  ModelSpec spec;
  ModelParams params = NormalParams(0.0, 1.0);
  std::optional<std::vector<double>> std_errors;
  double log_lik = 0.0;
  std::size_t n_obs = 0;
  bool converged = false;
  std::size_t n_starts_used = 0;
  std::size_t best_start_index = 0;
};

namespace detail {

template <class Eval>
double kahan_nll(const Eval& ev, const std::vector<double>& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double g : values) {
    const double term = -ev.log_pdf(g) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

}  // namespace detail

inline double neg_log_likelihood(const ModelParams& params,
                                 const GrowthSample& sample) {
  if (sample.values.empty())
    throw Error(errc::insufficient_data, "likelihood requires a nonempty sample");
  return std::visit(
      [&](const auto& p) {
        return detail::kahan_nll(detail::make_eval(p), sample.values);
      },
      params);
}

// Unconstrained coordinates: log for positive parameters, identity for
// locations, additive log-ratio for mixture weights.
inline std::vector<double> to_unconstrained(const ModelParams& params) {
  struct Visitor {
    std::vector<double> operator()(const NormalParams& p) const {
      return {p.mu, std::log(p.sigma)};
    }
    std::vector<double> operator()(const StudentTParams& p) const {
      return {p.mu, std::log(p.sigma), std::log(p.nu)};
    }
    std::vector<double> operator()(const AdLnParams& p) const {
      return {std::log(p.alpha), std::log(p.beta), p.mu, std::log(p.sigma)};
    }
    std::vector<double> operator()(const ASubParams& p) const {
      return {std::log(p.a_l), std::log(p.a_r), std::log(p.b_l),
              std::log(p.b_r), p.mu};
    }
    std::vector<double> operator()(const TMixParams& p) const {
      std::vector<double> y;
      for (std::size_t j = 0; j < p.n_components(); ++j) {
        y.push_back(p.mu[j]);
        y.push_back(std::log(p.sigma[j]));
      }
      for (std::size_t j = 0; j + 1 < p.n_components(); ++j)
        y.push_back(std::log(p.weight[j] / p.weight.back()));
      return y;
    }
  };
  return std::visit(Visitor{}, params);
}

inline ModelParams from_unconstrained(const ModelSpec& spec,
                                      const std::vector<double>& y) {
  if (y.size() != n_free_params(spec))
    throw Error(errc::invalid_params, "unconstrained vector length mismatch");
  switch (spec.family) {
    case Family::normal: return NormalParams(y[0], std::exp(y[1]));
    case Family::student_t:
      return StudentTParams(y[0], std::exp(y[1]), std::exp(y[2]));
    case Family::adln:
      return AdLnParams(std::exp(y[0]), std::exp(y[1]), y[2], std::exp(y[3]));
    case Family::asub:
      return ASubParams(std::exp(y[0]), std::exp(y[1]), std::exp(y[2]),
                        std::exp(y[3]), y[4]);
    case Family::tmix: break;
  }
  const std::size_t m = spec.n_components();
  std::vector<double> mu(m), sigma(m), weight(m);
  for (std::size_t j = 0; j < m; ++j) {
    mu[j] = y[2 * j];
    sigma[j] = std::exp(y[2 * j + 1]);
  }
  // Softmax over (y_w, 0) with max shift so huge coordinates cannot overflow.
  double top = 0.0;
  for (std::size_t j = 0; j + 1 < m; ++j) top = std::max(top, y[2 * m + j]);
  double denom = std::exp(-top);
  for (std::size_t j = 0; j + 1 < m; ++j) denom += std::exp(y[2 * m + j] - top);
  for (std::size_t j = 0; j + 1 < m; ++j)
    weight[j] = std::exp(y[2 * m + j] - top) / denom;
  weight[m - 1] = std::exp(-top) / denom;
  return TMixParams(std::move(mu), std::move(sigma), std::move(weight),
                    spec.mix_dof);
}

namespace detail {

inline double sample_median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double robust_scale(const std::vector<double>& v, double median) {
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - median);
  return 1.4826 * sample_median(std::move(dev));
}

}  // namespace detail

// Start 0 is moment-based; the rest jitter it with 20% relative spread,
// log-normally for positive parameters and normally for locations.
inline std::vector<std::vector<double>> default_starts(const ModelSpec& spec,
                                                       const GrowthSample& sample,
                                                       std::size_t n_starts,
                                                       std::uint64_t seed) {
  if (sample.values.empty())
    throw Error(errc::insufficient_data, "default_starts requires a sample");
  if (n_starts < 1) throw Error(errc::domain, "n_starts must be >= 1");

  const DescriptiveStats stats = describe(sample);
  const double median = detail::sample_median(sample.values);
  double scale = detail::robust_scale(sample.values, median);
  if (!(scale > 0.0)) scale = stats.sd;
  if (!(scale > 0.0)) scale = 1.0;
  const double sd = stats.sd > 0.0 ? stats.sd : scale;

  ModelParams base = NormalParams(0.0, 1.0);
  switch (spec.family) {
    case Family::normal:
      base = NormalParams(median, scale);
      break;
    case Family::student_t:
      base = StudentTParams(median, scale, 5.0);
      break;
    case Family::adln:
      base = AdLnParams(1.0 / sd, 1.0 / sd, median, scale);
      break;
    case Family::asub:
      base = ASubParams(scale, scale, 1.5, 1.5, median);
      break;
    case Family::tmix: {
      const std::size_t m = spec.n_components();
      std::vector<double> mu(m, median), sig(m), w(m, 1.0 / static_cast<double>(m));
      for (std::size_t j = 0; j < m; ++j)
        sig[j] = scale * (1.5 - static_cast<double>(j) / static_cast<double>(m - 1));
      base = TMixParams(std::move(mu), std::move(sig), std::move(w), spec.mix_dof);
      break;
    }
  }

  const std::vector<double> y0 = to_unconstrained(base);
  // Location coordinates jitter additively on the data scale; every other
  // coordinate is a log or log-ratio, where additive noise is relative.
  std::vector<bool> is_location(y0.size(), false);
  switch (spec.family) {
    case Family::normal: is_location[0] = true; break;
    case Family::student_t: is_location[0] = true; break;
    case Family::adln: is_location[2] = true; break;
    case Family::asub: is_location[4] = true; break;
    case Family::tmix:
      for (std::size_t j = 0; j < spec.n_components(); ++j)
        is_location[2 * j] = true;
      break;
  }

  std::vector<std::vector<double>> starts;
  starts.push_back(y0);
  for (std::size_t s = 1; s < n_starts; ++s) {
    RngStream rng(derive_seed(seed, s));
    std::vector<double> y = y0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double z = rng.normal();
      y[j] += is_location[j] ? 0.2 * scale * z : 0.2 * z;
    }
    starts.push_back(std::move(y));
  }
  return starts;
}

inline std::optional<std::vector<double>> standard_errors(
    const FitResult& result, const GrowthSample& sample,
    const FitOptions& opts = {});

inline FitResult fit_mle(const ModelSpec& spec, const GrowthSample& sample,
                         const FitOptions& opts = {}) {
  const std::size_t k = n_free_params(spec);
  if (sample.values.size() < k + 1)
    throw Error(errc::insufficient_data,
                "sample smaller than parameter count + 1");
  const auto [lo, hi] =
      std::minmax_element(sample.values.begin(), sample.values.end());
  if (*lo == *hi)
    throw Error(errc::degenerate_sample, "sample has zero variance");

  const auto objective = [&spec, &sample](const std::vector<double>& y) {
    try {
      return neg_log_likelihood(from_unconstrained(spec, y), sample);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const auto starts = default_starts(spec, sample, opts.n_starts, opts.seed);
  NelderMeadOptions nm_opts;
  nm_opts.f_tol = opts.f_tol;
  nm_opts.x_tol = opts.x_tol;
  nm_opts.max_iters = opts.max_iters;

  std::vector<std::future<NelderMeadResult>> futures;
  futures.reserve(starts.size());
  for (const auto& start : starts)
    futures.push_back(std::async(std::launch::async, [&, start] {
      return nelder_mead(objective, start, nm_opts);
    }));

  std::vector<NelderMeadResult> runs;
  runs.reserve(futures.size());
  for (auto& f : futures) runs.push_back(f.get());

  // Lowest objective wins; near-ties resolve to the lowest start index.
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].f < runs[best].f - 1e-9) best = i;

  FitResult result;
  result.spec = spec;
  result.params = from_unconstrained(spec, runs[best].x);
  result.log_lik = -runs[best].f;
  result.n_obs = sample.values.size();
  result.converged = runs[best].converged;
  result.n_starts_used = starts.size();
  result.best_start_index = best;
  if (result.converged) result.std_errors = standard_errors(result, sample, opts);
  return result;
}

namespace detail {

// Cholesky inverse for the small symmetric Hessians below; empty result
// means the matrix is not positive definite.
inline std::optional<std::vector<double>> spd_inverse_diag(
    std::vector<double> h, std::size_t n) {
  std::vector<double> chol(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = h[i * n + j];
      for (std::size_t t = 0; t < j; ++t)
        acc -= chol[i * n + t] * chol[j * n + t];
      if (i == j) {
        if (!(acc > 0.0) || !std::isfinite(acc)) return std::nullopt;
        chol[i * n + i] = std::sqrt(acc);
      } else {
        chol[i * n + j] = acc / chol[j * n + j];
      }
    }
  }
  // diag(H^-1) column by column: solve L z = e_j, then L^T w = z.
  std::vector<double> diag(n), z(n), w(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = i == col ? 1.0 : 0.0;
      for (std::size_t t = 0; t < i; ++t) acc -= chol[i * n + t] * z[t];
      z[i] = acc / chol[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double acc = z[ii];
      for (std::size_t t = ii + 1; t < n; ++t) acc -= chol[t * n + ii] * w[t];
      w[ii] = acc / chol[ii * n + ii];
    }
    diag[col] = w[col];
  }
  return diag;
}

}  // namespace detail

// Observed information in the original constrained coordinates.
inline std::optional<std::vector<double>> standard_errors(
    const FitResult& result, const GrowthSample& sample,
    const FitOptions& opts) {
  const std::vector<double> x = param_values(result.params);
  const std::size_t n = x.size();
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i)
    step[i] = std::max(opts.se_step * std::abs(x[i]), 1e-6);

  const auto nll_at = [&](std::vector<double> v) {
    return neg_log_likelihood(params_from_values(result.spec, std::move(v)),
                              sample);
  };

  std::vector<double> hess(n * n, 0.0);
  try {
    const double f0 = nll_at(x);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> up = x, down = x;
      up[i] += step[i];
      down[i] -= step[i];
      hess[i * n + i] =
          (nll_at(up) - 2.0 * f0 + nll_at(down)) / (step[i] * step[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        std::vector<double> pp = x, pm = x, mp = x, mm = x;
        pp[i] += step[i]; pp[j] += step[j];
        pm[i] += step[i]; pm[j] -= step[j];
        mp[i] -= step[i]; mp[j] += step[j];
        mm[i] -= step[i]; mm[j] -= step[j];
        const double mixed = (nll_at(pp) - nll_at(pm) - nll_at(mp) + nll_at(mm)) /
                             (4.0 * step[i] * step[j]);
        hess[i * n + j] = mixed;
        hess[j * n + i] = mixed;
      }
    }
  } catch (const Error&) {
    return std::nullopt;
  }

  const auto diag = detail::spd_inverse_diag(std::move(hess), n);
  if (!diag) return std::nullopt;
  std::vector<double> se(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!((*diag)[i] >= 0.0)) return std::nullopt;
    se[i] = std::sqrt((*diag)[i]);
  }
  return se;
}

}  // namespace growthfit
