#pragma once

// Growth-rate distribution families: normal, Student t, asymmetric
// double-exponential-with-lognormal-core (adln), asymmetric Subbotin (asub),
// and finite Student-t mixtures with fixed degrees of freedom.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "growthfit/errors.hpp"
#include "growthfit/quadrature.hpp"
#include "growthfit/rng.hpp"
#include "growthfit/specfun.hpp"

namespace growthfit {

enum class Family { normal, student_t, adln, asub, tmix };

struct ModelSpec {
  Family family = Family::normal;
  std::vector<double> mix_dof;  // fixed per-component dof, tmix only

  std::size_t n_components() const { return mix_dof.size(); }
};

inline ModelSpec spec_from_label(const std::string& label) {
  if (label == "normal") return {Family::normal, {}};
  if (label == "student_t") return {Family::student_t, {}};
  if (label == "adln") return {Family::adln, {}};
  if (label == "asub") return {Family::asub, {}};
  if (label == "2st12") return {Family::tmix, {4.0, 12.0}};
  if (label == "2st39") return {Family::tmix, {4.0, 39.0}};
  if (label == "3st") return {Family::tmix, {4.0, 12.0, 39.0}};
  throw Error(errc::usage, "unknown family label: " + label);
}

inline std::string label_for(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::normal: return "normal";
    case Family::student_t: return "student_t";
    case Family::adln: return "adln";
    case Family::asub: return "asub";
    case Family::tmix: break;
  }
  if (spec.mix_dof == std::vector<double>{4.0, 12.0}) return "2st12";
  if (spec.mix_dof == std::vector<double>{4.0, 39.0}) return "2st39";
  if (spec.mix_dof == std::vector<double>{4.0, 12.0, 39.0}) return "3st";
  throw Error(errc::invalid_params, "t mixture with unnamed dof vector");
}

inline std::vector<std::string> known_labels() {
  return {"normal", "student_t", "adln", "asub", "2st12", "2st39", "3st"};
}

struct NormalParams {
  double mu = 0.0;
  double sigma = 1.0;

  NormalParams(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0.0)
      throw Error(errc::invalid_params, "normal requires sigma > 0");
  }
};

struct StudentTParams {
  double mu = 0.0;
  double sigma = 1.0;
  double nu = 1.0;

  StudentTParams(double mu_, double sigma_, double nu_)
      : mu(mu_), sigma(sigma_), nu(nu_) {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(nu) ||
        sigma <= 0.0 || nu <= 0.0)
      throw Error(errc::invalid_params, "student_t requires sigma > 0, nu > 0");
  }
};

struct AdLnParams {
  double alpha = 1.0;  // upper tail rate
  double beta = 1.0;   // lower tail rate
  double mu = 0.0;
  double sigma = 1.0;

  AdLnParams(double alpha_, double beta_, double mu_, double sigma_)
      : alpha(alpha_), beta(beta_), mu(mu_), sigma(sigma_) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(mu) ||
        !std::isfinite(sigma) || alpha <= 0.0 || beta <= 0.0 || sigma <= 0.0)
      throw Error(errc::invalid_params,
                  "adln requires alpha > 0, beta > 0, sigma > 0");
  }
};

struct ASubParams {
  double a_l = 1.0;  // left scale
  double a_r = 1.0;  // right scale
  double b_l = 1.0;  // left shape
  double b_r = 1.0;  // right shape
  double mu = 0.0;

  ASubParams(double a_l_, double a_r_, double b_l_, double b_r_, double mu_)
      : a_l(a_l_), a_r(a_r_), b_l(b_l_), b_r(b_r_), mu(mu_) {
    if (!std::isfinite(a_l) || !std::isfinite(a_r) || !std::isfinite(b_l) ||
        !std::isfinite(b_r) || !std::isfinite(mu) || a_l <= 0.0 ||
        a_r <= 0.0 || b_l <= 0.0 || b_r <= 0.0)
      throw Error(errc::invalid_params,
                  "asub requires positive scales and shapes");
  }
};

struct TMixParams {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<double> weight;  // all m weights, positive, sum to one
  std::vector<double> nu;      // fixed, not free parameters

  TMixParams(std::vector<double> mu_, std::vector<double> sigma_,
             std::vector<double> weight_, std::vector<double> nu_)
      : mu(std::move(mu_)),
        sigma(std::move(sigma_)),
        weight(std::move(weight_)),
        nu(std::move(nu_)) {
    const std::size_t m = mu.size();
    if (m < 2 || sigma.size() != m || weight.size() != m || nu.size() != m)
      throw Error(errc::invalid_params,
                  "t mixture requires >= 2 components of equal length");
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(mu[j]) || !std::isfinite(sigma[j]) ||
          !std::isfinite(weight[j]) || !std::isfinite(nu[j]) ||
          sigma[j] <= 0.0 || nu[j] <= 0.0 || weight[j] < 0.0)
        throw Error(errc::invalid_params,
                    "t mixture requires sigma > 0, nu > 0, weight >= 0");
      if (j > 0 && nu[j] <= nu[j - 1])
        throw Error(errc::invalid_params,
                    "t mixture components must be ordered by increasing nu");
      total += weight[j];
    }
    if (std::abs(total - 1.0) > 1e-8)
      throw Error(errc::invalid_params, "t mixture weights must sum to one");
  }

  std::size_t n_components() const { return mu.size(); }
};

using ModelParams =
    std::variant<NormalParams, StudentTParams, AdLnParams, ASubParams, TMixParams>;

namespace detail {

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Evaluators hoist the parameter-only pieces of each density so that
// per-observation work in likelihood loops is minimal.

struct NormalEval {
  double mu, inv_sigma, ln_norm;

  explicit NormalEval(const NormalParams& p)
      : mu(p.mu),
        inv_sigma(1.0 / p.sigma),
        ln_norm(-std::log(p.sigma) - specfun::kLnSqrt2Pi) {}

  double log_pdf(double g) const {
    const double z = (g - mu) * inv_sigma;
    return ln_norm - 0.5 * z * z;
  }

  double cdf(double g) const {
    const double z = (g - mu) * inv_sigma;
    return 0.5 * specfun::erfc(-z / std::sqrt(2.0));
  }

  double draw(RngStream& rng) const { return mu + rng.normal() / inv_sigma; }
};

struct StudentTEval {
  double mu, sigma, nu, inv_sigma, ln_norm, exponent;

  explicit StudentTEval(const StudentTParams& p)
      : StudentTEval(p.mu, p.sigma, p.nu) {}

  StudentTEval(double mu_, double sigma_, double nu_)
      : mu(mu_), sigma(sigma_), nu(nu_), inv_sigma(1.0 / sigma_) {
    ln_norm = specfun::ln_gamma(0.5 * (nu + 1.0)) - specfun::ln_gamma(0.5 * nu) -
              0.5 * std::log(nu * specfun::kPi) - std::log(sigma);
    exponent = 0.5 * (nu + 1.0);
  }

  double log_pdf(double g) const {
    const double z = (g - mu) * inv_sigma;
    return ln_norm - exponent * std::log1p(z * z / nu);
  }

  double cdf(double g) const {
    const double z = (g - mu) * inv_sigma;
    const double x = nu / (nu + z * z);
    const double tail = 0.5 * specfun::reg_inc_beta(x, 0.5 * nu, 0.5);
    return g < mu ? tail : 1.0 - tail;
  }

  double draw(RngStream& rng) const {
    const double z = rng.normal();
    const double v = rng.chi_square(nu);
    return mu + sigma * z * std::sqrt(nu / v);
  }
};

// adln density: asymmetric Laplace with upper rate alpha and lower rate beta,
// convolved with a N(0, sigma^2) kernel, centred at mu.  Written with erfc of
// flipped sign so both terms stay positive and finite in log space.
struct AdLnEval {
  double alpha, beta, mu, sigma;
  double c_up, c_lo;       // ln C + rate*(+-mu) + rate^2 sigma^2 / 2
  double inv_sqrt2_sigma;
  double a_sig2, b_sig2;

  explicit AdLnEval(const AdLnParams& p)
      : alpha(p.alpha), beta(p.beta), mu(p.mu), sigma(p.sigma) {
    const double ln_c = std::log(alpha) + std::log(beta) -
                        std::log(alpha + beta) - std::log(2.0);
    c_up = ln_c + alpha * mu + 0.5 * alpha * alpha * sigma * sigma;
    c_lo = ln_c - beta * mu + 0.5 * beta * beta * sigma * sigma;
    inv_sqrt2_sigma = 1.0 / (std::sqrt(2.0) * sigma);
    a_sig2 = alpha * sigma * sigma;
    b_sig2 = beta * sigma * sigma;
  }

  double log_pdf(double g) const {
    const double t1 = (g - mu - a_sig2) * inv_sqrt2_sigma;
    const double t2 = (g - mu + b_sig2) * inv_sqrt2_sigma;
    const double ln_upper = c_up - alpha * g + specfun::ln_erfc(-t1);
    const double ln_lower = c_lo + beta * g + specfun::ln_erfc(t2);
    return log_add_exp(ln_upper, ln_lower);
  }

  // Beyond the anchors the density is exponential to relative accuracy
  // ~exp(-72), so the tail mass closes in analytic form.
  double lower_anchor() const { return mu - b_sig2 - 12.0 * sigma; }
  double upper_anchor() const { return mu + a_sig2 + 12.0 * sigma; }

  double cdf(double g) const {
    const double lo = lower_anchor();
    if (g <= lo) return std::exp(log_pdf(g)) / beta;
    const double hi = upper_anchor();
    if (g >= hi) return 1.0 - std::exp(log_pdf(g)) / alpha;
    const double base = std::exp(log_pdf(lo)) / beta;
    const double body =
        quad::integrate([this](double x) { return std::exp(log_pdf(x)); }, lo,
                        g, 1e-12);
    return std::min(1.0, base + body);
  }

  double draw(RngStream& rng) const {
    const double side = rng.uniform();
    const double laplace = side < beta / (alpha + beta)
                               ? rng.exponential(alpha)
                               : -rng.exponential(beta);
    return mu + laplace + sigma * rng.normal();
  }
};

struct ASubEval {
  double mu, ln_d;
  double a_l, a_r, inv_a_l, inv_a_r, b_l, b_r, inv_b_l, inv_b_r;
  double mass_l;  // P(g < mu)

  explicit ASubEval(const ASubParams& p)
      : mu(p.mu),
        a_l(p.a_l),
        a_r(p.a_r),
        inv_a_l(1.0 / p.a_l),
        inv_a_r(1.0 / p.a_r),
        b_l(p.b_l),
        b_r(p.b_r),
        inv_b_l(1.0 / p.b_l),
        inv_b_r(1.0 / p.b_r) {
    const double side_l =
        p.a_l * std::pow(p.b_l, inv_b_l) * std::exp(specfun::ln_gamma(1.0 + inv_b_l));
    const double side_r =
        p.a_r * std::pow(p.b_r, inv_b_r) * std::exp(specfun::ln_gamma(1.0 + inv_b_r));
    ln_d = std::log(side_l + side_r);
    mass_l = side_l / (side_l + side_r);
  }

  double log_pdf(double g) const {
    if (g < mu) {
      const double u = (mu - g) * inv_a_l;
      return -ln_d - inv_b_l * std::pow(u, b_l);
    }
    const double u = (g - mu) * inv_a_r;
    return -ln_d - inv_b_r * std::pow(u, b_r);
  }

  double cdf(double g) const {
    if (g < mu) {
      const double u = (mu - g) * inv_a_l;
      const double y = std::pow(u, b_l) * inv_b_l;
      return mass_l * (1.0 - specfun::reg_inc_gamma_lower(inv_b_l, y));
    }
    const double u = (g - mu) * inv_a_r;
    const double y = std::pow(u, b_r) * inv_b_r;
    return mass_l + (1.0 - mass_l) * specfun::reg_inc_gamma_lower(inv_b_r, y);
  }

  double draw(RngStream& rng) const {
    if (rng.uniform() < mass_l) {
      const double x = rng.gamma(inv_b_l);
      return mu - a_l * std::pow(b_l * x, inv_b_l);
    }
    const double x = rng.gamma(inv_b_r);
    return mu + a_r * std::pow(b_r * x, inv_b_r);
  }
};

struct TMixEval {
  std::vector<StudentTEval> comp;
  std::vector<double> ln_weight;
  std::vector<double> weight;

  explicit TMixEval(const TMixParams& p) {
    comp.reserve(p.n_components());
    for (std::size_t j = 0; j < p.n_components(); ++j) {
      comp.emplace_back(p.mu[j], p.sigma[j], p.nu[j]);
      ln_weight.push_back(std::log(p.weight[j]));
      weight.push_back(p.weight[j]);
    }
  }

  double log_pdf(double g) const {
    double acc = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < comp.size(); ++j)
      acc = log_add_exp(acc, ln_weight[j] + comp[j].log_pdf(g));
    return acc;
  }

  double cdf(double g) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < comp.size(); ++j)
      acc += weight[j] * comp[j].cdf(g);
    return acc;
  }

  double draw(RngStream& rng) const {
    const double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t j = 0; j + 1 < comp.size(); ++j) {
      cum += weight[j];
      if (u < cum) return comp[j].draw(rng);
    }
    return comp.back().draw(rng);
  }
};

inline NormalEval make_eval(const NormalParams& p) { return NormalEval(p); }
inline StudentTEval make_eval(const StudentTParams& p) { return StudentTEval(p); }
inline AdLnEval make_eval(const AdLnParams& p) { return AdLnEval(p); }
inline ASubEval make_eval(const ASubParams& p) { return ASubEval(p); }
inline TMixEval make_eval(const TMixParams& p) { return TMixEval(p); }

}  // namespace detail

inline double log_pdf(const ModelParams& params, double g) {
  return std::visit(
      [g](const auto& p) { return detail::make_eval(p).log_pdf(g); }, params);
}

inline double cdf(const ModelParams& params, double g) {
  return std::visit([g](const auto& p) { return detail::make_eval(p).cdf(g); },
                    params);
}

inline double draw(const ModelParams& params, RngStream& rng) {
  return std::visit(
      [&rng](const auto& p) { return detail::make_eval(p).draw(rng); }, params);
}

inline std::vector<double> draw_many(const ModelParams& params, std::size_t n,
                                     RngStream& rng) {
  std::vector<double> out(n);
  std::visit(
      [&](const auto& p) {
        const auto ev = detail::make_eval(p);
        for (auto& g : out) g = ev.draw(rng);
      },
      params);
  return out;
}

inline Family family_of(const ModelParams& params) {
  struct Visitor {
    Family operator()(const NormalParams&) const { return Family::normal; }
    Family operator()(const StudentTParams&) const { return Family::student_t; }
    Family operator()(const AdLnParams&) const { return Family::adln; }
    Family operator()(const ASubParams&) const { return Family::asub; }
    Family operator()(const TMixParams&) const { return Family::tmix; }
  };
  return std::visit(Visitor{}, params);
}

inline ModelSpec spec_of(const ModelParams& params) {
  ModelSpec spec;
  spec.family = family_of(params);
  if (const auto* mix = std::get_if<TMixParams>(&params)) spec.mix_dof = mix->nu;
  return spec;
}

inline std::size_t n_free_params(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::normal: return 2;
    case Family::student_t: return 3;
    case Family::adln: return 4;
    case Family::asub: return 5;
    case Family::tmix: return 3 * spec.n_components() - 1;
  }
  throw Error(errc::invalid_params, "unknown family");
}

inline std::vector<std::string> param_names(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::normal: return {"mu", "sigma"};
    case Family::student_t: return {"mu", "sigma", "nu"};
    case Family::adln: return {"alpha", "beta", "mu", "sigma"};
    case Family::asub: return {"a_l", "a_r", "b_l", "b_r", "mu"};
    case Family::tmix: break;
  }
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= spec.n_components(); ++j) {
    names.push_back("mu" + std::to_string(j));
    names.push_back("sigma" + std::to_string(j));
  }
  for (std::size_t j = 1; j < spec.n_components(); ++j)
    names.push_back("p" + std::to_string(j));
  return names;
}

inline std::vector<double> param_values(const ModelParams& params) {
  struct Visitor {
    std::vector<double> operator()(const NormalParams& p) const {
      return {p.mu, p.sigma};
    }
    std::vector<double> operator()(const StudentTParams& p) const {
      return {p.mu, p.sigma, p.nu};
    }
    std::vector<double> operator()(const AdLnParams& p) const {
      return {p.alpha, p.beta, p.mu, p.sigma};
    }
    std::vector<double> operator()(const ASubParams& p) const {
      return {p.a_l, p.a_r, p.b_l, p.b_r, p.mu};
    }
    std::vector<double> operator()(const TMixParams& p) const {
      std::vector<double> v;
      for (std::size_t j = 0; j < p.n_components(); ++j) {
        v.push_back(p.mu[j]);
        v.push_back(p.sigma[j]);
      }
      for (std::size_t j = 0; j + 1 < p.n_components(); ++j)
        v.push_back(p.weight[j]);
      return v;
    }
  };
  return std::visit(Visitor{}, params);
}

inline ModelParams params_from_values(const ModelSpec& spec,
                                      const std::vector<double>& v) {
  if (v.size() != n_free_params(spec))
    throw Error(errc::invalid_params, "parameter vector length mismatch");
  switch (spec.family) {
    case Family::normal: return NormalParams(v[0], v[1]);
    case Family::student_t: return StudentTParams(v[0], v[1], v[2]);
    case Family::adln: return AdLnParams(v[0], v[1], v[2], v[3]);
    case Family::asub: return ASubParams(v[0], v[1], v[2], v[3], v[4]);
    case Family::tmix: break;
  }
  const std::size_t m = spec.n_components();
  std::vector<double> mu(m), sigma(m), weight(m);
  for (std::size_t j = 0; j < m; ++j) {
    mu[j] = v[2 * j];
    sigma[j] = v[2 * j + 1];
  }
  double rest = 1.0;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    weight[j] = v[2 * m + j];
    rest -= weight[j];
  }
  weight[m - 1] = rest;
  return TMixParams(std::move(mu), std::move(sigma), std::move(weight),
                    spec.mix_dof);
}

}  // namespace growthfit
