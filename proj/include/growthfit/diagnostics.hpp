#pragma once

// Log-rank / log-corank series, exponential tail fits, and tent-profile
// comparisons, plus CSV and SVG emitters for the series.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "growthfit/distributions.hpp"
#include "growthfit/errors.hpp"
#include "growthfit/records.hpp"
#include "growthfit/samples.hpp"

namespace growthfit {

enum class SeriesKind { empirical_upper, empirical_lower, model_upper, model_lower };

inline std::string kind_label(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::empirical_upper: return "empirical_upper";
    case SeriesKind::empirical_lower: return "empirical_lower";
    case SeriesKind::model_upper: return "model_upper";
    case SeriesKind::model_lower: return "model_lower";
  }
  throw Error(errc::domain, "unknown series kind");
}

struct RankPoint {
  double g = 0.0;
  double log_rank = 0.0;
};

struct RankSeries {
  std::vector<RankPoint> points;
  SeriesKind kind = SeriesKind::empirical_upper;
  std::size_t n_ref = 0;
  std::size_t n_omitted = 0;  // model points dropped for log underflow
};

// Rank 1 at the extreme observation; ties share consecutive ranks.
inline RankSeries empirical_log_rank(const GrowthSample& sample) {
  if (sample.values.size() < 2)
    throw Error(errc::insufficient_data, "rank series requires >= 2 points");
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  RankSeries series;
  series.kind = SeriesKind::empirical_upper;
  series.n_ref = sorted.size();
  series.points.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    series.points.push_back({sorted[i], std::log(static_cast<double>(i + 1))});
  return series;
}

inline RankSeries empirical_log_corank(const GrowthSample& sample) {
  if (sample.values.size() < 2)
    throw Error(errc::insufficient_data, "rank series requires >= 2 points");
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  RankSeries series;
  series.kind = SeriesKind::empirical_lower;
  series.n_ref = sorted.size();
  series.points.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    series.points.push_back({sorted[i], std::log(static_cast<double>(i + 1))});
  return series;
}

template <class CdfFn>
RankSeries model_log_rank_fn(CdfFn&& model_cdf, const std::vector<double>& g_grid,
                             std::size_t n) {
  if (n < 1) throw Error(errc::domain, "model rank series requires n >= 1");
  RankSeries series;
  series.kind = SeriesKind::model_upper;
  series.n_ref = n;
  for (double g : g_grid) {
    const double survival = 1.0 - model_cdf(g);
    const double lr = std::log(static_cast<double>(n) * survival);
    if (lr < -745.0 || !std::isfinite(lr)) {
      ++series.n_omitted;
      continue;
    }
    series.points.push_back({g, lr});
  }
  return series;
}

template <class CdfFn>
RankSeries model_log_corank_fn(CdfFn&& model_cdf,
                               const std::vector<double>& g_grid, std::size_t n) {
  if (n < 1) throw Error(errc::domain, "model rank series requires n >= 1");
  RankSeries series;
  series.kind = SeriesKind::model_lower;
  series.n_ref = n;
  for (double g : g_grid) {
    const double lr = std::log(static_cast<double>(n) * model_cdf(g));
    if (lr < -745.0 || !std::isfinite(lr)) {
      ++series.n_omitted;
      continue;
    }
    series.points.push_back({g, lr});
  }
  return series;
}

inline RankSeries model_log_rank(const ModelParams& params,
                                 const std::vector<double>& g_grid,
                                 std::size_t n) {
  return model_log_rank_fn([&params](double g) { return cdf(params, g); },
                           g_grid, n);
}

inline RankSeries model_log_corank(const ModelParams& params,
                                   const std::vector<double>& g_grid,
                                   std::size_t n) {
  return model_log_corank_fn([&params](double g) { return cdf(params, g); },
                             g_grid, n);
}

struct TailFit {
  double c_u = 0.0;  // upper tail rate
  double c_l = 0.0;  // lower tail rate
  double g_m = 0.0;  // lower threshold of the upper law
  double g_M = 0.0;  // upper threshold of the lower law
  std::size_t n_u = 0;
  std::size_t n_l = 0;
};

namespace detail {

// Linear-interpolation quantile on an ascending-sorted vector.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

// Exponential MLE on threshold excesses: c = 1 / mean excess.
inline TailFit fit_exponential_tails(const GrowthSample& sample,
                                     double upper_q = 0.95,
                                     double lower_q = 0.05) {
  if (!(lower_q > 0.0) || !(upper_q < 1.0) || !(lower_q < upper_q))
    throw Error(errc::domain, "tail quantiles must satisfy 0 < lower < upper < 1");
  if (sample.values.size() < 2)
    throw Error(errc::insufficient_data, "tail fit requires >= 2 points");
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());

  TailFit fit;
  fit.g_m = detail::quantile_sorted(sorted, upper_q);
  fit.g_M = detail::quantile_sorted(sorted, lower_q);

  double upper_sum = 0.0, lower_sum = 0.0;
  for (double g : sorted) {
    if (g >= fit.g_m) {
      upper_sum += g - fit.g_m;
      ++fit.n_u;
    }
    if (g <= fit.g_M) {
      lower_sum += fit.g_M - g;
      ++fit.n_l;
    }
  }
  if (fit.n_u < 20 || fit.n_l < 20)
    throw Error(errc::insufficient_data,
                "tail fit requires >= 20 observations beyond each threshold");
  if (upper_sum <= 0.0 || lower_sum <= 0.0)
    throw Error(errc::degenerate_sample, "zero mean excess in tail fit");
  fit.c_u = static_cast<double>(fit.n_u) / upper_sum;
  fit.c_l = static_cast<double>(fit.n_l) / lower_sum;
  return fit;
}

struct TentProfile {
  RankSeries empirical_upper;
  RankSeries empirical_lower;
  RankSeries line_upper;  // ln(n_u) - c_u (g - g_m) at the upper-tail points
  RankSeries line_lower;  // ln(n_l) + c_l (g - g_M) at the lower-tail points
  double upper_residual = 0.0;  // mean |empirical - line| beyond the threshold
  double lower_residual = 0.0;
};

inline TentProfile tent_profile(const GrowthSample& sample, const TailFit& fit) {
  TentProfile profile;
  profile.empirical_upper = empirical_log_rank(sample);
  profile.empirical_lower = empirical_log_corank(sample);

  profile.line_upper.kind = SeriesKind::model_upper;
  profile.line_upper.n_ref = fit.n_u;
  double acc = 0.0;
  for (const auto& pt : profile.empirical_upper.points) {
    if (pt.g < fit.g_m) continue;
    const double line = std::log(static_cast<double>(fit.n_u)) -
                        fit.c_u * (pt.g - fit.g_m);
    profile.line_upper.points.push_back({pt.g, line});
    acc += std::abs(pt.log_rank - line);
  }
  profile.upper_residual = acc / static_cast<double>(profile.line_upper.points.size());

  profile.line_lower.kind = SeriesKind::model_lower;
  profile.line_lower.n_ref = fit.n_l;
  acc = 0.0;
  for (const auto& pt : profile.empirical_lower.points) {
    if (pt.g > fit.g_M) continue;
    const double line = std::log(static_cast<double>(fit.n_l)) +
                        fit.c_l * (pt.g - fit.g_M);
    profile.line_lower.points.push_back({pt.g, line});
    acc += std::abs(pt.log_rank - line);
  }
  profile.lower_residual = acc / static_cast<double>(profile.line_lower.points.size());
  return profile;
}

inline void write_series_csv(std::ostream& os,
                             const std::vector<RankSeries>& series_list) {
  os << "kind,g,log_rank\n";
  for (const auto& series : series_list)
    for (const auto& pt : series.points)
      os << kind_label(series.kind) << "," << format_full(pt.g) << ","
         << format_full(pt.log_rank) << "\n";
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf);
}

}  // namespace detail

// 800x600 viewport; empirical points as blue dots, model series as red
// polylines, legend naming the model.
inline void render_svg(std::ostream& os, const std::vector<RankSeries>& series_list,
                       const std::string& model_label) {
  double g_min = std::numeric_limits<double>::infinity();
  double g_max = -g_min;
  double r_min = g_min;
  double r_max = -g_min;
  for (const auto& series : series_list) {
    for (const auto& pt : series.points) {
      g_min = std::min(g_min, pt.g);
      g_max = std::max(g_max, pt.g);
      r_min = std::min(r_min, pt.log_rank);
      r_max = std::max(r_max, pt.log_rank);
    }
  }
  if (!(g_min <= g_max))
    throw Error(errc::domain, "svg rendering requires at least one point");
  if (g_max - g_min < 1e-12) g_max = g_min + 1e-12;
  if (r_max - r_min < 1e-12) r_max = r_min + 1e-12;

  constexpr double kLeft = 70.0, kRight = 780.0, kTop = 30.0, kBottom = 550.0;
  const auto px = [&](double g) {
    return kLeft + (g - g_min) / (g_max - g_min) * (kRight - kLeft);
  };
  const auto py = [&](double r) {
    return kBottom - (r - r_min) / (r_max - r_min) * (kBottom - kTop);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
        "viewBox=\"0 0 800 600\">\n";
  os << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<line x1=\"70\" y1=\"550\" x2=\"780\" y2=\"550\" stroke=\"black\"/>\n";
  os << "<line x1=\"70\" y1=\"30\" x2=\"70\" y2=\"550\" stroke=\"black\"/>\n";
  os << "<text x=\"425\" y=\"585\" text-anchor=\"middle\" font-size=\"14\">g</text>\n";
  os << "<text x=\"20\" y=\"290\" text-anchor=\"middle\" font-size=\"14\" "
        "transform=\"rotate(-90 20 290)\">ln(rank)</text>\n";
  os << "<text x=\"70\" y=\"568\" text-anchor=\"middle\" font-size=\"11\">"
     << format_sig6(g_min) << "</text>\n";
  os << "<text x=\"780\" y=\"568\" text-anchor=\"middle\" font-size=\"11\">"
     << format_sig6(g_max) << "</text>\n";
  os << "<text x=\"62\" y=\"554\" text-anchor=\"end\" font-size=\"11\">"
     << format_sig6(r_min) << "</text>\n";
  os << "<text x=\"62\" y=\"38\" text-anchor=\"end\" font-size=\"11\">"
     << format_sig6(r_max) << "</text>\n";
  os << "<circle cx=\"600\" cy=\"24\" r=\"3\" fill=\"blue\"/>\n";
  os << "<text x=\"608\" y=\"28\" font-size=\"12\">empirical</text>\n";
  os << "<line x1=\"690\" y1=\"24\" x2=\"706\" y2=\"24\" stroke=\"red\" "
        "stroke-width=\"2\"/>\n";
  os << "<text x=\"712\" y=\"28\" font-size=\"12\">" << model_label
     << "</text>\n";

  for (const auto& series : series_list) {
    const bool empirical = series.kind == SeriesKind::empirical_upper ||
                           series.kind == SeriesKind::empirical_lower;
    if (empirical) {
      for (const auto& pt : series.points)
        os << "<circle cx=\"" << detail::svg_num(px(pt.g)) << "\" cy=\""
           << detail::svg_num(py(pt.log_rank)) << "\" r=\"2\" fill=\"blue\"/>\n";
    } else if (!series.points.empty()) {
      os << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < series.points.size(); ++i) {
        if (i > 0) os << " ";
        os << detail::svg_num(px(series.points[i].g)) << ","
           << detail::svg_num(py(series.points[i].log_rank));
      }
      os << "\"/>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace growthfit
