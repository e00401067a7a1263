#pragma once

// Information criteria and model ranking.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "growthfit/distributions.hpp"
#include "growthfit/errors.hpp"
#include "growthfit/estimation.hpp"

namespace growthfit {

inline double aic(std::size_t k, double log_lik) {
  return 2.0 * static_cast<double>(k) - 2.0 * log_lik;
}

inline double bic(std::size_t k, std::size_t n, double log_lik) {
  if (n < 1) throw Error(errc::domain, "bic requires n >= 1");
  return static_cast<double>(k) * std::log(static_cast<double>(n)) -
         2.0 * log_lik;
}

inline double hqc(std::size_t k, std::size_t n, double log_lik) {
  if (n < 3) throw Error(errc::domain, "hqc requires n >= 3");
  return 2.0 * static_cast<double>(k) *
             std::log(std::log(static_cast<double>(n))) -
         2.0 * log_lik;
}

struct CriteriaRow {
  std::string model_label;
  std::size_t k = 0;
  std::size_t n = 0;
  double log_lik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double hqc = 0.0;
  bool converged = false;
};

struct RankingTable {
  std::vector<CriteriaRow> rows;  // sorted by AIC ascending
  std::string winner_aic;
  std::string winner_bic;
  std::string winner_hqc;
  bool tie_aic = false;
  bool tie_bic = false;
  bool tie_hqc = false;
};

inline RankingTable rank_models(const std::vector<FitResult>& fits) {
  if (fits.empty()) throw Error(errc::domain, "rank_models requires fits");
  for (const auto& fit : fits)
    if (fit.n_obs != fits.front().n_obs)
      throw Error(errc::domain, "fits compare different sample sizes");

  RankingTable table;
  for (const auto& fit : fits) {
    CriteriaRow row;
    row.model_label = label_for(fit.spec);
    row.k = n_free_params(fit.spec);
    row.n = fit.n_obs;
    row.log_lik = fit.log_lik;
    row.aic = aic(row.k, row.log_lik);
    row.bic = bic(row.k, row.n, row.log_lik);
    row.hqc = hqc(row.k, row.n, row.log_lik);
    row.converged = fit.converged;
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const CriteriaRow& a, const CriteriaRow& b) {
                     if (a.aic != b.aic) return a.aic < b.aic;
                     return a.model_label < b.model_label;
                   });

  const auto pick_winner = [&table](double CriteriaRow::*column,
                                    std::string& winner, bool& tie) {
    const CriteriaRow* best = nullptr;
    std::size_t n_at_min = 0;
    for (const auto& row : table.rows) {
      if (!row.converged) continue;
      if (best == nullptr || row.*column < best->*column) {
        best = &row;
        n_at_min = 1;
      } else if (row.*column == best->*column) {
        ++n_at_min;
      }
    }
    if (best == nullptr)
      throw Error(errc::domain, "rank_models requires a converged fit");
    winner = best->model_label;
    tie = n_at_min > 1;
  };
  pick_winner(&CriteriaRow::aic, table.winner_aic, table.tie_aic);
  pick_winner(&CriteriaRow::bic, table.winner_bic, table.tie_bic);
  pick_winner(&CriteriaRow::hqc, table.winner_hqc, table.tie_hqc);
  return table;
}

}  // namespace growthfit
