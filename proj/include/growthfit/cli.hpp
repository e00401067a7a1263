#pragma once

// Batch runner behind the command-line tool: stats, fit, compare, simulate,
// and diagnose commands producing record files, CSVs, and SVGs plus a
// manifest of completed artifacts.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "growthfit/diagnostics.hpp"
#include "growthfit/distributions.hpp"
#include "growthfit/errors.hpp"
#include "growthfit/estimation.hpp"
#include "growthfit/records.hpp"
#include "growthfit/rng.hpp"
#include "growthfit/samples.hpp"
#include "growthfit/selection.hpp"

namespace growthfit {

struct RunConfig {
  std::string command;  // stats | fit | compare | simulate | diagnose
  std::string input_path;
  std::string input_mode = "panel";  // panel | rates
  std::vector<std::string> families;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string output_dir = "out";
  std::size_t n_starts = 8;
  double upper_q = 0.95;
  double lower_q = 0.05;
  // simulate inputs
  std::string sim_family;
  std::map<std::string, double> sim_params;
  std::size_t sim_n = 0;
};

namespace detail {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(errc::io, "cannot create output dir: " + dir_.string());
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write artifact: " + name);
    out << content;
    if (!out) throw Error(errc::io, "write failed: " + name);
    completed_.push_back(name);
  }

  void write_manifest() {
    std::ofstream out(dir_ / "manifest.txt", std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write manifest");
    for (const auto& name : completed_) out << name << "\n";
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> completed_;
};

inline IngestResult load_input(const RunConfig& config) {
  if (config.input_path.empty())
    throw Error(errc::usage, "command requires --input");
  if (config.input_mode == "panel") return load_panel_csv(config.input_path);
  if (config.input_mode == "rates") return load_rates_csv(config.input_path);
  throw Error(errc::usage, "unknown --mode: " + config.input_mode);
}

inline std::vector<ModelSpec> parse_families(const RunConfig& config) {
  if (config.families.empty())
    throw Error(errc::usage, "command requires --families");
  std::vector<ModelSpec> specs;
  specs.reserve(config.families.size());
  for (const auto& label : config.families) specs.push_back(spec_from_label(label));
  return specs;
}

// Family fits run concurrently; the per-family seed split keeps results
// independent of scheduling.
inline std::vector<FitResult> fit_families(const std::vector<ModelSpec>& specs,
                                           const GrowthSample& sample,
                                           const RunConfig& config) {
  FitOptions base;
  base.n_starts = config.n_starts;
  std::vector<std::future<FitResult>> futures;
  futures.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    FitOptions opts = base;
    opts.seed = derive_seed(config.seed, 1000 + i);
    futures.push_back(std::async(std::launch::async,
                                 [&sample, spec = specs[i], opts] {
                                   return fit_mle(spec, sample, opts);
                                 }));
  }
  std::vector<FitResult> fits;
  fits.reserve(specs.size());
  for (auto& f : futures) fits.push_back(f.get());
  return fits;
}

inline Record fit_record(const FitResult& fit) {
  Record rec;
  rec.add("family", label_for(fit.spec));
  rec.add("n", fit.n_obs);
  rec.add("k", n_free_params(fit.spec));
  rec.add("converged", fit.converged);
  rec.add("log_lik", fit.log_lik);
  const auto names = param_names(fit.spec);
  const auto values = param_values(fit.params);
  for (std::size_t i = 0; i < names.size(); ++i)
    rec.add("params." + names[i], values[i]);
  rec.add("se_defined", fit.std_errors.has_value());
  if (fit.std_errors)
    for (std::size_t i = 0; i < names.size(); ++i)
      rec.add("se." + names[i], (*fit.std_errors)[i]);
  rec.add("n_starts", fit.n_starts_used);
  rec.add("best_start", fit.best_start_index);
  rec.add("aic", aic(n_free_params(fit.spec), fit.log_lik));
  rec.add("bic", bic(n_free_params(fit.spec), fit.n_obs, fit.log_lik));
  rec.add("hqc", hqc(n_free_params(fit.spec), fit.n_obs, fit.log_lik));
  return rec;
}

inline std::string fit_table(const std::vector<FitResult>& fits) {
  std::ostringstream os;
  os << "family      k  converged  log_lik       params\n";
  for (const auto& fit : fits) {
    std::ostringstream params;
    const auto names = param_names(fit.spec);
    const auto values = param_values(fit.params);
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i > 0) params << " ";
      params << names[i] << "=" << format_sig6(values[i]);
    }
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %2zu  %-9s  %-12s  %s\n",
                  label_for(fit.spec).c_str(), n_free_params(fit.spec),
                  fit.converged ? "yes" : "no",
                  format_sig6(fit.log_lik).c_str(), params.str().c_str());
    os << line;
  }
  return os.str();
}

inline std::string ranking_table_text(const RankingTable& table) {
  std::ostringstream os;
  os << "model       k      ln L*          AIC          BIC          HQC\n";
  for (const auto& row : table.rows) {
    std::string label = row.model_label;
    if (!row.converged) label += "!";
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %2zu %10s %12s%s %12s%s %12s%s\n",
                  label.c_str(), row.k, format_sig6(row.log_lik).c_str(),
                  format_sig6(row.aic).c_str(),
                  row.model_label == table.winner_aic ? "*" : " ",
                  format_sig6(row.bic).c_str(),
                  row.model_label == table.winner_bic ? "*" : " ",
                  format_sig6(row.hqc).c_str(),
                  row.model_label == table.winner_hqc ? "*" : " ");
    os << line;
  }
  os << "winners: aic=" << table.winner_aic << " bic=" << table.winner_bic
     << " hqc=" << table.winner_hqc << "\n";
  if (table.tie_aic || table.tie_bic || table.tie_hqc) os << "ties present\n";
  return os.str();
}

inline ModelParams sim_params_from_config(const RunConfig& config) {
  const ModelSpec spec = spec_from_label(config.sim_family);
  const auto names = param_names(spec);
  std::vector<double> values;
  values.reserve(names.size());
  for (const auto& name : names) {
    const auto it = config.sim_params.find(name);
    if (it == config.sim_params.end())
      throw Error(errc::usage, "simulate requires --" + name);
    values.push_back(it->second);
  }
  return params_from_values(spec, values);
}

inline void run_stats(const RunConfig& config, ArtifactWriter& writer) {
  const IngestResult input = load_input(config);
  const DescriptiveStats stats = describe(input.sample);

  Record rec;
  rec.add("input", config.input_path);
  rec.add("mode", config.input_mode);
  rec.add("n_input", input.report.n_input);
  rec.add("n_valid", input.report.n_valid);
  rec.add("n_rejected", input.report.rejected.size());
  rec.add("n", stats.n_obs);
  rec.add("mean", stats.mean);
  rec.add("sd", stats.sd);
  rec.add("min", stats.min);
  rec.add("max", stats.max);
  std::ostringstream records;
  write_records(records, {rec});
  writer.write("stats.records", records.str());

  std::ostringstream text;
  text << "n       " << stats.n_obs << "\n"
       << "mean    " << format_sig6(stats.mean) << "\n"
       << "sd      " << format_sig6(stats.sd) << "\n"
       << "min     " << format_sig6(stats.min) << "\n"
       << "max     " << format_sig6(stats.max) << "\n"
       << "rejected " << input.report.rejected.size() << " of "
       << input.report.n_input << "\n";
  writer.write("stats.txt", text.str());
}

inline void run_fit(const RunConfig& config, ArtifactWriter& writer) {
  const IngestResult input = load_input(config);
  const auto specs = parse_families(config);
  const auto fits = fit_families(specs, input.sample, config);
  for (const auto& fit : fits) {
    std::ostringstream records;
    write_records(records, {fit_record(fit)});
    writer.write("fit_" + label_for(fit.spec) + ".records", records.str());
  }
  writer.write("fit.txt", fit_table(fits));
}

inline void run_compare(const RunConfig& config, ArtifactWriter& writer) {
  const IngestResult input = load_input(config);
  const auto specs = parse_families(config);
  const auto fits = fit_families(specs, input.sample, config);
  const RankingTable table = rank_models(fits);

  std::vector<Record> recs;
  for (const auto& fit : fits) recs.push_back(fit_record(fit));
  Record winners;
  winners.add("winner_aic", table.winner_aic);
  winners.add("winner_bic", table.winner_bic);
  winners.add("winner_hqc", table.winner_hqc);
  winners.add("tie_aic", table.tie_aic);
  winners.add("tie_bic", table.tie_bic);
  winners.add("tie_hqc", table.tie_hqc);
  recs.push_back(std::move(winners));
  std::ostringstream records;
  write_records(records, recs);
  writer.write("compare.records", records.str());
  writer.write("compare.txt", ranking_table_text(table));
}

inline void run_simulate(const RunConfig& config, ArtifactWriter& writer) {
  if (!config.seed_set) throw Error(errc::usage, "simulate requires --seed");
  if (config.sim_n == 0) throw Error(errc::usage, "simulate requires --n > 0");
  const ModelParams params = sim_params_from_config(config);
  RngStream rng(derive_seed(config.seed, 0));
  const std::vector<double> values = draw_many(params, config.sim_n, rng);

  std::ostringstream csv;
  csv << "g\n";
  for (double g : values) csv << format_full(g) << "\n";
  writer.write("sample.csv", csv.str());

  Record rec;
  rec.add("family", config.sim_family);
  rec.add("n", config.sim_n);
  rec.add("seed", std::to_string(config.seed));
  const ModelSpec spec = spec_from_label(config.sim_family);
  const auto names = param_names(spec);
  const auto vals = param_values(params);
  for (std::size_t i = 0; i < names.size(); ++i)
    rec.add("params." + names[i], vals[i]);
  std::ostringstream records;
  write_records(records, {rec});
  writer.write("sim_params.records", records.str());
}

inline void run_diagnose(const RunConfig& config, ArtifactWriter& writer) {
  const IngestResult input = load_input(config);
  const auto specs = parse_families(config);
  const auto fits = fit_families(specs, input.sample, config);

  const RankSeries emp_upper = empirical_log_rank(input.sample);
  const RankSeries emp_lower = empirical_log_corank(input.sample);
  std::vector<double> upper_grid, lower_grid;
  upper_grid.reserve(emp_upper.points.size());
  for (const auto& pt : emp_upper.points) upper_grid.push_back(pt.g);
  lower_grid.reserve(emp_lower.points.size());
  for (const auto& pt : emp_lower.points) lower_grid.push_back(pt.g);
  const std::size_t n = input.sample.size();

  for (const auto& fit : fits) {
    const std::string label = label_for(fit.spec);
    std::vector<RankSeries> series;
    series.push_back(emp_upper);
    series.push_back(emp_lower);
    series.push_back(model_log_rank(fit.params, upper_grid, n));
    series.push_back(model_log_corank(fit.params, lower_grid, n));

    std::ostringstream csv;
    write_series_csv(csv, series);
    writer.write("diag_" + label + "_series.csv", csv.str());

    std::ostringstream svg;
    render_svg(svg, series, label);
    writer.write("diag_" + label + ".svg", svg.str());
  }

  const TailFit tails =
      fit_exponential_tails(input.sample, config.upper_q, config.lower_q);
  const TentProfile tent = tent_profile(input.sample, tails);
  Record rec;
  rec.add("upper_q", config.upper_q);
  rec.add("lower_q", config.lower_q);
  rec.add("g_m", tails.g_m);
  rec.add("g_M", tails.g_M);
  rec.add("c_u", tails.c_u);
  rec.add("c_l", tails.c_l);
  rec.add("n_u", tails.n_u);
  rec.add("n_l", tails.n_l);
  rec.add("upper_residual", tent.upper_residual);
  rec.add("lower_residual", tent.lower_residual);
  std::ostringstream records;
  write_records(records, {rec});
  writer.write("tails.records", records.str());
}

}  // namespace detail

// Executes one command; artifacts land in config.output_dir, the manifest of
// completed artifacts is always written last (also on failure, before the
// error propagates, so partial outputs are flagged).
inline void run(const RunConfig& config) {
  detail::ArtifactWriter writer{std::filesystem::path(config.output_dir)};
  try {
    if (config.command == "stats") {
      detail::run_stats(config, writer);
    } else if (config.command == "fit") {
      detail::run_fit(config, writer);
    } else if (config.command == "compare") {
      detail::run_compare(config, writer);
    } else if (config.command == "simulate") {
      detail::run_simulate(config, writer);
    } else if (config.command == "diagnose") {
      detail::run_diagnose(config, writer);
    } else {
      throw Error(errc::usage, "unknown command: " + config.command);
    }
  } catch (...) {
    writer.write_manifest();
    throw;
  }
  writer.write_manifest();
}

inline int run_with_status(const RunConfig& config) noexcept {
  try {
    run(config);
    return 0;
  } catch (const Error& err) {
    std::cerr << "error: " << err.cls() << ": " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: internal: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace growthfit
