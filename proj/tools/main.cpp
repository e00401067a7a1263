#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "growthfit/cli.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fit and diagnose growth-rate distributions"};
  app.require_subcommand(1);

  growthfit::RunConfig config;
  std::string families_csv;

  const auto add_seed = [&config](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&config](std::uint64_t seed) {
          config.seed = seed;
          config.seed_set = true;
        },
        "Master seed; all randomness derives from it");
  };
  const auto add_out = [&config](CLI::App* cmd) {
    cmd->add_option("--out", config.output_dir, "Output directory");
  };
  const auto add_input = [&config](CLI::App* cmd) {
    cmd->add_option("--input", config.input_path, "Input CSV path");
    cmd->add_option("--mode", config.input_mode,
                    "Input format: panel (id,pop_start,pop_end) or rates (g)");
  };
  const auto add_fitting = [&](CLI::App* cmd) {
    cmd->add_option("--families", families_csv,
                    "Comma-separated model labels, e.g. normal,student_t,2st12");
    cmd->add_option("--starts", config.n_starts, "Optimizer starts per family");
  };

  CLI::App* stats = app.add_subcommand("stats", "Descriptive statistics");
  add_input(stats);
  add_out(stats);
  add_seed(stats);

  CLI::App* fit = app.add_subcommand("fit", "Fit model families by ML");
  add_input(fit);
  add_fitting(fit);
  add_out(fit);
  add_seed(fit);

  CLI::App* compare = app.add_subcommand("compare", "Rank families by AIC/BIC/HQC");
  add_input(compare);
  add_fitting(compare);
  add_out(compare);
  add_seed(compare);

  CLI::App* simulate = app.add_subcommand("simulate", "Draw a synthetic sample");
  simulate->add_option("--family", config.sim_family, "Model label");
  simulate->add_option("--n", config.sim_n, "Number of draws");
  add_out(simulate);
  add_seed(simulate);
  const std::vector<std::string> param_keys = {
      "mu",  "sigma",  "nu",  "alpha",  "beta", "a_l",    "a_r", "b_l", "b_r",
      "mu1", "sigma1", "mu2", "sigma2", "mu3",  "sigma3", "p1",  "p2"};
  for (const auto& key : param_keys) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    simulate->add_option_function<double>(
        flag, [&config, key](double v) { config.sim_params[key] = v; },
        "Parameter " + key);
  }

  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Log-rank series, tail fits, SVG plots");
  add_input(diagnose);
  add_fitting(diagnose);
  add_out(diagnose);
  add_seed(diagnose);
  diagnose->add_option("--upper-q", config.upper_q, "Upper tail threshold quantile");
  diagnose->add_option("--lower-q", config.lower_q, "Lower tail threshold quantile");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::cerr << "error: usage: " << err.what() << "\n";
    return 1;
  }

  config.command = app.get_subcommands().front()->get_name();
  config.families = split_list(families_csv);
  return growthfit::run_with_status(config);
}
