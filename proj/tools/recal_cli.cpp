#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "recal/errors.hpp"
#include "recal/harness.hpp"

namespace {

struct CliOptions {
  std::string experiment = "bernoulli_expert";
  std::int64_t t = 20000;
  int m = 10;
  int n = 10;
  std::string loss = "l2";
  std::uint64_t seed = 1;
  std::int64_t report_every = 100;
  std::string out;
  std::string curve_out;
  std::string input;
};

void add_common_flags(CLI::App& cmd, CliOptions& opt) {
  cmd.add_option("--M", opt.m, "bucket count");
  cmd.add_option("--N", opt.n, "grid resolution");
  cmd.add_option("--loss", opt.loss, "loss: l2, log, misclass, l1, hinge");
  cmd.add_option("--seed", opt.seed, "random seed");
  cmd.set_config("--config", "", "key=value config file; flags take precedence");
}

int run_main(const CliOptions& opt) {
  recal::ExperimentConfig config;
  config.experiment = recal::experiment_from_name(opt.experiment);
  config.t = opt.t;
  config.m = opt.m;
  config.n = opt.n;
  config.loss = recal::LossSpec::make(opt.loss);
  config.seed = opt.seed;
  config.report_every = opt.report_every;
  config.out = opt.out;
  config.curve_out = opt.curve_out;
  config.input = opt.input;
  const recal::ExperimentResult result = recal::run_experiment(config);
  std::fputs(recal::summary_text(result.summary).c_str(), stdout);
  return 0;
}

int recalibrate_main(const CliOptions& opt) {
  if (opt.input.empty()) throw std::invalid_argument("recalibrate requires --input");
  if (opt.out.empty()) throw std::invalid_argument("recalibrate requires --out");
  const recal::ExperimentSummary summary = recal::recalibrate_csv(
      opt.input, opt.out, opt.m, opt.n, opt.seed, recal::LossSpec::make(opt.loss));
  std::fputs(recal::summary_text(summary).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online recalibration of probability forecasts"};
  app.require_subcommand(1);

  CliOptions run_opt;
  CLI::App* run_cmd = app.add_subcommand("run", "run a synthetic or csv experiment");
  run_cmd->add_option("--experiment", run_opt.experiment,
                      "bernoulli_expert, adversarial, pattern_l1, covariate, csv");
  run_cmd->add_option("--T", run_opt.t, "number of steps");
  run_cmd->add_option("--report-every", run_opt.report_every, "series row cadence");
  run_cmd->add_option("--out", run_opt.out, "metrics time-series csv path");
  run_cmd->add_option("--curve-out", run_opt.curve_out, "calibration curve csv path");
  run_cmd->add_option("--input", run_opt.input, "input csv for the csv experiment");
  add_common_flags(*run_cmd, run_opt);

  CliOptions recal_opt;
  CLI::App* recal_cmd = app.add_subcommand("recalibrate", "annotate a csv with calibrated p_cal");
  recal_cmd->add_option("--input", recal_opt.input, "input csv with p_f and y columns");
  recal_cmd->add_option("--out", recal_opt.out, "annotated output csv path");
  add_common_flags(*recal_cmd, recal_opt);

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return run_main(run_opt);
    return recalibrate_main(recal_opt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const recal::data_error& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
