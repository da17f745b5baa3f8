// xfbci command-line front end. All real work happens behind the C API; this
// file only turns flags into key=value pairs and maps status codes to exit
// codes (0 success, 1 runtime, 2 config).
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "xfbci.h"

namespace {

// Ordered settings destined for xfbci_run_create. The config file (if any)
// is spliced first so explicit flags override it.
struct PairSink {
  std::vector<std::string> pairs;

  void put(const std::string& key, const std::string& value) { pairs.push_back(key + "=" + value); }
};

// Registers an option that, when supplied, forwards its raw text under `key`.
CLI::Option* forward(CLI::App& app, PairSink& sink, const std::string& flag, const std::string& key,
                     const std::string& help) {
  return app.add_option_function<std::string>(
      flag, [&sink, key](const std::string& v) { sink.put(key, v); }, help);
}

void add_fit_options(CLI::App& app, PairSink& sink) {
  forward(app, sink, "--method", "method", "xfbci | individual | ditto | central");
  forward(app, sink, "--seed", "seed", "master seed");
  forward(app, sink, "--out-dir", "out_dir", "output directory (default $XFBCI_OUT_DIR or ./out)");
  forward(app, sink, "--rounds", "ep.rounds", "communication rounds");
  forward(app, sink, "--damping", "ep.damping", "EP damping (0 = 1/K)");
  forward(app, sink, "--alpha", "ep.alpha", "covariance regularizer");
  forward(app, sink, "--cov-mode", "ep.cov_mode", "jitter | scaled_identity");
  forward(app, sink, "--tau0", "ep.tau0", "prior precision");
  forward(app, sink, "--psd-floor", "ep.psd_floor", "eigenvalue floor for repairs");
  forward(app, sink, "--warm-start", "ep.warm_start", "warm-start chains across rounds (0|1)");
  forward(app, sink, "--sgld-lr", "sgld.lr", "SGLD step size");
  forward(app, sink, "--sgld-steps", "sgld.steps", "SGLD steps per tilted fit");
  forward(app, sink, "--burn-in", "sgld.burn_in", "SGLD burn-in");
  forward(app, sink, "--batch", "sgld.batch", "minibatch fraction");
  forward(app, sink, "--noise-is-sd", "sgld.noise_is_sd", "read step size as noise sd (0|1)");
  forward(app, sink, "--lr-decay", "sgld.lr_decay", "polynomial step-size decay exponent");
  forward(app, sink, "--ditto-rounds", "ditto.rounds", "Ditto communication rounds");
  forward(app, sink, "--ditto-local-lr", "ditto.local_lr", "Ditto local step size");
  forward(app, sink, "--ditto-global-lr", "ditto.global_lr", "Ditto global step size");
  forward(app, sink, "--ditto-local-steps", "ditto.local_steps", "Ditto local steps per round");
  forward(app, sink, "--ditto-global-steps", "ditto.global_steps", "Ditto personalization steps");
  forward(app, sink, "--lambda-prox", "ditto.lambda_prox", "Ditto proximal weight");
  forward(app, sink, "--ditto-batch", "ditto.batch", "Ditto minibatch fraction (0 = full batch)");
  app.add_option_function<std::vector<std::string>>(
      "--set",
      [&sink](const std::vector<std::string>& entries) {
        for (const auto& e : entries) sink.pairs.push_back(e);
      },
      "extra key=value setting (repeatable)");
}

int run(const std::string& command, const PairSink& sink) {
  std::vector<std::string> all;
  all.push_back("command=" + command);
  all.insert(all.end(), sink.pairs.begin(), sink.pairs.end());
  std::vector<const char*> raw;
  raw.reserve(all.size());
  for (const auto& s : all) raw.push_back(s.c_str());

  xfbci_run* handle = nullptr;
  int rc = xfbci_run_create(raw.data(), static_cast<int>(raw.size()), &handle);
  if (rc != XFBCI_OK) {
    std::fprintf(stderr, "error: %s\n", xfbci_last_error());
    return rc;
  }
  rc = xfbci_run_execute(handle);
  if (rc != XFBCI_OK) {
    std::fprintf(stderr, "error: %s\n", xfbci_last_error());
    xfbci_run_destroy(handle);
    return rc;
  }
  std::fputs(xfbci_run_summary(handle), stdout);
  xfbci_run_destroy(handle);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xfbci: federated Bayesian causal inference"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(xfbci_version()));
  app.failure_message(CLI::FailureMessage::help);

  PairSink sim, ana, dmp;

  CLI::App* simulate = app.add_subcommand("simulate", "run a synthetic benchmark case");
  forward(*simulate, sim, "--config", "config", "key=value config file");
  forward(*simulate, sim, "--case", "case", "c1..c7 | extreme");
  forward(*simulate, sim, "--reps", "reps", "replications");
  forward(*simulate, sim, "--jobs", "jobs", "max concurrent replications");
  simulate->add_flag_callback("--telemetry", [&] { sim.put("telemetry", "1"); },
                              "also write per-round telemetry CSV");
  add_fit_options(*simulate, sim);

  CLI::App* analyze = app.add_subcommand("analyze", "run the real-data CSV workflow");
  forward(*analyze, ana, "--config", "config", "key=value config file");
  analyze->add_option_function<std::vector<std::string>>(
      "--data",
      [&ana](const std::vector<std::string>& paths) {
        std::string joined;
        for (const auto& p : paths) {
          if (!joined.empty()) joined += ',';
          joined += p;
        }
        ana.put("data", joined);
      },
      "client CSV files (repeat or comma-separate)");
  forward(*analyze, ana, "--outcome", "outcome", "outcome column name");
  forward(*analyze, ana, "--treatment", "treatment", "treatment column (default: each variable in turn)");
  forward(*analyze, ana, "--binarize", "binarize", "median | threshold");
  forward(*analyze, ana, "--threshold", "threshold", "cutoff for binarize=threshold");
  analyze->add_flag_callback("--add-intercept", [&] { ana.put("add_intercept", "1"); },
                             "append a constant covariate to the propensity model");
  add_fit_options(*analyze, ana);

  CLI::App* dump = app.add_subcommand("dump", "write a generated world as CSV files");
  forward(*dump, dmp, "--config", "config", "key=value config file");
  forward(*dump, dmp, "--case", "case", "c1..c7 | extreme");
  forward(*dump, dmp, "--seed", "seed", "master seed");
  forward(*dump, dmp, "--out-dir", "out_dir", "output directory");
  dump->add_flag_callback("--ehd", [&] { dmp.put("ehd", "1"); },
                          "write the bundled 2-client print-process analog instead of a case");
  forward(*dump, dmp, "--inject-c", "inject_c", "injected effect size for the analog tables");
  forward(*dump, dmp, "--inject-target", "inject_target", "0-based analog variable receiving the effect");
  dump->add_option_function<std::vector<std::string>>(
      "--set",
      [&dmp](const std::vector<std::string>& entries) {
        for (const auto& e : entries) dmp.pairs.push_back(e);
      },
      "extra key=value setting (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : XFBCI_ERR_CONFIG;  // help/version exit 0, parse errors exit 2
  }

  if (simulate->parsed()) return run("simulate", sim);
  if (analyze->parsed()) return run("analyze", ana);
  return run("dump", dmp);
}
