#include "xfbci.h"

#include <cstring>
#include <exception>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "config.hpp"
#include "pipeline.hpp"

namespace {

thread_local std::string g_last_error;

int set_error(const std::string& msg, int code) {
  g_last_error = msg;
  return code;
}

int code_of(const xfbci::Error& e) {
  return e.code() == xfbci::Errc::config ? XFBCI_ERR_CONFIG : XFBCI_ERR_RUNTIME;
}

}  // namespace

struct xfbci_run {
  xfbci::RunConfig cfg;
  bool executed = false;
  std::string summary;
  std::string output_path;
  std::map<std::string, double> metrics;
};

extern "C" {

const char* xfbci_version(void) { return "1.0.0"; }

const char* xfbci_last_error(void) { return g_last_error.c_str(); }

int xfbci_run_create(const char* const* pairs, int n_pairs, xfbci_run** out) {
  if (out == nullptr) return set_error("xfbci_run_create: out is NULL", XFBCI_ERR_CONFIG);
  *out = nullptr;
  if (n_pairs < 0 || (n_pairs > 0 && pairs == nullptr))
    return set_error("xfbci_run_create: bad pairs array", XFBCI_ERR_CONFIG);
  try {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.reserve(static_cast<size_t>(n_pairs));
    for (int i = 0; i < n_pairs; ++i) {
      if (pairs[i] == nullptr)
        throw xfbci::Error(xfbci::Errc::config, "xfbci_run_create: pair " + std::to_string(i) + " is NULL");
      const std::string entry(pairs[i]);
      const auto eq = entry.find('=');
      if (eq == std::string::npos || eq == 0)
        throw xfbci::Error(xfbci::Errc::config, "expected key=value, got '" + entry + "'");
      std::string key = entry.substr(0, eq);
      std::string value = entry.substr(eq + 1);
      if (key == "config") {
        // Splice the file's assignments in place, so later pairs override them.
        for (const auto& [k, v] : xfbci::parse_config_file(value)) kv.emplace_back(k, v);
      } else {
        kv.emplace_back(std::move(key), std::move(value));
      }
    }
    auto* run = new xfbci_run;
    run->cfg = xfbci::build_config(kv);
    *out = run;
    return XFBCI_OK;
  } catch (const xfbci::Error& e) {
    return set_error(e.what(), code_of(e));
  } catch (const std::exception& e) {
    return set_error(e.what(), XFBCI_ERR_RUNTIME);
  }
}

int xfbci_run_execute(xfbci_run* run) {
  if (run == nullptr) return set_error("xfbci_run_execute: run is NULL", XFBCI_ERR_CONFIG);
  if (run->executed) return set_error("xfbci_run_execute: handle already executed", XFBCI_ERR_CONFIG);
  try {
    switch (run->cfg.command) {
      case xfbci::Command::Simulate: {
        const xfbci::ExperimentReport report = xfbci::run_simulate(run->cfg);
        run->summary = xfbci::summarize(report);
        run->output_path = xfbci::report_csv_path(run->cfg);
        auto& m = run->metrics;
        m["a_rmse_theta_mean"] = report.agg_a_rmse_theta.mean;
        m["a_rmse_theta_stderr"] = report.agg_a_rmse_theta.stderr_;
        m["a_ate_mean"] = report.agg_a_ate.mean;
        m["a_ate_stderr"] = report.agg_a_ate.stderr_;
        m["a_rmse_ate_mean"] = report.agg_a_rmse_ate.mean;
        m["a_rmse_ate_stderr"] = report.agg_a_rmse_ate.stderr_;
        m["ate_error"] = report.agg_ate_error;
        m["replications"] = static_cast<double>(report.per_replication.size());
        double skipped = 0.0;
        for (const auto& row : report.per_replication) skipped += row.clients_skipped;
        m["clients_skipped"] = skipped;
        m["runtime_seconds"] = report.runtime_seconds;
        break;
      }
      case xfbci::Command::Analyze: {
        const xfbci::AnalyzeReport report = xfbci::run_analyze(run->cfg);
        run->summary = xfbci::summarize(report);
        run->output_path = xfbci::analyze_csv_path(run->cfg);
        break;
      }
      case xfbci::Command::Dump: {
        xfbci::run_dump(run->cfg);
        run->summary = "wrote CSV files under " + run->cfg.out_dir + "\n";
        run->output_path = "";
        break;
      }
    }
    run->executed = true;
    return XFBCI_OK;
  } catch (const xfbci::Error& e) {
    return set_error(e.what(), code_of(e));
  } catch (const std::exception& e) {
    return set_error(e.what(), XFBCI_ERR_RUNTIME);
  }
}

const char* xfbci_run_summary(const xfbci_run* run) {
  if (run == nullptr || !run->executed) return nullptr;
  return run->summary.c_str();
}

const char* xfbci_run_output_path(const xfbci_run* run) {
  if (run == nullptr || !run->executed) return nullptr;
  return run->output_path.c_str();
}

int xfbci_run_metric(const xfbci_run* run, const char* name, double* value) {
  if (run == nullptr || name == nullptr || value == nullptr)
    return set_error("xfbci_run_metric: NULL argument", XFBCI_ERR_CONFIG);
  if (!run->executed)
    return set_error("xfbci_run_metric: run has not executed", XFBCI_ERR_CONFIG);
  const auto it = run->metrics.find(name);
  if (it == run->metrics.end())
    return set_error("xfbci_run_metric: unknown metric '" + std::string(name) + "'", XFBCI_ERR_CONFIG);
  *value = it->second;
  return XFBCI_OK;
}

void xfbci_run_destroy(xfbci_run* run) { delete run; }

}  // extern "C"
