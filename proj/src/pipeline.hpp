#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"

namespace xfbci {

// One replication of the simulate pipeline: generate, fit with the configured
// method, match, estimate, score. Exposed so tests can drive single reps.
ReplicationRow simulate_one(const RunConfig& cfg, int replication);

// Scores one fitted replication: per-client matching and ATEs plus the cross-
// client aggregates. Clients whose matching is undefined (no treated or no
// control rows) are excluded from the ATE aggregates and counted as skipped.
ReplicationRow score_replication(const std::vector<ClientDataset>& data,
                                 const std::vector<Vec>& theta,
                                 const std::vector<Vec>& true_theta,
                                 const std::vector<double>& true_ate_k, int replication);

// Full protocol: cfg.replications reps (parallel up to cfg.jobs, results
// ordered by replication), aggregate, write the tidy report CSV (and the
// telemetry CSV when enabled) under cfg.out_dir.
ExperimentReport run_simulate(const RunConfig& cfg);

struct AnalyzeRow {
  int client = 0;           // 1-based, order of cfg.data_paths
  std::string variable;
  double ate = 0.0;
  double before_mse = 0.0;
  double after_mse = 0.0;
};

struct AnalyzeReport {
  std::vector<AnalyzeRow> rows;
  std::vector<std::string> client_files;
  std::vector<int> rows_per_client;  // rows ingested per client file; fits
                                     // never see any other client's rows
};

// Real-data workflow: binarize each treatment variable in turn, fit the
// chosen method across the client files, match within each client, report
// ATE and before/after regression MSE per (client, variable).
AnalyzeReport run_analyze(const RunConfig& cfg);

// Write a generated world (or the bundled analog tables) as CSV files.
void run_dump(const RunConfig& cfg);

std::string summarize(const ExperimentReport& report);
std::string summarize(const AnalyzeReport& report);

std::string report_csv_path(const RunConfig& cfg);
std::string analyze_csv_path(const RunConfig& cfg);

}  // namespace xfbci
