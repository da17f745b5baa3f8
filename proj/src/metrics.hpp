#pragma once

#include <string>
#include <vector>

#include "common.hpp"

namespace xfbci {

// (1/K) sum_k sqrt( |theta_hat_k - theta_k|^2 / d )
double a_rmse_theta(const std::vector<Vec>& estimates, const std::vector<Vec>& truths);

// mean of per-client ATEs
double a_ate(const std::vector<double>& taus);

// | mean_r (A-ATE_r - trueATE_r) | : signed mean first, absolute value last,
// so per-replication offsets of opposite sign cancel by definition.
double ate_error(const std::vector<double>& a_ate_per_rep,
                 const std::vector<double>& true_ate_per_rep);

// sqrt( (1/K) sum_k (tau_k - tau_true_k)^2 ) with per-client truths
double a_rmse_ate(const std::vector<double>& taus, const std::vector<double>& truths);

struct ClientDetail {
  int client = 0;
  double tau_hat = 0.0;
  double tau_true = 0.0;
  double rmse_theta = 0.0;
  bool ate_defined = true;  // false when a client has no treated or no controls
};

struct ReplicationRow {
  int replication = 0;
  double a_rmse_theta = 0.0;
  double a_ate = 0.0;
  double true_ate = 0.0;   // mean of per-client truths over the same clients
  double a_rmse_ate = 0.0;
  int clients_skipped = 0;  // excluded from the ATE aggregates
  std::vector<ClientDetail> clients;
};

struct Aggregate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample std / sqrt(R); 0 when R == 1
};

struct ExperimentReport {
  std::vector<ReplicationRow> per_replication;
  Aggregate agg_a_rmse_theta, agg_a_ate, agg_a_rmse_ate;
  double agg_ate_error = 0.0;
  double runtime_seconds = 0.0;
};

Aggregate aggregate_of(const std::vector<double>& xs);

// Recomputes every aggregate from the per-replication rows alone.
void finalize_report(ExperimentReport& report);

// Tidy layout: one row per (replication, client, metric, value), then
// replication-level rows, then an aggregate block. Numbers survive a
// parse round trip bit-exactly.
std::string report_to_tidy_csv(const ExperimentReport& report);

}  // namespace xfbci
