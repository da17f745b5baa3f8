#include "metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace xfbci {

double a_rmse_theta(const std::vector<Vec>& estimates, const std::vector<Vec>& truths) {
  require(!estimates.empty() && estimates.size() == truths.size(), Errc::runtime,
          "a_rmse_theta: shape mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    require(estimates[k].size() == truths[k].size(), Errc::runtime,
            "a_rmse_theta: dimension mismatch at client " + std::to_string(k));
    acc += std::sqrt((estimates[k] - truths[k]).squaredNorm() / estimates[k].size());
  }
  return acc / estimates.size();
}

double a_ate(const std::vector<double>& taus) {
  require(!taus.empty(), Errc::runtime, "a_ate: empty");
  double acc = 0.0;
  for (double t : taus) acc += t;
  return acc / taus.size();
}

double ate_error(const std::vector<double>& a_ate_per_rep,
                 const std::vector<double>& true_ate_per_rep) {
  require(!a_ate_per_rep.empty() && a_ate_per_rep.size() == true_ate_per_rep.size(),
          Errc::runtime, "ate_error: shape mismatch");
  double acc = 0.0;
  for (std::size_t r = 0; r < a_ate_per_rep.size(); ++r)
    acc += a_ate_per_rep[r] - true_ate_per_rep[r];
  return std::abs(acc / a_ate_per_rep.size());
}

double a_rmse_ate(const std::vector<double>& taus, const std::vector<double>& truths) {
  require(!taus.empty() && taus.size() == truths.size(), Errc::runtime,
          "a_rmse_ate: shape mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < taus.size(); ++k)
    acc += (taus[k] - truths[k]) * (taus[k] - truths[k]);
  return std::sqrt(acc / taus.size());
}

Aggregate aggregate_of(const std::vector<double>& xs) {
  Aggregate a;
  if (xs.empty()) return a;
  double sum = 0.0;
  for (double x : xs) sum += x;
  a.mean = sum / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - a.mean) * (x - a.mean);
    a.stderr_ = std::sqrt(ss / (xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
  }
  return a;
}

void finalize_report(ExperimentReport& report) {
  std::vector<double> rmse, ate, ratee, truth;
  for (const auto& row : report.per_replication) {
    rmse.push_back(row.a_rmse_theta);
    ate.push_back(row.a_ate);
    ratee.push_back(row.a_rmse_ate);
    truth.push_back(row.true_ate);
  }
  report.agg_a_rmse_theta = aggregate_of(rmse);
  report.agg_a_ate = aggregate_of(ate);
  report.agg_a_rmse_ate = aggregate_of(ratee);
  report.agg_ate_error = ate.empty() ? 0.0 : ate_error(ate, truth);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_tidy_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "scope,replication,client,metric,value\n";
  for (const auto& row : report.per_replication) {
    for (const auto& c : row.clients) {
      out << "client," << row.replication << ',' << c.client << ",tau_hat,"
          << fmt(c.tau_hat) << '\n';
      out << "client," << row.replication << ',' << c.client << ",tau_true,"
          << fmt(c.tau_true) << '\n';
      out << "client," << row.replication << ',' << c.client << ",rmse_theta,"
          << fmt(c.rmse_theta) << '\n';
    }
    out << "replication," << row.replication << ",,a_rmse_theta," << fmt(row.a_rmse_theta) << '\n';
    out << "replication," << row.replication << ",,a_ate," << fmt(row.a_ate) << '\n';
    out << "replication," << row.replication << ",,true_ate," << fmt(row.true_ate) << '\n';
    out << "replication," << row.replication << ",,a_rmse_ate," << fmt(row.a_rmse_ate) << '\n';
    out << "replication," << row.replication << ",,clients_skipped,"
        << row.clients_skipped << '\n';
  }
  out << "aggregate,,,a_rmse_theta_mean," << fmt(report.agg_a_rmse_theta.mean) << '\n';
  out << "aggregate,,,a_rmse_theta_stderr," << fmt(report.agg_a_rmse_theta.stderr_) << '\n';
  out << "aggregate,,,a_ate_mean," << fmt(report.agg_a_ate.mean) << '\n';
  out << "aggregate,,,a_ate_stderr," << fmt(report.agg_a_ate.stderr_) << '\n';
  out << "aggregate,,,a_rmse_ate_mean," << fmt(report.agg_a_rmse_ate.mean) << '\n';
  out << "aggregate,,,a_rmse_ate_stderr," << fmt(report.agg_a_rmse_ate.stderr_) << '\n';
  out << "aggregate,,,ate_error," << fmt(report.agg_ate_error) << '\n';
  // runtime_seconds stays out of the file on purpose: reruns of the same
  // (config, seed) must produce byte-identical CSVs.
  return out.str();
}

}  // namespace xfbci
