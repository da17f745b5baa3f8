#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "rng.hpp"

namespace xfbci {

namespace {

// Seed stream tags; every consumer below master_seed gets a distinct branch.
constexpr std::uint64_t kTagEp = 0xE9;
constexpr std::uint64_t kTagIndividual = 0x1D00;  // + client index
constexpr std::uint64_t kTagCentral = 0xCE47;
constexpr std::uint64_t kTagDitto = 0xD177;
constexpr std::uint64_t kTagAnalyze = 0xA7A0;  // + variable index

std::vector<Vec> fit_thetas(const RunConfig& cfg, const std::vector<ClientDataset>& data,
                            std::uint64_t seed, std::vector<TelemetryRow>* telemetry) {
  const int K = static_cast<int>(data.size());
  switch (cfg.method) {
    case Method::Xfbci: {
      EpConfig ec = cfg.ep;
      ec.seed = derive_seed(seed, kTagEp);
      EpResult res = ep_run(data, ec);
      if (telemetry) *telemetry = std::move(res.telemetry);
      return res.theta_hat;
    }
    case Method::Individual: {
      std::vector<Vec> out(K);
      for (int k = 0; k < K; ++k) {
        SgldConfig sc = cfg.ep.sgld;
        sc.seed = derive_seed(seed, kTagIndividual + k);
        out[k] = individual_fit(data[k], sc, cfg.ep.prior_precision);
      }
      return out;
    }
    case Method::Central: {
      SgldConfig sc = cfg.ep.sgld;
      sc.seed = derive_seed(seed, kTagCentral);
      // Table rates are tuned for one client's worth of rows; keep the
      // per-sample step unchanged on the pooled set.
      sc.learning_rate = cfg.ep.sgld.learning_rate / K;
      Vec pooled = centralized_fit(data, sc, cfg.ep.prior_precision);
      return std::vector<Vec>(K, pooled);
    }
    case Method::Ditto: {
      DittoConfig dc = cfg.ditto;
      dc.seed = derive_seed(seed, kTagDitto);
      return ditto_fit(data, dc).theta;
    }
  }
  throw Error(Errc::config, "unknown method");
}

}  // namespace

ReplicationRow score_replication(const std::vector<ClientDataset>& data,
                                 const std::vector<Vec>& theta,
                                 const std::vector<Vec>& true_theta,
                                 const std::vector<double>& true_ate_k, int replication) {
  const int K = static_cast<int>(data.size());
  ReplicationRow row;
  row.replication = replication;
  std::vector<Vec> est(theta.begin(), theta.end());
  row.a_rmse_theta = a_rmse_theta(est, true_theta);

  std::vector<double> taus, truths;
  for (int k = 0; k < K; ++k) {
    ClientDetail det;
    det.client = k;
    det.tau_true = true_ate_k[k];
    det.rmse_theta =
        std::sqrt((theta[k] - true_theta[k]).squaredNorm() / theta[k].size());
    try {
      MatchedPairs pairs = nnm_match(propensity_scores(data[k], theta[k]), data[k].w);
      det.tau_hat = estimate_ate(data[k], pairs).tau_hat;
      taus.push_back(det.tau_hat);
      truths.push_back(det.tau_true);
    } catch (const Error&) {
      // A fully treated or fully control client has no defined ATE; it stays
      // in the theta metrics but drops out of the ATE aggregates.
      det.ate_defined = false;
      det.tau_hat = std::numeric_limits<double>::quiet_NaN();
      ++row.clients_skipped;
    }
    row.clients.push_back(det);
  }
  if (!taus.empty()) {
    row.a_ate = a_ate(taus);
    row.true_ate = a_ate(truths);
    row.a_rmse_ate = a_rmse_ate(taus, truths);
  } else {
    row.a_ate = row.true_ate = row.a_rmse_ate = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

namespace {

void write_telemetry(const RunConfig& cfg, const std::vector<std::vector<TelemetryRow>>& rows) {
  std::string path = cfg.out_dir + "/telemetry_" + case_name(cfg.case_id) + "_" +
                     method_name(cfg.method) + ".csv";
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::runtime, "cannot write '" + path + "'");
  out << "replication,round,client,d_eta_norm,d_lam_fro";
  int d = 0;
  for (const auto& rep : rows)
    if (!rep.empty()) d = static_cast<int>(rep.front().tilted_mean.size());
  for (int j = 0; j < d; ++j) out << ",mean_" << (j + 1);
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& t : rows[r]) {
      out << r << ',' << t.round << ',' << t.client << ',' << format_double(t.d_eta_norm)
          << ',' << format_double(t.d_lam_fro);
      for (int j = 0; j < t.tilted_mean.size(); ++j)
        out << ',' << format_double(t.tilted_mean[j]);
      out << '\n';
    }
}

}  // namespace

std::string report_csv_path(const RunConfig& cfg) {
  return cfg.out_dir + "/report_" + case_name(cfg.case_id) + "_" + method_name(cfg.method) +
         ".csv";
}

std::string analyze_csv_path(const RunConfig& cfg) { return cfg.out_dir + "/analyze_report.csv"; }

ReplicationRow simulate_one(const RunConfig& cfg, int replication) {
  std::uint64_t rep_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(replication));
  CaseSpec spec = make_case_spec(cfg.case_id, rep_seed);
  GeneratedWorld world = generate(spec);
  std::vector<TelemetryRow> telemetry;
  std::vector<Vec> theta;
  try {
    theta = fit_thetas(cfg, world.clients, rep_seed, cfg.telemetry ? &telemetry : nullptr);
  } catch (const Error& e) {
    throw Error(e.code(), "replication " + std::to_string(replication) + ": " + e.what());
  }
  ReplicationRow row =
      score_replication(world.clients, theta, world.true_theta, world.true_ate, replication);
  return row;
}

ExperimentReport run_simulate(const RunConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();

  const int R = cfg.replications;
  std::vector<ReplicationRow> rows(R);
  std::vector<std::vector<TelemetryRow>> telemetry(R);
  std::vector<std::string> failures;
  std::mutex fail_mu;
  std::atomic<int> next{0};

  auto worker = [&]() {
    for (;;) {
      int r = next.fetch_add(1);
      if (r >= R) return;
      try {
        std::uint64_t rep_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(r));
        CaseSpec spec = make_case_spec(cfg.case_id, rep_seed);
        GeneratedWorld world = generate(spec);
        std::vector<Vec> theta = fit_thetas(cfg, world.clients, rep_seed,
                                            cfg.telemetry ? &telemetry[r] : nullptr);
        rows[r] = score_replication(world.clients, theta, world.true_theta, world.true_ate, r);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(fail_mu);
        failures.push_back("replication " + std::to_string(r) + ": " + e.what());
      }
    }
  };

  int n_threads = std::min(cfg.jobs, R);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    throw Error(Errc::runtime, failures.front());
  }

  ExperimentReport report;
  report.per_replication = std::move(rows);
  finalize_report(report);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  require(!ec, Errc::runtime, "cannot create output directory '" + cfg.out_dir + "'");
  std::ofstream out(report_csv_path(cfg), std::ios::binary);
  require(out.good(), Errc::runtime, "cannot write '" + report_csv_path(cfg) + "'");
  out << report_to_tidy_csv(report);
  if (cfg.telemetry) write_telemetry(cfg, telemetry);
  return report;
}

AnalyzeReport run_analyze(const RunConfig& cfg) {
  cfg.validate();
  std::vector<RawTable> tables;
  AnalyzeReport report;
  for (const auto& path : cfg.data_paths) {
    tables.push_back(read_csv_table(path));
    report.client_files.push_back(path);
    report.rows_per_client.push_back(static_cast<int>(tables.back().values.rows()));
  }

  auto column_index = [](const RawTable& t, const std::string& name,
                         const std::string& path) {
    for (std::size_t j = 0; j < t.columns.size(); ++j)
      if (t.columns[j] == name) return static_cast<int>(j);
    throw Error(Errc::runtime, path + ": missing column '" + name + "'");
  };

  for (std::size_t c = 0; c < tables.size(); ++c)
    column_index(tables[c], cfg.outcome_col, cfg.data_paths[c]);

  std::vector<std::string> variables;
  if (!cfg.treatment_col.empty()) {
    variables.push_back(cfg.treatment_col);
  } else {
    for (const auto& col : tables[0].columns)
      if (col != cfg.outcome_col) variables.push_back(col);
  }

  for (std::size_t vi = 0; vi < variables.size(); ++vi) {
    const std::string& var = variables[vi];
    std::vector<ClientDataset> data(tables.size());
    for (std::size_t c = 0; c < tables.size(); ++c) {
      const RawTable& t = tables[c];
      int tcol = column_index(t, var, cfg.data_paths[c]);
      int ycol = column_index(t, cfg.outcome_col, cfg.data_paths[c]);
      Vec w;
      try {
        w = binarize_treatment(t.values.col(tcol), cfg.binarize, cfg.threshold);
      } catch (const Error& e) {
        throw Error(e.code(),
                    cfg.data_paths[c] + ": column '" + var + "': " + e.what());
      }
      std::vector<int> xcols;
      for (int j = 0; j < static_cast<int>(t.columns.size()); ++j)
        if (j != tcol && j != ycol) xcols.push_back(j);
      ClientDataset& ds = data[c];
      ds.x.resize(t.values.rows(), xcols.size() + (cfg.add_intercept ? 1 : 0));
      for (std::size_t j = 0; j < xcols.size(); ++j) ds.x.col(j) = t.values.col(xcols[j]);
      if (cfg.add_intercept) ds.x.col(xcols.size()).setOnes();
      ds.w = w;
      ds.y = t.values.col(ycol);
      ds.validate();
    }

    std::uint64_t var_seed = derive_seed(cfg.master_seed, kTagAnalyze + vi);
    std::vector<Vec> theta;
    try {
      theta = fit_thetas(cfg, data, var_seed, nullptr);
    } catch (const Error& e) {
      throw Error(e.code(), "variable '" + var + "': " + e.what());
    }

    for (std::size_t c = 0; c < data.size(); ++c) {
      MatchedPairs pairs;
      try {
        pairs = nnm_match(propensity_scores(data[c], theta[c]), data[c].w);
      } catch (const Error& e) {
        throw Error(e.code(), cfg.data_paths[c] + ": variable '" + var + "': " + e.what());
      }
      AnalyzeRow row;
      row.client = static_cast<int>(c) + 1;
      row.variable = var;
      row.ate = estimate_ate(data[c], pairs).tau_hat;
      row.before_mse = regression_mse_eval(data[c], nullptr);
      row.after_mse = regression_mse_eval(data[c], &pairs);
      report.rows.push_back(row);
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  require(!ec, Errc::runtime, "cannot create output directory '" + cfg.out_dir + "'");
  std::ofstream out(analyze_csv_path(cfg), std::ios::binary);
  require(out.good(), Errc::runtime, "cannot write '" + analyze_csv_path(cfg) + "'");
  out << "client,variable,ate,before_mse,after_mse\n";
  for (const auto& row : report.rows)
    out << row.client << ',' << row.variable << ',' << format_double(row.ate) << ','
        << format_double(row.before_mse) << ',' << format_double(row.after_mse) << '\n';
  return report;
}

void run_dump(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  require(!ec, Errc::runtime, "cannot create output directory '" + cfg.out_dir + "'");
  if (cfg.dump_ehd) {
    std::vector<RawTable> tables =
        cfg.inject_target >= 0
            ? ehd_injected(cfg.master_seed, cfg.inject_c, cfg.inject_target)
            : ehd_analog(cfg.master_seed);
    for (std::size_t c = 0; c < tables.size(); ++c)
      write_csv_table(cfg.out_dir + "/ehd_client_" + std::to_string(c + 1) + ".csv",
                      tables[c]);
    return;
  }
  CaseSpec spec = make_case_spec(cfg.case_id, cfg.master_seed);
  write_world(cfg.out_dir, generate(spec));
}

std::string summarize(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << "replications: " << report.per_replication.size() << '\n';
  out << "A-RMSE(theta): " << report.agg_a_rmse_theta.mean << " (se "
      << report.agg_a_rmse_theta.stderr_ << ")\n";
  out << "A-ATE: " << report.agg_a_ate.mean << " (se " << report.agg_a_ate.stderr_ << ")\n";
  out << "ATE error: " << report.agg_ate_error << '\n';
  out << "A-RMSE(ATE): " << report.agg_a_rmse_ate.mean << " (se "
      << report.agg_a_rmse_ate.stderr_ << ")\n";
  int skipped = 0;
  for (const auto& row : report.per_replication) skipped += row.clients_skipped;
  if (skipped > 0)
    out << "clients without a defined ATE (skipped in aggregates): " << skipped << '\n';
  out << "runtime_seconds: " << report.runtime_seconds << '\n';
  return out.str();
}

std::string summarize(const AnalyzeReport& report) {
  std::ostringstream out;
  out << "client,variable,ate,before_mse,after_mse\n";
  out.precision(6);
  for (const auto& row : report.rows)
    out << row.client << ',' << row.variable << ',' << row.ate << ',' << row.before_mse
        << ',' << row.after_mse << '\n';
  return out.str();
}

}  // namespace xfbci
