#include "baselines.hpp"

#include <cmath>
#include <numeric>

#include "rng.hpp"

namespace xfbci {

namespace {

std::vector<std::uint32_t> all_rows(int n) {
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  return idx;
}

}  // namespace

Vec individual_fit(const ClientDataset& data, const SgldConfig& cfg, double prior_precision) {
  data.validate();
  auto loglik = [&data](const Vec& th, const std::vector<std::uint32_t>& batch) {
    return grad_log_likelihood(data, th, batch);
  };
  auto prior = [prior_precision](const Vec& th) { return Vec(-prior_precision * th); };
  return sgld_run(loglik, prior, data.n(), Vec::Zero(data.dim()), cfg).mean;
}

Vec centralized_fit(const std::vector<ClientDataset>& datasets, const SgldConfig& cfg,
                    double prior_precision) {
  require(!datasets.empty(), Errc::config, "centralized_fit: no clients");
  Eigen::Index total = 0;
  for (const auto& ds : datasets) total += ds.x.rows();
  ClientDataset pooled;
  pooled.x.resize(total, datasets[0].x.cols());
  pooled.w.resize(total);
  pooled.y.resize(total);
  Eigen::Index at = 0;
  for (const auto& ds : datasets) {
    pooled.x.middleRows(at, ds.x.rows()) = ds.x;
    pooled.w.segment(at, ds.x.rows()) = ds.w;
    pooled.y.segment(at, ds.x.rows()) = ds.y;
    at += ds.x.rows();
  }
  return individual_fit(pooled, cfg, prior_precision);
}

void DittoConfig::validate() const {
  require(rounds > 0 && local_steps > 0 && global_steps > 0, Errc::config,
          "ditto: rounds and step counts must be positive");
  require(local_lr > 0.0 && global_lr > 0.0, Errc::config, "ditto: learning rates must be positive");
  require(lambda_prox >= 0.0, Errc::config, "ditto: lambda_prox must be >= 0");
  require(batch_fraction >= 0.0 && batch_fraction <= 1.0, Errc::config,
          "ditto: batch_fraction must be in [0,1]");
}

DittoResult ditto_fit(const std::vector<ClientDataset>& datasets, const DittoConfig& cfg) {
  cfg.validate();
  require(!datasets.empty(), Errc::config, "ditto: no clients");
  const int K = static_cast<int>(datasets.size());
  const int d = datasets[0].dim();
  double total_n = 0.0;
  for (const auto& ds : datasets) total_n += ds.n();

  std::vector<std::vector<std::uint32_t>> full(K);
  for (int k = 0; k < K; ++k) full[k] = all_rows(datasets[k].n());

  Rng batch_rng(cfg.seed);
  std::vector<std::uint32_t> idx;
  auto client_grad = [&](int k, const Vec& th) {
    const auto& ds = datasets[k];
    if (cfg.batch_fraction > 0.0 && cfg.batch_fraction < 1.0) {
      std::size_t b = std::max<std::size_t>(
          1, static_cast<std::size_t>(cfg.batch_fraction * ds.n()));
      batch_rng.sample_without_replacement(ds.n(), b, idx);
      return Vec(grad_log_likelihood(ds, th, idx) / static_cast<double>(b));
    }
    return Vec(grad_log_likelihood(ds, th, full[k]) / ds.n());
  };

  auto check_finite = [](const Vec& th, int k, const char* phase) {
    for (int j = 0; j < th.size(); ++j)
      require(std::isfinite(th[j]), Errc::runtime,
              std::string("ditto: non-finite iterate, client ") + std::to_string(k) +
                  " during " + phase);
  };

  // Phase 1: FedAvg on the mean logistic log-likelihood.
  Vec global = Vec::Zero(d);
  for (int t = 0; t < cfg.rounds; ++t) {
    Vec avg = Vec::Zero(d);
    for (int k = 0; k < K; ++k) {
      Vec th = global;
      for (int s = 0; s < cfg.local_steps; ++s) th += cfg.local_lr * client_grad(k, th);
      check_finite(th, k, "fedavg");
      avg += (datasets[k].n() / total_n) * th;
    }
    global = avg;
  }

  // Phase 2: personalization. The proximal term is handled implicitly,
  // theta <- (theta + lr g + lr lambda global) / (1 + lr lambda), which stays
  // stable for arbitrarily large lambda and reduces to plain ascent at 0.
  DittoResult out;
  out.theta_global = global;
  out.theta.resize(K);
  for (int k = 0; k < K; ++k) {
    Vec th = global;
    const double lr = cfg.local_lr, lam = cfg.lambda_prox;
    for (int s = 0; s < cfg.global_steps; ++s) {
      Vec g = client_grad(k, th);
      th = (th + lr * g + lr * lam * global) / (1.0 + lr * lam);
    }
    check_finite(th, k, "personalization");
    out.theta[k] = th;
  }
  return out;
}

}  // namespace xfbci
