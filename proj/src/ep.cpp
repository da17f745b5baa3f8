#include "ep.hpp"

#include <cmath>

#include "rng.hpp"

namespace xfbci {

void EpConfig::validate() const {
  require(rounds >= 0, Errc::config, "ep: rounds must be >= 0");
  require(damping >= 0.0 && damping <= 1.0, Errc::config, "ep: damping must be in [0,1]");
  require(alpha > 0.0, Errc::config, "ep: alpha must be positive");
  require(prior_precision > 0.0, Errc::config, "ep: prior_precision must be positive");
  require(psd_floor > 0.0, Errc::config, "ep: psd_floor must be positive");
  sgld.validate();
}

GaussNP cavity(const ServerState& server, const ClientState& client) {
  return quotient(server.q_global, client.q_k);
}

namespace {

std::uint64_t fnv1a(const void* p, std::size_t n, std::uint64_t h) {
  const auto* b = static_cast<const unsigned char*>(p);
  for (std::size_t i = 0; i < n; ++i) h = (h ^ b[i]) * 0x100000001B3ull;
  return h;
}

}  // namespace

std::uint64_t chain_seed(std::uint64_t engine_seed, const ClientDataset& data, int round) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  const std::uint64_t shape[2] = {static_cast<std::uint64_t>(data.n()),
                                  static_cast<std::uint64_t>(data.dim())};
  h = fnv1a(shape, sizeof shape, h);
  h = fnv1a(data.x.data(), sizeof(double) * data.x.size(), h);
  h = fnv1a(data.w.data(), sizeof(double) * data.w.size(), h);
  return derive_seed(derive_seed(engine_seed, h), static_cast<std::uint64_t>(round));
}

GaussNP fit_tilted(const ClientDataset& data, const GaussNP& cav, const EpConfig& cfg,
                   std::uint64_t chain_seed, const Vec& theta0) {
  SgldConfig scfg = cfg.sgld;
  scfg.seed = chain_seed;
  auto loglik = [&data](const Vec& th, const std::vector<std::uint32_t>& batch) {
    return grad_log_likelihood(data, th, batch);
  };
  auto prior = [&cav](const Vec& th) { return grad_log_density(cav, th); };
  SampleSummary s = sgld_run(loglik, prior, data.n(), theta0, scfg);

  const int d = data.dim();
  Mat sigma;
  if (cfg.cov_mode == CovMode::SampleCovPlusAlphaJitter) {
    sigma = s.sample_cov + cfg.alpha * Mat::Identity(d, d);
  } else {
    sigma = cfg.alpha * Mat::Identity(d, d);
  }
  sigma = psd_repair(sigma, cfg.psd_floor);
  Eigen::LLT<Mat> llt(sigma);
  require(llt.info() == Eigen::Success, Errc::runtime, "fit_tilted: repaired covariance not SPD");
  Mat lam = llt.solve(Mat::Identity(d, d));
  Vec eta = lam * s.mean;
  return GaussNP(std::move(eta), std::move(lam));
}

EpEngine::EpEngine(const std::vector<ClientDataset>& datasets, EpConfig cfg)
    : cfg_(std::move(cfg)), data_(datasets) {
  cfg_.validate();
  require(!data_.empty(), Errc::config, "ep: need at least one client");
  d_ = data_[0].dim();
  for (std::size_t k = 0; k < data_.size(); ++k) {
    data_[k].validate();
    require(data_[k].dim() == d_, Errc::config, "ep: clients disagree on dimension");
  }
  const int K = static_cast<int>(data_.size());
  delta_ = cfg_.damping > 0.0 ? cfg_.damping : 1.0 / K;
  server_.q_global = GaussNP::isotropic(d_, cfg_.prior_precision);
  server_.round = 0;
  clients_.resize(K);
  last_tilted_.assign(K, GaussNP::zero(d_));
  warm_mean_.assign(K, Vec::Zero(d_));
  for (int k = 0; k < K; ++k) {
    clients_[k].id = k;
    clients_[k].q_k = GaussNP::zero(d_);
    clients_[k].data = &data_[k];
  }
}

std::vector<DeltaMessage> EpEngine::run_round() {
  const int K = static_cast<int>(clients_.size());
  std::vector<DeltaMessage> deltas(K);
  std::vector<GaussNP> tilted(K);

  for (int k = 0; k < K; ++k) {
    audit_.broadcasts++;  // server -> client: q_global
    audit_.payload_doubles += static_cast<std::size_t>(d_) * (d_ + 1);
    try {
      GaussNP cav = cavity(server_, clients_[k]);
      const std::uint64_t seed_k = chain_seed(cfg_.seed, data_[k], server_.round);
      const Vec theta0 = (cfg_.warm_start && server_.round > 0) ? warm_mean_[k]
                                                                : Vec(Vec::Zero(d_));
      tilted[k] = fit_tilted(data_[k], cav, cfg_, seed_k, theta0);
      warm_mean_[k] = mean_of(tilted[k]);
    } catch (const Error& e) {
      throw Error(e.code(), "client " + std::to_string(k) + " round " +
                                std::to_string(server_.round) + ": " + e.what());
    }
    GaussNP dq = quotient(tilted[k], server_.q_global);
    deltas[k] = DeltaMessage{k, dq.eta, dq.lam};
    audit_.deltas++;
    audit_.payload_doubles += static_cast<std::size_t>(d_) * (d_ + 1);
    telemetry_.push_back(TelemetryRow{server_.round, k, dq.eta.norm(), dq.lam.norm(),
                                      warm_mean_[k]});
  }

  // Damped updates; the reduction walks ascending ids so the fp sum is fixed.
  Vec sum_eta = Vec::Zero(d_);
  Mat sum_lam = Mat::Zero(d_, d_);
  for (int k = 0; k < K; ++k) {
    clients_[k].q_k = GaussNP(clients_[k].q_k.eta + delta_ * deltas[k].d_eta,
                              clients_[k].q_k.lam + delta_ * deltas[k].d_lam);
    sum_eta += deltas[k].d_eta;
    sum_lam += deltas[k].d_lam;
    last_tilted_[k] = tilted[k];
  }
  server_.q_global = GaussNP(server_.q_global.eta + delta_ * sum_eta,
                             server_.q_global.lam + delta_ * sum_lam);

  // Keep the server precision usable: repair, and spread the correction over
  // the sites so q_global == prior * prod(sites) survives exactly.
  if (min_eigenvalue(server_.q_global.lam) < cfg_.psd_floor) {
    Mat repaired = psd_repair(server_.q_global.lam, cfg_.psd_floor);
    Mat correction = (repaired - server_.q_global.lam) / K;
    for (int k = 0; k < K; ++k)
      clients_[k].q_k = GaussNP(clients_[k].q_k.eta, clients_[k].q_k.lam + correction);
    server_.q_global = GaussNP(server_.q_global.eta, std::move(repaired));
  }

  server_.round++;
  return deltas;
}

Vec EpEngine::personalized_mean(int k) const {
  // prior x cavity x refreshed site collapses to prior x tilted: the client's
  // personalized posterior. Before any fit the global prior is all there is.
  GaussNP post = last_tilted_[k].lam.isZero(0.0)
                     ? server_.q_global
                     : product(GaussNP::isotropic(d_, cfg_.prior_precision), last_tilted_[k]);
  GaussNP safe(post.eta, psd_repair(post.lam, cfg_.psd_floor));
  return mean_of(safe);
}

EpResult EpEngine::run() {
  for (int t = 0; t < cfg_.rounds; ++t) run_round();
  EpResult out;
  const int K = static_cast<int>(clients_.size());
  out.theta_hat.resize(K);
  out.sites.resize(K);
  for (int k = 0; k < K; ++k) {
    out.theta_hat[k] = personalized_mean(k);
    out.sites[k] = clients_[k].q_k;
  }
  out.q_global = server_.q_global;
  out.telemetry = std::move(telemetry_);
  out.transcript = audit_;
  return out;
}

EpResult ep_run(const std::vector<ClientDataset>& datasets, const EpConfig& cfg) {
  EpEngine engine(datasets, cfg);
  return engine.run();
}

}  // namespace xfbci
