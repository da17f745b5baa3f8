#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "baselines.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "synth.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

using namespace xfbci;

namespace {

ClientDataset logistic_data(std::uint64_t seed, int n, const Vec& theta_star) {
  Rng rng(seed);
  const int d = static_cast<int>(theta_star.size());
  ClientDataset data;
  data.x.resize(n, d);
  data.w.resize(n);
  data.y = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.x(i, j) = rng.std_normal();
    data.w[i] = rng.bernoulli(sigmoid(data.x.row(i).dot(theta_star))) ? 1.0 : 0.0;
  }
  return data;
}

SgldConfig gentle_chain(std::uint64_t seed) {
  SgldConfig cfg;
  cfg.steps = 3000;
  cfg.burn_in = 500;
  cfg.learning_rate = 0.01;
  cfg.batch_fraction = 1.0;
  cfg.seed = seed;
  return cfg;
}

// Plain full-batch mean-gradient ascent on the logistic log likelihood; the
// oracle for the decoupled and single-client Ditto cases.
Vec ascent_oracle(const ClientDataset& data, double lr, int steps) {
  Vec theta = Vec::Zero(data.dim());
  std::vector<std::uint32_t> all(data.n());
  std::iota(all.begin(), all.end(), 0u);
  for (int t = 0; t < steps; ++t) {
    Vec g = grad_log_likelihood(data, theta, all) / data.n();
    theta += lr * g;
  }
  return theta;
}

const std::uint64_t kC1Master = 7;

}  // namespace

TEST_CASE("individual fit is sane on a single-row dataset") {
  Vec theta_star(2);
  theta_star << 0.5, -0.5;
  ClientDataset data = logistic_data(501, 1, theta_star);
  SgldConfig cfg = gentle_chain(1);
  cfg.steps = 300;
  cfg.burn_in = 50;
  Vec theta = individual_fit(data, cfg, 1e-6);
  REQUIRE(theta.size() == 2);
  CHECK(std::isfinite(theta[0]));
  CHECK(std::isfinite(theta[1]));
}

TEST_CASE("individual fit lands near the grid-search MAP") {
  Vec theta_star(2);
  theta_star << 1.0, -1.0;
  ClientDataset data = logistic_data(502, 500, theta_star);
  SgldConfig cfg = gentle_chain(2);
  Vec theta = individual_fit(data, cfg, 1e-6);

  double best = -1e300;
  Vec best_theta(2);
  for (int i = 0; i <= 600; ++i) {
    for (int j = 0; j <= 600; ++j) {
      Vec t(2);
      t << -3.0 + 0.01 * i, -3.0 + 0.01 * j;
      double v = log_likelihood(data, t) - 0.5 * 1e-6 * t.squaredNorm();
      if (v > best) {
        best = v;
        best_theta = t;
      }
    }
  }
  CHECK((theta - best_theta).lpNorm<Eigen::Infinity>() < 0.15);
}

TEST_CASE("pooled fit of identical copies stays near the single fit") {
  Vec theta_star(2);
  theta_star << 0.8, -0.3;
  ClientDataset shard = logistic_data(503, 400, theta_star);
  std::vector<ClientDataset> copies{shard, shard, shard};
  SgldConfig cfg = gentle_chain(3);
  Vec pooled = centralized_fit(copies, cfg, 1e-6);
  Vec single = individual_fit(shard, cfg, 1e-6);
  CHECK((pooled - single).lpNorm<Eigen::Infinity>() < 0.1);
}

TEST_CASE("centralized with one client collapses to the individual fit bitwise") {
  Vec theta_star(3);
  theta_star << 0.2, -0.6, 1.0;
  ClientDataset data = logistic_data(504, 150, theta_star);
  SgldConfig cfg = gentle_chain(4);
  cfg.steps = 500;
  cfg.burn_in = 100;
  Vec a = centralized_fit({data}, cfg, 1e-6);
  Vec b = individual_fit(data, cfg, 1e-6);
  CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("huge proximal weight pins personalization to the global parameter") {
  Vec theta_star(2);
  theta_star << 0.7, 0.7;
  std::vector<ClientDataset> data;
  for (int k = 0; k < 3; ++k) data.push_back(logistic_data(510 + k, 200, theta_star));
  DittoConfig cfg;
  cfg.rounds = 10;
  cfg.local_lr = 0.05;
  cfg.local_steps = 50;
  cfg.global_steps = 200;
  cfg.lambda_prox = 1e6;
  DittoResult res = ditto_fit(data, cfg);
  for (const Vec& t : res.theta) {
    CHECK((t - res.theta_global).lpNorm<Eigen::Infinity>() < 1e-3);
  }
}

TEST_CASE("zero proximal weight decouples personalization from the global") {
  Vec theta_star(2);
  theta_star << 1.0, -0.5;
  std::vector<ClientDataset> data;
  for (int k = 0; k < 2; ++k) data.push_back(logistic_data(520 + k, 300, theta_star));
  DittoConfig cfg;
  cfg.rounds = 8;
  cfg.local_lr = 0.05;
  cfg.local_steps = 100;
  cfg.global_steps = 2000;
  cfg.lambda_prox = 0.0;
  DittoResult res = ditto_fit(data, cfg);
  for (int k = 0; k < 2; ++k) {
    Vec oracle = ascent_oracle(data[k], cfg.local_lr, 4000);
    CHECK((res.theta[k] - oracle).lpNorm<Eigen::Infinity>() < 0.15);
  }
}

TEST_CASE("single-client FedAvg equals plain local ascent bitwise") {
  Vec theta_star(2);
  theta_star << -0.4, 0.9;
  ClientDataset data = logistic_data(530, 180, theta_star);
  DittoConfig cfg;
  cfg.rounds = 6;
  cfg.local_lr = 0.03;
  cfg.local_steps = 40;
  cfg.global_steps = 0;
  cfg.lambda_prox = 0.1;
  DittoResult res = ditto_fit({data}, cfg);
  Vec oracle = ascent_oracle(data, cfg.local_lr, cfg.rounds * cfg.local_steps);
  CHECK((res.theta_global - oracle).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("FedAvg global is invariant to client order") {
  Vec theta_star(2);
  theta_star << 0.6, -0.6;
  std::vector<ClientDataset> data;
  data.push_back(logistic_data(540, 100, theta_star));
  data.push_back(logistic_data(541, 250, theta_star));
  data.push_back(logistic_data(542, 60, theta_star));
  DittoConfig cfg;
  cfg.rounds = 5;
  cfg.local_lr = 0.05;
  cfg.local_steps = 30;
  cfg.global_steps = 10;
  DittoResult fwd = ditto_fit(data, cfg);
  std::vector<ClientDataset> rev{data[2], data[0], data[1]};
  DittoResult per = ditto_fit(rev, cfg);
  CHECK((fwd.theta_global - per.theta_global).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("personalization distance shrinks monotonically in lambda") {
  Vec theta_star(2);
  theta_star << 1.1, 0.2;
  std::vector<ClientDataset> data;
  for (int k = 0; k < 2; ++k) data.push_back(logistic_data(550 + k, 150, theta_star));
  DittoConfig cfg;
  cfg.rounds = 6;
  cfg.local_lr = 0.05;
  cfg.local_steps = 40;
  cfg.global_steps = 600;
  double prev = 1e300;
  for (double lam : {0.0, 0.05, 0.5, 5.0, 50.0}) {
    cfg.lambda_prox = lam;
    DittoResult res = ditto_fit(data, cfg);
    double dist = (res.theta[0] - res.theta_global).norm();
    CHECK(dist <= prev + 1e-12);
    prev = dist;
  }
}

TEST_CASE("ditto validates its configuration") {
  DittoConfig cfg;
  cfg.local_lr = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.local_lr = 0.01;
  cfg.lambda_prox = -0.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.lambda_prox = 0.0;
  CHECK_NOTHROW(cfg.validate());
}

namespace {

std::vector<double> case1_worlds_rmse(int reps, const std::function<std::vector<Vec>(
                                                    const GeneratedWorld&, std::uint64_t)>& fit) {
  std::vector<double> out;
  for (int rep = 0; rep < reps; ++rep) {
    CaseSpec spec = make_case_spec(CaseId::C1, derive_seed(kC1Master, 0x9100 + rep));
    GeneratedWorld world = generate(spec);
    std::vector<Vec> estimates = fit(world, derive_seed(kC1Master, 0xBA5E + rep));
    out.push_back(a_rmse_theta(estimates, world.true_theta));
  }
  return out;
}

double mean_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return m / xs.size();
}

SgldConfig table_chain() {
  SgldConfig cfg;
  cfg.steps = 700;
  cfg.burn_in = 100;
  cfg.learning_rate = 0.05;
  cfg.batch_fraction = 0.9;
  return cfg;
}

}  // namespace

TEST_CASE("homogeneous benchmark: individual accuracy") {
  auto rmses = case1_worlds_rmse(10, [](const GeneratedWorld& world, std::uint64_t seed) {
    std::vector<Vec> est;
    for (std::size_t k = 0; k < world.clients.size(); ++k) {
      SgldConfig cfg = table_chain();
      cfg.seed = derive_seed(seed, k);
      est.push_back(individual_fit(world.clients[k], cfg, 1e-6));
    }
    return est;
  });
  CHECK(mean_of(rmses) <= 0.14);
}

TEST_CASE("homogeneous benchmark: centralized accuracy") {
  auto rmses = case1_worlds_rmse(10, [](const GeneratedWorld& world, std::uint64_t seed) {
    SgldConfig cfg = table_chain();
    cfg.learning_rate /= static_cast<double>(world.clients.size());
    cfg.seed = seed;
    Vec pooled = centralized_fit(world.clients, cfg, 1e-6);
    return std::vector<Vec>(world.clients.size(), pooled);
  });
  CHECK(mean_of(rmses) <= 0.08);
}

TEST_CASE("homogeneous benchmark: ditto accuracy") {
  auto rmses = case1_worlds_rmse(10, [](const GeneratedWorld& world, std::uint64_t seed) {
    DittoConfig cfg;
    cfg.rounds = 20;
    cfg.local_lr = 0.005;
    cfg.global_lr = 0.005;
    cfg.local_steps = 500;
    cfg.global_steps = 500;
    cfg.seed = seed;
    return ditto_fit(world.clients, cfg).theta;
  });
  CHECK(mean_of(rmses) <= 0.14);
}
