#include "sgld.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace xfbci {

void SgldConfig::validate() const {
  require(steps > 0, Errc::config, "sgld: steps must be positive");
  require(burn_in >= 0 && burn_in < steps, Errc::config, "sgld: need 0 <= burn_in < steps");
  require(learning_rate > 0.0, Errc::config, "sgld: learning_rate must be positive");
  require(batch_fraction > 0.0 && batch_fraction <= 1.0, Errc::config,
          "sgld: batch_fraction must be in (0,1]");
  require(lr_decay >= 0.0, Errc::config, "sgld: lr_decay must be >= 0");
  require(noise_scale >= 0.0, Errc::config, "sgld: noise_scale must be >= 0");
}

SampleSummary sgld_run(const BatchGradFn& grad_loglik, const GradFn& grad_prior,
                       int n_total, const Vec& theta0, const SgldConfig& cfg) {
  cfg.validate();
  require(n_total >= 1, Errc::runtime, "sgld: empty dataset");
  const int d = static_cast<int>(theta0.size());
  const std::size_t batch =
      std::max<std::size_t>(1, static_cast<std::size_t>(cfg.batch_fraction * n_total));
  const double scale = static_cast<double>(n_total) / static_cast<double>(batch);

  Rng rng(cfg.seed);
  std::vector<std::uint32_t> idx;
  Vec theta = theta0;
  Vec sum = Vec::Zero(d);
  Mat outer = Mat::Zero(d, d);
  int kept = 0;

  for (int t = 0; t < cfg.steps; ++t) {
    const double eps = cfg.lr_decay == 0.0
                           ? cfg.learning_rate
                           : cfg.learning_rate / std::pow(1.0 + t, cfg.lr_decay);
    rng.sample_without_replacement(n_total, batch, idx);
    Vec drift = scale * grad_loglik(theta, idx) + grad_prior(theta);
    const double noise_sd = cfg.noise_scale * (cfg.noise_is_sd ? eps : std::sqrt(eps));
    for (int j = 0; j < d; ++j)
      theta[j] += 0.5 * eps * drift[j] + noise_sd * rng.std_normal();
    for (int j = 0; j < d; ++j)
      require(std::isfinite(theta[j]) && std::abs(theta[j]) < 1e12, Errc::runtime,
              "sgld: non-finite iterate at step " + std::to_string(t));
    if (t >= cfg.burn_in) {
      sum += theta;
      outer.noalias() += theta * theta.transpose();
      ++kept;
    }
  }

  SampleSummary out;
  out.n_retained = kept;
  out.mean = sum / kept;
  if (kept > 1) {
    out.sample_cov =
        (outer - kept * out.mean * out.mean.transpose()) / static_cast<double>(kept - 1);
    out.sample_cov = ((out.sample_cov + out.sample_cov.transpose()) * 0.5).eval();
  } else {
    out.sample_cov = Mat::Zero(d, d);
  }
  return out;
}

}  // namespace xfbci
