#include "model.hpp"

#include <cmath>

namespace xfbci {

void ClientDataset::validate() const {
  require(x.rows() >= 1, Errc::runtime, "dataset: empty");
  require(w.size() == x.rows() && y.size() == x.rows(), Errc::runtime,
          "dataset: column length mismatch");
  require(x.allFinite() && w.allFinite() && y.allFinite(), Errc::runtime,
          "dataset: non-finite entry");
  for (int i = 0; i < w.size(); ++i)
    require(w[i] == 0.0 || w[i] == 1.0, Errc::runtime,
            "dataset: treatment not binary at row " + std::to_string(i));
  if (y0.size() || y1.size()) {
    require(has_potentials(), Errc::runtime, "dataset: partial potential outcomes");
    for (int i = 0; i < w.size(); ++i)
      require(y[i] == (w[i] == 1.0 ? y1[i] : y0[i]), Errc::runtime,
              "dataset: y inconsistent with potentials at row " + std::to_string(i));
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double log_likelihood(const ClientDataset& data, const Vec& theta) {
  require(theta.size() == data.x.cols(), Errc::runtime, "log_likelihood: dim mismatch");
  const double* xp = data.x.data();
  const int n = data.n(), d = data.dim();
  double ll = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = 0.0;
    const double* row = xp + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) z += row[j] * theta[j];
    // w log s + (1-w) log(1-s) = w z - log(1 + e^z), stable for |z| up to ~700
    ll += data.w[i] * z - softplus(z);
  }
  return ll;
}

Vec grad_log_likelihood(const ClientDataset& data, const Vec& theta,
                        const std::vector<std::uint32_t>& batch) {
  require(theta.size() == data.x.cols(), Errc::runtime, "grad: dim mismatch");
  require(!batch.empty(), Errc::runtime, "grad: empty batch");
  const double* xp = data.x.data();
  const int d = data.dim();
  Vec g = Vec::Zero(d);
  for (std::uint32_t i : batch) {
    const double* row = xp + static_cast<std::size_t>(i) * d;
    double z = 0.0;
    for (int j = 0; j < d; ++j) z += row[j] * theta[j];
    double r = data.w[i] - sigmoid(z);
    for (int j = 0; j < d; ++j) g[j] += r * row[j];
  }
  return g;
}

double propensity_score(const Vec& x_row, const Vec& theta_hat) {
  require(x_row.size() == theta_hat.size(), Errc::runtime, "propensity: dim mismatch");
  return sigmoid(x_row.dot(theta_hat));
}

Vec propensity_scores(const ClientDataset& data, const Vec& theta_hat) {
  require(theta_hat.size() == data.x.cols(), Errc::runtime, "propensity: dim mismatch");
  Vec s(data.n());
  for (int i = 0; i < data.n(); ++i) s[i] = sigmoid(data.x.row(i).dot(theta_hat));
  return s;
}

}  // namespace xfbci
