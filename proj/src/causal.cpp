#include "causal.hpp"

#include <algorithm>
#include <cmath>

namespace xfbci {

MatchedPairs nnm_match(const Vec& scores, const Vec& w, double caliper) {
  require(scores.size() == w.size(), Errc::runtime, "nnm_match: length mismatch");
  std::vector<int> treated, control;
  for (int i = 0; i < w.size(); ++i) (w[i] == 1.0 ? treated : control).push_back(i);
  require(!treated.empty(), Errc::runtime, "nnm_match: no treated units");
  require(!control.empty(), Errc::runtime, "nnm_match: no control units");

  MatchedPairs out;
  std::vector<double> st, sc;
  for (int m : treated) {
    int best = control[0];
    double best_d = std::abs(scores[m] - scores[control[0]]);
    for (std::size_t c = 1; c < control.size(); ++c) {
      double dd = std::abs(scores[m] - scores[control[c]]);
      // strict improvement only, so the first (lowest-index) control wins ties
      if (dd < best_d) {
        best_d = dd;
        best = control[c];
      }
    }
    if (caliper > 0.0 && best_d > caliper) continue;
    out.pairs.emplace_back(m, best);
    st.push_back(scores[m]);
    sc.push_back(scores[best]);
  }
  out.scores_treated = Eigen::Map<Vec>(st.data(), static_cast<int>(st.size()));
  out.scores_control = Eigen::Map<Vec>(sc.data(), static_cast<int>(sc.size()));
  return out;
}

AteEstimate estimate_ate(const ClientDataset& data, const MatchedPairs& pairs) {
  require(!pairs.pairs.empty(), Errc::runtime, "estimate_ate: no matched pairs");
  double acc = 0.0;
  for (auto [m, j] : pairs.pairs) {
    require(m >= 0 && m < data.n() && j >= 0 && j < data.n(), Errc::runtime,
            "estimate_ate: pair index out of range");
    acc += data.y[m] - data.y[j];
  }
  return AteEstimate{acc / pairs.pairs.size(), static_cast<int>(pairs.pairs.size())};
}

double true_ate(const ClientDataset& data) {
  require(data.has_potentials(), Errc::runtime, "true_ate: potential outcomes missing");
  return (data.y1 - data.y0).mean();
}

double regression_mse_eval(const ClientDataset& data, const MatchedPairs* pairs) {
  const int d = data.dim();
  require(data.n() >= d + 2, Errc::runtime, "regression_mse_eval: too few rows");

  std::vector<int> rows;
  if (pairs == nullptr) {
    rows.resize(data.n());
    for (int i = 0; i < data.n(); ++i) rows[i] = i;
  } else {
    rows.reserve(2 * pairs->pairs.size());
    for (auto [m, j] : pairs->pairs) {
      rows.push_back(m);
      rows.push_back(j);  // multiplicity kept: a reused control appears again
    }
    require(!rows.empty(), Errc::runtime, "regression_mse_eval: empty matched set");
  }

  const int n = static_cast<int>(rows.size());
  Mat design(n, d + 2);
  Vec target(n);
  for (int r = 0; r < n; ++r) {
    design.row(r).head(d) = data.x.row(rows[r]);
    design(r, d) = data.w[rows[r]];
    design(r, d + 1) = 1.0;
    target[r] = data.y[rows[r]];
  }

  Eigen::ColPivHouseholderQR<Mat> qr(design);
  require(qr.rank() == d + 2, Errc::runtime, "regression_mse_eval: degenerate design matrix");
  Vec beta = qr.solve(target);
  Vec resid = target - design * beta;
  return resid.squaredNorm() / n;
}

Vec binarize_treatment(const Vec& column, BinarizeRule rule, double t) {
  require(column.size() > 0, Errc::runtime, "binarize: empty column");
  require(column.allFinite(), Errc::runtime, "binarize: non-finite value");
  double cut = t;
  if (rule == BinarizeRule::Median) {
    require(column.minCoeff() != column.maxCoeff(), Errc::runtime,
            "binarize: constant treatment column under median rule");
    std::vector<double> sorted(column.data(), column.data() + column.size());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    cut = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  Vec w(column.size());
  for (int i = 0; i < column.size(); ++i) w[i] = column[i] > cut ? 1.0 : 0.0;
  return w;
}

}  // namespace xfbci
