#pragma once

#include <utility>
#include <vector>

#include "model.hpp"

namespace xfbci {

struct MatchedPairs {
  std::vector<std::pair<int, int>> pairs;  // (treated_index, control_index)
  Vec scores_treated;
  Vec scores_control;
};

struct AteEstimate {
  double tau_hat = 0.0;
  int n_pairs = 0;
};

// Nearest-neighbor matching on propensity scores, one control per treated,
// with replacement; ties go to the lowest control index. caliper <= 0 keeps
// every pair (the default protocol has no caliper).
MatchedPairs nnm_match(const Vec& scores, const Vec& w, double caliper = 0.0);

// Mean of y[treated] - y[matched control]. Treated-minus-control over treated
// units; the reporting calls this the ATE even though matching on treated
// units makes it an ATT-style quantity.
AteEstimate estimate_ate(const ClientDataset& data, const MatchedPairs& pairs);

// mean(y1 - y0); requires the potential outcomes (simulation worlds only).
double true_ate(const ClientDataset& data);

// OLS of y on (x, w, intercept). pairs == nullptr fits and evaluates on the
// full dataset ("Before"); otherwise on the matched treated and control rows
// with multiplicity ("After"). In-sample MSE either way.
double regression_mse_eval(const ClientDataset& data, const MatchedPairs* pairs);

enum class BinarizeRule { Median, Threshold };

// Median: 1 iff strictly above the median (ties to 0); Threshold: 1 iff > t.
Vec binarize_treatment(const Vec& column, BinarizeRule rule, double t = 0.0);

}  // namespace xfbci
