#pragma once

#include <cstdint>
#include <vector>

#include "common.hpp"

namespace xfbci {

// Row-major so the per-sample gradient loop walks contiguous memory.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ClientDataset {
  RowMat x;       // N x d covariates
  Vec w;          // treatment, entries in {0,1}
  Vec y;          // observed outcome
  Vec y0, y1;     // potential outcomes; empty outside simulation

  int n() const { return static_cast<int>(x.rows()); }
  int dim() const { return static_cast<int>(x.cols()); }
  bool has_potentials() const { return y0.size() == x.rows() && y1.size() == x.rows(); }

  // w binary, shapes agree, everything finite, y consistent with potentials.
  void validate() const;
};

double sigmoid(double z);
double softplus(double z);

double log_likelihood(const ClientDataset& data, const Vec& theta);

// Exact gradient of the batch log-likelihood: sum_i x_i (w_i - sigmoid(x_i' theta)).
Vec grad_log_likelihood(const ClientDataset& data, const Vec& theta,
                        const std::vector<std::uint32_t>& batch);

double propensity_score(const Vec& x_row, const Vec& theta_hat);

// Scores for every row; the matching entry point.
Vec propensity_scores(const ClientDataset& data, const Vec& theta_hat);

}  // namespace xfbci
