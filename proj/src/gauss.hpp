#pragma once

#include "common.hpp"

namespace xfbci {

// Gaussian factor in natural parameters: density exp(eta' theta - theta' lam theta / 2)
// up to normalization. lam may be indefinite or zero; EP cavities routinely are.
// Moment conversion is only legal for positive definite lam.
struct GaussNP {
  Vec eta;
  Mat lam;

  GaussNP() = default;
  GaussNP(Vec e, Mat l);

  static GaussNP zero(int d);
  static GaussNP isotropic(int d, double precision);  // eta = 0, lam = precision * I

  int dim() const { return static_cast<int>(eta.size()); }
};

GaussNP product(const GaussNP& a, const GaussNP& b);
GaussNP quotient(const GaussNP& a, const GaussNP& b);

struct Moments {
  Vec mu;
  Mat sigma;
};

// Fails with a runtime error unless lam is positive definite.
Moments to_moments(const GaussNP& g);
GaussNP from_moments(const Vec& mu, const Mat& sigma);

// Mean only (solve lam mu = eta); same positive-definiteness requirement.
Vec mean_of(const GaussNP& g);

// Clamp eigenvalues below floor up to floor. Total on symmetric input.
Mat psd_repair(const Mat& m, double floor);

double min_eigenvalue(const Mat& m);

// eta - lam * theta; valid for indefinite lam too.
Vec grad_log_density(const GaussNP& g, const Vec& theta);

}  // namespace xfbci
