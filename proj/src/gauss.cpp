#include "gauss.hpp"

namespace xfbci {

GaussNP::GaussNP(Vec e, Mat l) : eta(std::move(e)), lam(std::move(l)) {
  require(lam.rows() == lam.cols() && lam.rows() == eta.size(), Errc::runtime,
          "natural-parameter shape mismatch");
  // EP subtractions accumulate asymmetry; kill it at every construction.
  lam = ((lam + lam.transpose()) * 0.5).eval();
}

GaussNP GaussNP::zero(int d) { return GaussNP(Vec::Zero(d), Mat::Zero(d, d)); }

GaussNP GaussNP::isotropic(int d, double precision) {
  return GaussNP(Vec::Zero(d), precision * Mat::Identity(d, d));
}

GaussNP product(const GaussNP& a, const GaussNP& b) {
  require(a.dim() == b.dim(), Errc::runtime, "product: dimension mismatch");
  return GaussNP(a.eta + b.eta, a.lam + b.lam);
}

GaussNP quotient(const GaussNP& a, const GaussNP& b) {
  require(a.dim() == b.dim(), Errc::runtime, "quotient: dimension mismatch");
  return GaussNP(a.eta - b.eta, a.lam - b.lam);
}

Moments to_moments(const GaussNP& g) {
  Eigen::LLT<Mat> llt(g.lam);
  require(llt.info() == Eigen::Success, Errc::runtime,
          "to_moments: precision not positive definite");
  Moments m;
  m.sigma = llt.solve(Mat::Identity(g.dim(), g.dim()));
  m.mu = llt.solve(g.eta);
  return m;
}

GaussNP from_moments(const Vec& mu, const Mat& sigma) {
  Eigen::LLT<Mat> llt((sigma + sigma.transpose()) * 0.5);
  require(llt.info() == Eigen::Success, Errc::runtime,
          "from_moments: covariance not positive definite");
  Mat lam = llt.solve(Mat::Identity(mu.size(), mu.size()));
  Vec eta = lam * mu;
  return GaussNP(std::move(eta), std::move(lam));
}

Vec mean_of(const GaussNP& g) {
  Eigen::LLT<Mat> llt(g.lam);
  require(llt.info() == Eigen::Success, Errc::runtime,
          "mean_of: precision not positive definite");
  return llt.solve(g.eta);
}

Mat psd_repair(const Mat& m, double floor) {
  Mat sym = (m + m.transpose()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  Vec vals = es.eigenvalues();
  bool clean = true;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < floor) {
      vals[i] = floor;
      clean = false;
    }
  }
  if (clean) return sym;
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

double min_eigenvalue(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.transpose()) * 0.5,
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Vec grad_log_density(const GaussNP& g, const Vec& theta) {
  require(theta.size() == g.eta.size(), Errc::runtime,
          "grad_log_density: dimension mismatch");
  return g.eta - g.lam * theta;
}

}  // namespace xfbci
