#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace xfbci {

enum class CaseId { C1, C2, C3, C4, C5, C6, C7, Extreme };

CaseId parse_case(const std::string& name);  // "c1".."c7", "extreme"
std::string case_name(CaseId id);

struct CovariateLaw {
  enum Kind { Uniform, Normal } kind = Uniform;
  // Uniform: p1 = lo, p2 = hi. Normal: p1 = mean, p2 = variance (the case
  // tables quote variances, not standard deviations).
  double p1 = -1.0, p2 = 1.0;
};

struct CoefLaw {
  enum Kind { Fixed, Normal, Beta } kind = Fixed;
  // Fixed: every coordinate = p1. Normal: mean p1, variance p2 per coordinate.
  // Beta: shape pair (p1, p2) per coordinate.
  double p1 = 0.0, p2 = 0.0;
};

struct ClientPlan {
  int n = 0;
  CovariateLaw xlaw;
  double a0 = 0.0, b0 = 0.0, c0 = 0.0;
  CoefLaw a1, b1, c1;
  double sigma0 = 1.0, sigma1 = 1.0;
};

struct CaseSpec {
  CaseId id = CaseId::C1;
  int K = 0;
  int d = 0;
  std::vector<ClientPlan> clients;
  std::uint64_t seed = 0;

  void validate() const;
};

CaseSpec make_case_spec(CaseId id, std::uint64_t seed);

struct GeneratedWorld {
  std::vector<ClientDataset> clients;  // y0, y1 populated
  std::vector<Vec> true_theta;         // assignment coefficients a1 per client
  std::vector<double> true_ate;        // mean(y1 - y0) per client
};

// Per client: X per covariate law, coefficients per case, W ~ Bern(sigmoid(a0 + X a1)),
// Y(0) ~ N(softplus(b0 + X b1), sigma0^2), Y(1) ~ N(softplus(c0 + X c1), sigma1^2).
// Client streams are derived from spec.seed by client index, so generation is
// order-independent across clients.
GeneratedWorld generate(const CaseSpec& spec);

// ---- real-data analog -------------------------------------------------------

// A plain named-column table, the shape the analyze workflow ingests.
struct RawTable {
  std::vector<std::string> columns;
  RowMat values;  // one row per observation
};

extern const std::vector<std::string> kEhdColumns;  // 6 variables + outcome

// Two-client, six-variable semi-synthetic analog of the printing experiment
// schema. One latent factor correlates the process variables, so a median
// split on any of them is confounded with the rest; the response is curved
// (saturation, a quadratic term, one interaction) so a linear fit improves on
// the matched, range-restricted sample.
std::vector<RawTable> ehd_analog(std::uint64_t seed, int rows_per_client = 105);

// Same covariate process, but the outcome depends only on the non-target
// variables plus effect_c * 1{target above its median}: a known injected
// effect for sign-recovery checks. target indexes kEhdColumns.
std::vector<RawTable> ehd_injected(std::uint64_t seed, double effect_c, int target,
                                   int rows_per_client = 105);

}  // namespace xfbci
