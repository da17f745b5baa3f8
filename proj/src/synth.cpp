#include "synth.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace xfbci {

CaseId parse_case(const std::string& name) {
  if (name == "c1") return CaseId::C1;
  if (name == "c2") return CaseId::C2;
  if (name == "c3") return CaseId::C3;
  if (name == "c4") return CaseId::C4;
  if (name == "c5") return CaseId::C5;
  if (name == "c6") return CaseId::C6;
  if (name == "c7") return CaseId::C7;
  if (name == "extreme") return CaseId::Extreme;
  throw Error(Errc::config, "unknown case '" + name + "' (want c1..c7 or extreme)");
}

std::string case_name(CaseId id) {
  switch (id) {
    case CaseId::C1: return "c1";
    case CaseId::C2: return "c2";
    case CaseId::C3: return "c3";
    case CaseId::C4: return "c4";
    case CaseId::C5: return "c5";
    case CaseId::C6: return "c6";
    case CaseId::C7: return "c7";
    case CaseId::Extreme: return "extreme";
  }
  throw Error(Errc::config, "unknown case id");
}

void CaseSpec::validate() const {
  require(K >= 1 && static_cast<int>(clients.size()) == K, Errc::config,
          "case spec: client plans must cover 1..K");
  require(d >= 1, Errc::config, "case spec: d must be positive");
  for (const auto& c : clients)
    require(c.n >= 1 && c.sigma0 >= 0.0 && c.sigma1 >= 0.0, Errc::config,
            "case spec: sizes positive, noise scales non-negative");
}

namespace {

CoefLaw fixed(double v) { return CoefLaw{CoefLaw::Fixed, v, 0.0}; }
CoefLaw gauss(double mean, double var) { return CoefLaw{CoefLaw::Normal, mean, var}; }
CoefLaw beta(double a, double b) { return CoefLaw{CoefLaw::Beta, a, b}; }
CovariateLaw unif(double lo, double hi) { return CovariateLaw{CovariateLaw::Uniform, lo, hi}; }
CovariateLaw norm(double mean, double var) { return CovariateLaw{CovariateLaw::Normal, mean, var}; }

}  // namespace

CaseSpec make_case_spec(CaseId id, std::uint64_t seed) {
  CaseSpec s;
  s.id = id;
  s.seed = seed;
  switch (id) {
    case CaseId::C1:
      s.K = 5;
      s.d = 5;
      for (int k = 0; k < s.K; ++k)
        s.clients.push_back({1000, unif(-1, 1), 0.6, 6, 30, fixed(0.0), fixed(10.0),
                             fixed(15.0), 0.0, 0.0});
      break;
    case CaseId::C2:
    case CaseId::C3:
      s.K = 5;
      s.d = 5;
      for (int k = 0; k < s.K; ++k) {
        int n = id == CaseId::C2 ? 1000 : 1000 - 200 * k;
        s.clients.push_back({n, unif(-1, 1), 0.6, 6, 30, gauss(0, 2), gauss(10, 2),
                             gauss(15, 2), 1.0, 1.0});
      }
      break;
    case CaseId::C4:
    case CaseId::C5:
      s.K = 10;
      s.d = 5;
      for (int k = 0; k < s.K; ++k) {
        int n = id == CaseId::C4 ? 300 : 300 - 20 * k;
        ClientPlan p;
        p.n = n;
        if (k < 3) {
          p.xlaw = unif(-1, 1);
          p.a0 = 0.5; p.b0 = 1; p.c0 = 2;
          p.a1 = gauss(0, 2); p.b1 = gauss(6, 2); p.c1 = gauss(6, 2);
        } else if (k < 6) {
          p.xlaw = norm(2, 2);
          p.a0 = -5; p.b0 = 2; p.c0 = 4;
          p.a1 = beta(5, 1); p.b1 = gauss(3, 3); p.c1 = gauss(3, 3);
        } else {
          p.xlaw = norm(4, 2);
          p.a0 = -10; p.b0 = 6; p.c0 = 8;
          p.a1 = beta(10, 5); p.b1 = gauss(5, 5); p.c1 = gauss(5, 5);
        }
        p.sigma0 = p.sigma1 = 1.0;
        s.clients.push_back(p);
      }
      break;
    case CaseId::C6:
    case CaseId::C7:
      s.K = 20;
      s.d = 10;
      for (int k = 0; k < s.K; ++k) {
        int n = id == CaseId::C6 ? 300 : 300 - 10 * k;
        ClientPlan p;
        p.n = n;
        p.xlaw = k < 10 ? unif(-1, 1) : norm(0, 1);
        p.a0 = 0.5; p.b0 = 1; p.c0 = 2;
        p.a1 = gauss(0, 2); p.b1 = gauss(0, 1); p.c1 = gauss(0, 1);
        p.sigma0 = p.sigma1 = 1.0;
        s.clients.push_back(p);
      }
      break;
    case CaseId::Extreme:
      s.K = 10;
      s.d = 10;
      for (int k = 0; k < s.K; ++k) {
        ClientPlan p;
        p.n = 300;
        if (k < 4) {
          p.xlaw = unif(0, 30);
          p.a0 = -2; p.b0 = 4; p.c0 = 6;
          p.a1 = gauss(0, 3); p.b1 = gauss(4, 3); p.c1 = gauss(4, 3);
        } else {
          p.xlaw = norm(2, 2);
          p.a0 = -2; p.b0 = 2; p.c0 = 4;
          p.a1 = beta(10, 15); p.b1 = gauss(3, 3); p.c1 = gauss(3, 3);
        }
        p.sigma0 = p.sigma1 = 1.0;
        s.clients.push_back(p);
      }
      break;
  }
  return s;
}

namespace {

Vec draw_coef(const CoefLaw& law, int d, Rng& rng) {
  Vec v(d);
  switch (law.kind) {
    case CoefLaw::Fixed:
      v.setConstant(law.p1);
      break;
    case CoefLaw::Normal: {
      double sd = std::sqrt(law.p2);
      for (int j = 0; j < d; ++j) v[j] = rng.normal(law.p1, sd);
      break;
    }
    case CoefLaw::Beta:
      for (int j = 0; j < d; ++j) v[j] = rng.beta(law.p1, law.p2);
      break;
  }
  return v;
}

}  // namespace

GeneratedWorld generate(const CaseSpec& spec) {
  spec.validate();
  GeneratedWorld world;
  world.clients.resize(spec.K);
  world.true_theta.resize(spec.K);
  world.true_ate.resize(spec.K);

  for (int k = 0; k < spec.K; ++k) {
    const ClientPlan& plan = spec.clients[k];
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(k)));
    const int n = plan.n, d = spec.d;

    // Draw order is part of the reproducibility contract:
    // coefficients (a1, b1, c1), then X row by row, then W, then Y0, then Y1.
    Vec a1 = draw_coef(plan.a1, d, rng);
    Vec b1 = draw_coef(plan.b1, d, rng);
    Vec c1 = draw_coef(plan.c1, d, rng);

    ClientDataset ds;
    ds.x.resize(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j)
        ds.x(i, j) = plan.xlaw.kind == CovariateLaw::Uniform
                         ? rng.uniform(plan.xlaw.p1, plan.xlaw.p2)
                         : rng.normal(plan.xlaw.p1, std::sqrt(plan.xlaw.p2));

    ds.w.resize(n);
    for (int i = 0; i < n; ++i)
      ds.w[i] = rng.bernoulli(sigmoid(plan.a0 + ds.x.row(i).dot(a1))) ? 1.0 : 0.0;

    ds.y0.resize(n);
    for (int i = 0; i < n; ++i) {
      double mu = softplus(plan.b0 + ds.x.row(i).dot(b1));
      ds.y0[i] = plan.sigma0 > 0.0 ? rng.normal(mu, plan.sigma0) : mu;
    }
    ds.y1.resize(n);
    for (int i = 0; i < n; ++i) {
      double mu = softplus(plan.c0 + ds.x.row(i).dot(c1));
      ds.y1[i] = plan.sigma1 > 0.0 ? rng.normal(mu, plan.sigma1) : mu;
    }
    ds.y.resize(n);
    for (int i = 0; i < n; ++i) ds.y[i] = ds.w[i] == 1.0 ? ds.y1[i] : ds.y0[i];

    ds.validate();
    world.true_theta[k] = a1;
    world.true_ate[k] = (ds.y1 - ds.y0).mean();
    world.clients[k] = std::move(ds);
  }
  return world;
}

// ---- real-data analog -------------------------------------------------------

const std::vector<std::string> kEhdColumns = {
    "voltage", "frequency", "duty_ratio", "speed", "standoff", "nozzle", "line_width"};

namespace {

constexpr int kEhdVars = 6;

const double kMu[2][kEhdVars] = {{2.0, 1.2, 0.5, 3.0, 1.5, 0.8},
                                 {2.3, 0.9, 0.65, 3.3, 1.35, 1.0}};
const double kLoad[kEhdVars] = {0.60, 0.40, 0.15, -0.50, 0.35, 0.25};
const double kSd[kEhdVars] = {0.50, 0.35, 0.12, 0.60, 0.30, 0.20};

RowMat draw_ehd_vars(int client, int n, Rng& rng) {
  RowMat v(n, kEhdVars);
  for (int i = 0; i < n; ++i) {
    double z = rng.std_normal();
    for (int j = 0; j < kEhdVars; ++j)
      v(i, j) = kMu[client][j] + z * kLoad[j] + rng.std_normal() * kSd[j];
  }
  return v;
}

}  // namespace

std::vector<RawTable> ehd_analog(std::uint64_t seed, int rows_per_client) {
  require(rows_per_client >= 10, Errc::config, "ehd_analog: too few rows");
  std::vector<RawTable> tables(2);
  for (int c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, 0xE4D0 + c));
    RowMat v = draw_ehd_vars(c, rows_per_client, rng);
    RawTable& t = tables[c];
    t.columns = kEhdColumns;
    t.values.resize(rows_per_client, kEhdVars + 1);
    t.values.leftCols(kEhdVars) = v;
    for (int i = 0; i < rows_per_client; ++i) {
      double y = 10.0 + 3.0 * softplus(v(i, 0) - 1.5) + 0.8 * v(i, 1) + 1.5 * v(i, 2) -
                 1.2 * v(i, 3) + 0.25 * (v(i, 3) - 3.0) * (v(i, 3) - 3.0) +
                 0.5 * v(i, 4) + 2.0 * v(i, 5) +
                 0.6 * (v(i, 0) - 2.0) * (v(i, 5) - 0.8);
      t.values(i, kEhdVars) = y + rng.normal(0.0, 0.4);
    }
  }
  return tables;
}

std::vector<RawTable> ehd_injected(std::uint64_t seed, double effect_c, int target,
                                   int rows_per_client) {
  require(target >= 0 && target < kEhdVars, Errc::config, "ehd_injected: bad target index");
  const double coef[kEhdVars - 1] = {1.0, -0.8, 0.6, 0.9, -0.5};
  std::vector<RawTable> tables(2);
  for (int c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, 0xE4D0 + c));
    RowMat v = draw_ehd_vars(c, rows_per_client, rng);

    Vec col = v.col(target);
    std::vector<double> sorted(col.data(), col.data() + col.size());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    double med = sorted[sorted.size() / 2];
    if (sorted.size() % 2 == 0) {
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2 - 1, sorted.end());
      med = 0.5 * (med + sorted[sorted.size() / 2 - 1]);
    }

    RawTable& t = tables[c];
    t.columns = kEhdColumns;
    t.values.resize(rows_per_client, kEhdVars + 1);
    t.values.leftCols(kEhdVars) = v;
    for (int i = 0; i < rows_per_client; ++i) {
      double y = 5.0;
      int cix = 0;
      for (int j = 0; j < kEhdVars; ++j) {
        if (j == target) continue;
        y += coef[cix++] * v(i, j);
      }
      if (v(i, target) > med) y += effect_c;
      t.values(i, kEhdVars) = y + rng.normal(0.0, 0.4);
    }
  }
  return tables;
}

}  // namespace xfbci
