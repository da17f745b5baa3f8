#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace xfbci {

// Stream splitting rule: every consumer (replication, client chain, generator)
// gets its own engine seeded by derive_seed(parent, tag). Tags are small
// integers documented at each call site; the mixer keeps sibling streams
// decorrelated even for adjacent tags.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return unit_(eng_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(eng_); }
  double std_normal() { return gauss_(eng_); }
  double normal(double mu, double sd) { return mu + sd * gauss_(eng_); }
  double beta(double a, double b) {
    std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
    double x = ga(eng_), y = gb(eng_);
    return x / (x + y);
  }
  bool bernoulli(double p) { return unit_(eng_) < p; }

  // k distinct indices out of [0, n): partial Fisher-Yates on a fresh
  // identity permutation, so each call is an exact uniform draw.
  void sample_without_replacement(std::size_t n, std::size_t k, std::vector<std::uint32_t>& out);

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> gauss_{0.0, 1.0};
  std::vector<std::uint32_t> perm_;
};

}  // namespace xfbci
