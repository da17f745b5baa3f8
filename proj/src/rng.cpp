#include "rng.hpp"

namespace xfbci {

namespace {

// One splitmix64 output step.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ mix64(tag ^ 0xD1B54A32D192ED03ULL));
}

void Rng::sample_without_replacement(std::size_t n, std::size_t k,
                                     std::vector<std::uint32_t>& out) {
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = static_cast<std::uint32_t>(i);
  out.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::size_t j = pick(eng_);
    std::swap(perm_[i], perm_[j]);
    out[i] = perm_[i];
  }
}

}  // namespace xfbci
