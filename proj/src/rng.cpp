#include "cocoa_abm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cocoa_abm {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; full avalanche, so consecutive counters decorrelate.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, RngDomain domain,
                     std::uint64_t entity_id) {
  std::uint64_t k = 0x243F6A8885A308D3ULL;
  k = mix64(k ^ master_seed);
  k = mix64(k ^ static_cast<std::uint64_t>(domain));
  k = mix64(k ^ entity_id);
  key_ = k;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t v = mix64(key_ + counter_ * kGamma);
  ++counter_;
  return v;
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian(double mean, double stddev) {
  if (stddev < 0.0) throw std::invalid_argument("gaussian stddev < 0");
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

bool RngStream::next_bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli p out of [0,1]");
  }
  return next_uniform() < p;
}

int RngStream::next_uniform_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int lo > hi");
  const double span = static_cast<double>(hi) - static_cast<double>(lo) + 1.0;
  const int v = lo + static_cast<int>(next_uniform() * span);
  return v > hi ? hi : v;
}

RngStream derive_stream(std::uint64_t master_seed, RngDomain domain,
                        std::uint64_t entity_id) {
  return RngStream(master_seed, domain, entity_id);
}

}  // namespace cocoa_abm
