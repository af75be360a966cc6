#pragma once

#include <cstdint>
#include <limits>

namespace cocoa_abm {

// Randomness is split into domains so that draws made by one subsystem can
// never shift the sequences seen by another. A run that makes zero app-domain
// draws and one that makes thousands observe identical schedule/epidemic
// randomness for the same master seed.
enum class RngDomain : std::uint64_t {
  Init = 1,
  Schedule = 2,
  Epidemic = 3,
  Hospital = 4,
  App = 5,
};

// Entity id for streams that belong to the whole run rather than one agent.
inline constexpr std::uint64_t kGlobalEntity =
    std::numeric_limits<std::uint64_t>::max();

// Counter-based stream: the n-th value is a pure function of
// (master_seed, domain, entity_id, n). Streams are cheap value types; copying
// one forks the sequence at the current counter.
//
// Counter cost per draw: next_uniform / next_bernoulli / next_uniform_int
// advance by 1; next_gaussian advances by 2 (Box-Muller, cosine branch).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, RngDomain domain,
            std::uint64_t entity_id);

  // Uniform double in [0, 1), 53-bit resolution.
  double next_uniform();

  // mean + std * sqrt(-2 ln(1-u1)) * cos(2*pi*u2). Throws on std < 0.
  double next_gaussian(double mean, double stddev);

  // next_uniform() < p. Throws on p outside [0, 1].
  bool next_bernoulli(double p);

  // Uniform integer in [lo, hi], both inclusive. Throws on lo > hi.
  int next_uniform_int(int lo, int hi);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t next_u64();

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

RngStream derive_stream(std::uint64_t master_seed, RngDomain domain,
                        std::uint64_t entity_id);

}  // namespace cocoa_abm
