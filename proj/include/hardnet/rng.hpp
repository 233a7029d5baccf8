#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hardnet {

// Tags for deriving independent substreams from one master seed. Every
// randomized component draws from its own derived stream, so skipping work in
// one component (e.g. lazy padding) never shifts another component's draws.
enum class Stream : std::uint64_t {
  Graph = 1,
  Secret = 2,
  Labels = 3,
  ParamNoise = 4,
  Example = 5,
  InputNoise = 6,
  Learner = 7,
  Trial = 8,
  Check = 9,
  PhantomSecret = 10,
  Input = 11,
};

std::uint64_t splitmix64(std::uint64_t& state);

// Mixes a master seed with a tag list into a child seed (splitmix64 chain).
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> tags);

inline std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

// Deterministic random stream. The engine is mt19937_64 (fully specified by
// the standard); all floating-point conversions are explicit so the values do
// not depend on library-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0,1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1); never returns 0 or 1 exactly.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // True with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n), unbiased.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via the inverse CDF (deterministic, ~1e-15 relative).
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 eng_;
};

Rng derive_rng(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

}  // namespace hardnet
