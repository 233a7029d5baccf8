#include "hardnet/rng.hpp"

#include "hardnet/numerics.hpp"

namespace hardnet {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> tags) {
  std::uint64_t state = master;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t t : tags) {
    state ^= t * 0xff51afd7ed558ccdULL;
    out = splitmix64(state);
  }
  return out;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t bound = n * (~std::uint64_t{0} / n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= bound);
  return x % n;
}

double Rng::normal() { return inv_normal_cdf(uniform_open()); }

Rng derive_rng(std::uint64_t master,
               std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(master, tags));
}

}  // namespace hardnet
