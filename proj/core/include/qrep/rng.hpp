#pragma once

#include <cstdint>
#include <random>

namespace qrep {

// splitmix64; used only to derive well-mixed per-trial seeds.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Per-trial random stream derived from (master seed, stream index, substream).
// Trials own independent streams, so results do not depend on how trials are
// scheduled across workers.
class RngStream {
 public:
  RngStream(uint64_t master_seed, uint64_t stream, uint64_t substream = 0)
      : eng_(mix64(mix64(mix64(master_seed) ^ stream) ^ (substream * 0x9e3779b97f4a7c15ull))) {}

  bool bit() { return eng_() & 1; }
  bool bernoulli(double p) { return uniform() < p; }
  double uniform() {
    return double(eng_() >> 11) * 0x1.0p-53;
  }
  // uniform integer in [0, n)
  uint64_t below(uint64_t n) {
    uint64_t bound = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do { v = eng_(); } while (v >= bound);
    return v % n;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace qrep
