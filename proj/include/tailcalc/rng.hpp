#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace tailcalc {

// splitmix64 step; used both as a stream mixer and to expand seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256** seeded via splitmix64. All sampling in the library goes
// through this generator so that results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs and
  // inverse CDFs are always finite.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Derives the substream seed for one sampling block. Sampling is chunked in
// fixed-size blocks; each block's generator depends only on (seed, stream,
// block), so results are identical for any worker count.
inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t block) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64_next(s);
  s ^= 0x6A09E667F3BCC909ULL + stream;
  std::uint64_t b = splitmix64_next(s);
  s ^= 0xBB67AE8584CAA73BULL + block;
  std::uint64_t c = splitmix64_next(s);
  return a ^ (b * 0x9E3779B97F4A7C15ULL) ^ c;
}

inline constexpr std::size_t kSampleBlockSize = 8192;

// Worker cap for block-parallel sampling. 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(block_index, row_begin, row_end) over [0, n) in blocks of
// kSampleBlockSize rows, possibly on several threads. fn must only write to
// rows in its own range; the partition is independent of the thread count.
void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn);

}  // namespace tailcalc
