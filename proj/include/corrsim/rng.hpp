#pragma once

#include <cstdint>
#include <random>

namespace corrsim {

/// Reproducible random stream. The engine is a 64-bit Mersenne twister
/// (period 2^19937 - 1) whose state is derived by std::seed_seq from the
/// pair (seed, stream_id), so every (seed, stream_id) names an independent,
/// platform-independent sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0,1): a multiple of 2^-53, never 0 or 1.
  double uniform_open() {
    for (;;) {
      const std::uint64_t k = engine_() >> 11;
      if (k != 0) return static_cast<double>(k) * 0x1p-53;
    }
  }

  /// Fair coin.
  int bit() { return static_cast<int>(engine_() >> 63); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace corrsim
