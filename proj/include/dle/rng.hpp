#pragma once

// Philox4x32-10 counter-based generator. Draw i of stream (seed, replica) is
// a pure function of (seed, replica, i), so Monte Carlo runs are reproducible
// bit-for-bit regardless of worker count or evaluation order.

#include <array>
#include <cstdint>

namespace dle {

struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// One logical random stream; draw(i) yields two independent 64-bit words.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replica = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        hi_{static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)} {}

  struct Draw {
    std::uint64_t a, b;
  };

  Draw draw(std::uint64_t index) const {
    const auto out = Philox4x32::block(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
         hi_[0], hi_[1]},
        key_);
    return {(static_cast<std::uint64_t>(out[0]) << 32) | out[1],
            (static_cast<std::uint64_t>(out[2]) << 32) | out[3]};
  }

  // uniform on [0,1), 53-bit mantissa
  static double to_unit(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> hi_;
};

}  // namespace dle
