#pragma once

#include <array>
#include <cstdint>

namespace glp {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). Output is a pure function of (counter, key).
class Philox4x32 {
public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

constexpr Philox4x32::Key philox_key(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Uniform on the open interval (0, 1) built from 52 random bits; both ends
// are excluded exactly in double precision.
constexpr double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

// Derived 64-bit seed for (master, stream, index). Distinct (stream, index)
// pairs map to distinct counters, so derived seeds are independent draws.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  const auto out = Philox4x32::generate(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32) ^ 0x5eedu},
      philox_key(master));
  return (std::uint64_t{out[0]} << 32) | out[1];
}

// Sequential uniform stream over a counter-based generator: value i depends
// only on (seed, tag, i).
class UniformStream {
public:
  UniformStream(std::uint64_t seed, std::uint32_t tag) : key_(philox_key(seed)), tag_(tag) {}

  double at(std::uint64_t i) const noexcept {
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), tag_, 0x0u}, key_);
    return to_open_unit(out[0], out[1]);
  }

  double next() noexcept { return at(position_++); }
  std::uint64_t position() const noexcept { return position_; }

private:
  Philox4x32::Key key_;
  std::uint32_t tag_;
  std::uint64_t position_ = 0;
};

}  // namespace glp
