#pragma once

#include <array>
#include <cstdint>

namespace tlif {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
      ctr = Counter{static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                    static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += w0;
      key[1] += w1;
    }
    return ctr;
  }
};

/// Stream of uniforms determined by (seed, stream_id) alone. Block i of the
/// stream is Philox(counter = (i, stream_id), key = seed); each block yields
/// two doubles, so `position` counts consumed variates.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return position_; }

  /// Uniform on the open interval (0, 1): (k + 0.5) 2^-53 for a 53-bit k.
  double next_uniform() noexcept {
    const std::uint64_t block_index = position_ >> 1;
    if (!cached_ || cached_index_ != block_index) {
      cache_ = Philox4x32::block(
          {static_cast<std::uint32_t>(block_index), static_cast<std::uint32_t>(block_index >> 32),
           static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
          {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
      cached_ = true;
      cached_index_ = block_index;
    }
    const std::size_t lane = (position_ & 1u) * 2;
    const std::uint64_t bits = (std::uint64_t{cache_[lane]} << 32) | cache_[lane + 1];
    ++position_;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Skips `count` variates in O(1).
  void jump(std::uint64_t count) noexcept { position_ += count; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  bool cached_ = false;
  std::uint64_t cached_index_ = 0;
  Philox4x32::Counter cache_{};
};

}  // namespace tlif
