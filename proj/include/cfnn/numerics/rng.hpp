#pragma once

#include <array>
#include <cstdint>

namespace cfnn::numerics {

/// Counter-based random stream built on Philox4x64-10.
///
/// The key is (seed, stream_id) and the counter is the index of the
/// 256-bit output block, so any draw is a pure function of
/// (seed, stream_id, position). Child streams are derived with split(),
/// which hashes (stream_id, k) into a fresh stream id under the same seed;
/// that is how per-point and per-sample streams are obtained without any
/// dependence on evaluation order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return block_ * 4 + static_cast<std::uint64_t>(next_word_); }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;

  RngStream split(std::uint64_t k) const noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int next_word_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Raw Philox4x64-10 block function.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key) noexcept;

RngStream make_rng(std::uint64_t seed) noexcept;
RngStream split_stream(const RngStream& rng, std::uint64_t k) noexcept;

}  // namespace cfnn::numerics
