#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lshape {

/// xoshiro256++ stream keyed by (seed, stream_id).
///
/// The seed is expanded with SplitMix64; stream k starts k jumps (of 2^128 draws each)
/// after stream 0, so streams with distinct ids never overlap in practice. Identical
/// keys reproduce identical sequences on every platform.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void jump();

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace lshape
