#ifndef FRACFP_RANDOM_HPP
#define FRACFP_RANDOM_HPP

#include <array>
#include <cstdint>

namespace fracfp {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Identifies one random stream: the master seed is the Philox key and the
/// stream index occupies the upper half of the counter, so distinct indices
/// never share a counter value.
struct RNGStreamSpec {
  std::uint64_t seed;
  std::uint64_t stream;
};

class StreamRng {
 public:
  explicit StreamRng(RNGStreamSpec spec);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double exponential();
  double normal();

 private:
  void refill();
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fracfp

#endif  // FRACFP_RANDOM_HPP
