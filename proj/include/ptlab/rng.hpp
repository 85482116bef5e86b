#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace ptlab {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
///
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits. The
/// output for a given (counter, key) pair never depends on any earlier call,
/// which is what lets every trial of an experiment own an independent stream.
class Philox4x32 {
public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = apply_round(ctr, key);
    }
    return ctr;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter apply_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// A reproducible random stream identified by (seed, stream_index).
///
/// The seed is the Philox key; the stream index occupies the upper half of the
/// counter and the draw ordinal the lower half. Streams are therefore pure
/// functions of their identity: creating or consuming other streams has no
/// effect on this one. Satisfies UniformRandomBitGenerator, so it plugs into
/// the <random> distributions.
class RngStream {
public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
      : seed_(seed), stream_index_(stream_index) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (buffered_ == 0) refill();
    --buffered_;
    return buffer_[buffered_];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Standard complex Gaussian: independent real and imaginary parts, each of
  /// variance 1/2, so E|z|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double kComponentStddev = 0.70710678118654752440;
    const double re = normal_(*this);
    const double im = normal_(*this);
    return {kComponentStddev * re, kComponentStddev * im};
  }

  double normal() { return normal_(*this); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

private:
  void refill() noexcept {
    const Philox4x32::Counter ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_index_),
        static_cast<std::uint32_t>(stream_index_ >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                              static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    ++block_;
    // Consumed back to front by operator().
    buffer_[1] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[0] = (std::uint64_t{out[3]} << 32) | out[2];
    buffered_ = 2;
  }

  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t stream_index) noexcept {
  return RngStream(seed, stream_index);
}

/// Anything that can hand out standard complex Gaussians. The samplers are
/// written against this so tests can force specific draws.
template <class G>
concept ComplexGaussianSource = requires(G& g) {
  { g.complex_normal() } -> std::convertible_to<std::complex<double>>;
};

}  // namespace ptlab
