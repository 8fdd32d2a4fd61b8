#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace exrmt {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

// Standard normal variates addressed by (master_seed, sample_index, entry).
// Each Philox block yields one Box-Muller pair, so entry 2j and 2j+1 share a block.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t master_seed, std::uint64_t sample_index)
      : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
        sample_index_(sample_index) {}

  double next() {
    if (!have_spare_) {
      fill_pair(block_index_++);
      have_spare_ = true;
      return pair_[0];
    }
    have_spare_ = false;
    return pair_[1];
  }

  // Random access; does not disturb the sequential position.
  double at(std::uint64_t entry) const {
    GaussianStream copy(*this);
    copy.fill_pair(entry / 2);
    return copy.pair_[entry % 2];
  }

 private:
  void fill_pair(std::uint64_t block) {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(sample_index_),
                                  static_cast<std::uint32_t>(sample_index_ >> 32),
                                  static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32)};
    const auto w = Philox4x32::block(ctr, key_);
    const std::uint64_t a = ((std::uint64_t{w[0]} << 32) | w[1]) >> 11;
    const std::uint64_t b = ((std::uint64_t{w[2]} << 32) | w[3]) >> 11;
    constexpr double scale = 0x1.0p-53;
    const double u1 = (static_cast<double>(a) + 1.0) * scale;  // (0, 1]
    const double u2 = static_cast<double>(b) * scale;          // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    pair_ = {r * std::cos(t), r * std::sin(t)};
  }

  Philox4x32::Key key_;
  std::uint64_t sample_index_;
  std::uint64_t block_index_ = 0;
  std::array<double, 2> pair_{};
  bool have_spare_ = false;
};

}  // namespace exrmt
