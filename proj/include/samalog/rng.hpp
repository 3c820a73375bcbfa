// Copyright 2026 The samalog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based random streams. Every (seed, stream id) pair names an
// independent sequence, so trial i of a simulation draws the same numbers no
// matter which thread runs it.

#include <array>
#include <cmath>
#include <cstdint>

namespace samalog {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3", SC'11).
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
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Sequential view of one Philox substream. The key is the seed; the counter
/// is (block index, stream id).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_id_(stream_id) {}

  std::uint64_t next_u64() noexcept {
    if (used_ == 2) refill();
    return block_[used_++];
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool has_spare_normal() const noexcept { return has_spare_; }

 private:
  friend double sample_normal(CounterStream&, double, double) noexcept;

  void refill() noexcept {
    const auto out = Philox4x32::generate(
        {static_cast<std::uint32_t>(block_index_), static_cast<std::uint32_t>(block_index_ >> 32),
         static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
        key_);
    ++block_index_;
    block_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    block_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    used_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int used_ = 2;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Normal deviate by the Marsaglia polar method; the second deviate of each
/// accepted pair is cached on the stream.
inline double sample_normal(CounterStream& stream, double mu, double sigma) noexcept {
  if (stream.has_spare_) {
    stream.has_spare_ = false;
    return mu + sigma * stream.spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * stream.next_uniform() - 1.0;
    v = 2.0 * stream.next_uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  stream.spare_ = v * scale;
  stream.has_spare_ = true;
  return mu + sigma * u * scale;
}

}  // namespace samalog
