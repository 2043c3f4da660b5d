// Copyright 2026 The wcprsp Authors
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

#include <array>
#include <cstdint>
#include <limits>

namespace wcprsp {

// Philox4x32-10 block function (Salmon et al., SC'11). Exposed for the
// known-answer test.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Counter-based random stream. The 64-bit seed is the Philox key; the 128-bit
// counter is (position, stream_id), so every (seed, stream_id) pair names an
// independent sequence and no state is shared between streams.
//
// Satisfies UniformRandomBitGenerator, but the library never feeds it to
// <random> distributions: their output is implementation-defined, and all
// draws must be reproducible across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t position() const { return position_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Uniform on (0, 1); never returns 0, safe for log().
  double uniform_open01();

  // Uniform integer in [0, bound). bound must be > 0. Lemire's method.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Derived stream with a different stream_id, used to give each party or
  // sub-task its own sequence.
  RngStream split(std::uint64_t tag) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;  // index of the next 128-bit block
  std::array<std::uint32_t, 4> block_{};
  int block_used_ = 4;  // 32-bit words consumed from block_
};

// SplitMix64 finalizer; used for stream derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace wcprsp
