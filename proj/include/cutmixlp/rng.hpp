// Copyright 2026 The cutmix-lp Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Counter-based random streams.
//
// Every random decision in the library is drawn from an RngStream keyed by the
// user seed plus a tuple describing *what* is being decided (epoch, batch,
// position, purpose). Two streams with different keys never share state, so
// work can be split across threads in any order without changing results.
// Integer and real draws are implemented here rather than through <random>
// distributions, whose output differs between standard libraries.

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace cutmixlp {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Role of a stream; part of the stream key.
enum class Purpose : std::uint64_t {
  kReplaceCoin = 1,
  kPartner = 2,
  kBoxes = 3,
  kNoiseSelect = 4,
  kNoiseMap = 5,
  kAudit = 6,
  kClassSwap = 7,
  kFixture = 8,
  kGenBoxes = 9,
};

/// Mixes an arbitrary tuple of words into a 64-bit stream id.
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> parts);

/// FNV-1a, used to key per-sample streams by sample id.
std::uint64_t fnv1a64(std::string_view text);

class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);
  RngStream(std::uint64_t seed, Purpose purpose, std::initializer_list<std::uint64_t> key = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u32(); }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform on the inclusive integer interval [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// True with probability p.
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace cutmixlp
