// Copyright 2026, The ldpgnn Authors.
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

#ifndef LDPGNN_RNG_HPP_
#define LDPGNN_RNG_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace ldpgnn {

// SplitMix64 finalizer, used to mix seeds and derive stream ids.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_u64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

// FNV-1a over the tag bytes.
inline std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic RNG with explicit draw helpers.  std::mt19937_64 has a
// standard-specified output sequence; the bounded/unit draws below avoid the
// implementation-defined std::*_distribution classes, so streams reproduce
// bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, bound) by rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    std::uint64_t r;
    do {
      r = engine_();
    } while (r < threshold);
    return r % bound;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stream derivation: every consumer of randomness owns a stream keyed by
// (master seed, stream id, purpose tag), so adding or reordering consumers
// never shifts another consumer's draws.
inline Rng derive_rng(std::uint64_t master_seed, std::uint64_t stream_id,
                      std::string_view tag) {
  return Rng(hash_u64(hash_u64(master_seed, stream_id), hash_tag(tag)));
}

}  // namespace ldpgnn

#endif  // LDPGNN_RNG_HPP_
