// Copyright 2026 The loctest Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace loctest {

/// splitmix64 step; the workhorse for deriving seeds from (master, stream, index).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream tags keep independent RNG consumers on disjoint seed sequences.
enum class RngStream : std::uint64_t {
  trotter_trials = 1,
  baseline_shots = 2,
  ae_rounds = 3,
  hamiltonian_gen = 4,
  sweep_points = 5,
  tests = 6,
};

/// Seeded random stream. Each indexed unit of work (trial, shot, round) draws
/// from its own stream derived purely from (master seed, stream tag, index),
/// so results never depend on worker count or scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static std::uint64_t derive_seed(std::uint64_t master, RngStream stream,
                                   std::uint64_t index) {
    std::uint64_t s = master;
    splitmix64(s);
    s ^= 0x6A09E667F3BCC909ULL * (static_cast<std::uint64_t>(stream) + 1);
    splitmix64(s);
    s ^= 0xBB67AE8584CAA73BULL * (index + 1);
    return splitmix64(s);
  }

  static Rng derive(std::uint64_t master, RngStream stream, std::uint64_t index) {
    return Rng(derive_seed(master, stream, index));
  }

  std::uint64_t integer() { return gen_(); }

  /// Uniform double in [0, 1) built from 53 bits; avoids the
  /// implementation-defined std:: distributions so sequences are portable.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  /// Uniform integer in [0, n) by rejection; exact, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 gen_;
};

/// Inverse-CDF draw over an explicit probability vector (need not be
/// normalized to better than fp error; the tail index absorbs the slack).
inline std::size_t sample_discrete(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.empty() ? 0 : probs.size() - 1;
}

}  // namespace loctest
