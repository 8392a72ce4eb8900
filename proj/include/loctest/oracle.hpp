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

/**
 * @file
 * Black-box access to exp(-iHt) with capability flags and bit-exact cost
 * accounting. Testers are charged per realized application; aborted runs pay
 * only for the queries actually issued. A controlled application charges its
 * duration once, the same as an uncontrolled one.
 */

#pragma once

#include "loctest/bell.hpp"
#include "loctest/linalg.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace loctest {

struct AccessFlags {
  bool forward = true;
  bool inverse = false;
  bool controlled = false;

  static AccessFlags forward_only() { return {true, false, false}; }
  static AccessFlags full() { return {true, true, true}; }
};

enum class Direction { forward, inverse };

struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TranscriptEntry {
  double duration = 0.0;
  Direction direction = Direction::forward;
  bool controlled = false;
};

/// Per-query cost log. total_evolution_time is the left fold over entries in
/// the order they were issued (trials are merged in trial-index order, so the
/// fold — and therefore the serialized report — is reproducible).
struct Transcript {
  std::vector<TranscriptEntry> entries;

  std::size_t query_count() const { return entries.size(); }

  double total_evolution_time() const {
    double acc = 0.0;
    for (const auto& e : entries) acc += e.duration;
    return acc;
  }

  void append(const Transcript& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  }

  nlohmann::json to_json(bool with_entries = true) const {
    nlohmann::json j;
    j["query_count"] = query_count();
    j["total_evolution_time"] = total_evolution_time();
    if (with_entries) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& e : entries)
        arr.push_back({{"duration", e.duration},
                       {"direction", e.direction == Direction::forward ? "fwd" : "inv"},
                       {"controlled", e.controlled}});
      j["entries"] = std::move(arr);
    }
    return j;
  }
};

/// Hides a HamiltonianSpec behind timed applications of (I tensor e^{-iHt}).
/// Decision logic must reach the Hamiltonian only through query()/charge();
/// white_box() exists for the distribution-exact simulators (the QAE outcome
/// law needs the true overlap) and for explicitly labeled exact modes.
class EvolutionOracle {
 public:
  EvolutionOracle(HamiltonianSpec h, AccessFlags flags)
      : h_(std::make_shared<const HamiltonianSpec>(std::move(h))),
        flags_(flags),
        warm_(std::make_shared<const std::map<double, Matrix>>()) {}

  const AccessFlags& flags() const { return flags_; }
  int n() const { return h_->n(); }
  const Transcript& transcript() const { return transcript_; }
  Transcript take_transcript() { return std::exchange(transcript_, Transcript{}); }

  /// Precomputes the unitary for a duration; call before cloning for workers
  /// so the shared cache is read-only while trials run. Copy-on-write, so
  /// warming never mutates a map other oracles may be reading.
  void warm(double duration) {
    auto next = std::make_shared<std::map<double, Matrix>>(*warm_);
    (*next)[duration] = evolve(*h_, duration);
    warm_ = std::move(next);
  }

  /// A copy with an empty transcript that shares the hidden Hamiltonian and
  /// the warmed unitary cache. One clone per trial worker.
  EvolutionOracle fresh_clone() const {
    EvolutionOracle o(*this);
    o.transcript_ = Transcript{};
    o.local_cache_.clear();
    return o;
  }

  /// Applies (I tensor e^{-/+ i H duration}) — or, with controlled=true, its
  /// controlled version, where the state carries one extra control qubit as
  /// its top bit — and appends one transcript entry.
  void query(DoubledState& s, double duration, Direction dir, bool controlled = false) {
    require(dir, controlled);
    if (!(duration > 0.0)) throw std::invalid_argument("query duration must be positive");
    const Matrix& u = unitary(duration);
    BellScratch ws(h_->n());
    apply(s, u, dir, controlled, ws);
    transcript_.entries.push_back({duration, dir, controlled});
  }

  /// As query(), with caller-provided scratch for hot loops.
  void query(DoubledState& s, double duration, Direction dir, bool controlled,
             BellScratch& ws) {
    require(dir, controlled);
    if (!(duration > 0.0)) throw std::invalid_argument("query duration must be positive");
    apply(s, unitary(duration), dir, controlled, ws);
    transcript_.entries.push_back({duration, dir, controlled});
  }

  /// Cost-only accounting for simulated circuits whose outcome distribution
  /// is computed in closed form (the QAE modes). Capability-checked exactly
  /// like query().
  void charge(double duration, Direction dir, bool controlled) {
    require(dir, controlled);
    if (!(duration > 0.0)) throw std::invalid_argument("charge duration must be positive");
    transcript_.entries.push_back({duration, dir, controlled});
  }

  /// Simulator access to the hidden Hamiltonian. Exact-probability modes and
  /// outcome-law builders use this; it is a white-box path and reports built
  /// on it are labeled accordingly.
  const HamiltonianSpec& white_box() const { return *h_; }

 private:
  void require(Direction dir, bool controlled) const {
    if (dir == Direction::forward && !flags_.forward)
      throw CapabilityError("oracle access violation: forward evolution not enabled");
    if (dir == Direction::inverse && !flags_.inverse)
      throw CapabilityError("oracle access violation: inverse evolution not enabled");
    if (controlled && !flags_.controlled)
      throw CapabilityError("oracle access violation: controlled application not enabled");
  }

  const Matrix& unitary(double duration) {
    if (auto it = warm_->find(duration); it != warm_->end()) return it->second;
    auto [it, inserted] = local_cache_.try_emplace(duration);
    if (inserted) it->second = evolve(*h_, duration);
    return it->second;
  }

  void apply(DoubledState& s, const Matrix& u_fwd, Direction dir, bool controlled,
             BellScratch& ws) const {
    const std::int64_t dim2 = 1LL << (2 * h_->n());
    if (!controlled) {
      if (s.v.size() != dim2)
        throw std::invalid_argument("state dimension does not match the oracle");
      if (dir == Direction::forward) {
        apply_right_unitary_into(s, u_fwd, ws);
      } else {
        apply_right_unitary_into(s, u_fwd.adjoint(), ws);
      }
      return;
    }
    // Control qubit is the top bit: the |1> block is the upper half.
    if (s.v.size() != 2 * dim2)
      throw std::invalid_argument("controlled query needs a control qubit above the doubled register");
    DoubledState block{h_->n(), s.v.segment(dim2, dim2), false};
    if (dir == Direction::forward) {
      apply_right_unitary_into(block, u_fwd, ws);
    } else {
      apply_right_unitary_into(block, u_fwd.adjoint(), ws);
    }
    s.v.segment(dim2, dim2) = block.v;
  }

  std::shared_ptr<const HamiltonianSpec> h_;
  AccessFlags flags_;
  Transcript transcript_;
  std::shared_ptr<const std::map<double, Matrix>> warm_;  // read-only after cloning
  std::map<double, Matrix> local_cache_;
};

}  // namespace loctest
