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
 * The Trotterized-postselection locality tester.
 *
 * One trial starts at sigma_I and alternates m short forward evolutions with
 * two-outcome measurements {Pi_D, 1 - Pi_D}, aborting on the complement
 * outcome; the surviving state is Bell-measured and scores 1 unless the
 * result is the identity word. The full tester repeats trials until s
 * non-abort outcomes are collected (budget s'), and decides Far when the
 * score tally reaches s*tau. Ties at exactly s*tau decide Far.
 *
 * Monte-Carlo trials sample the two-outcome measurement; the exact mode
 * propagates the unnormalized projected state through all m steps and reports
 * the full branching distribution in closed form.
 */

#pragma once

#include "loctest/bell.hpp"
#include "loctest/oracle.hpp"
#include "loctest/parallel.hpp"
#include "loctest/rng.hpp"
#include "loctest/schedule.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace loctest {

enum class TrialOutcome { aborted, zero, one };

struct TrotterVerdict {
  enum class Decision { local, far, inconclusive };
  Decision decision = Decision::inconclusive;
  long ones = 0;        // score tally X over the first s successes
  long successes = 0;   // non-abort trials consumed (== s unless inconclusive)
  long trials_run = 0;  // trials charged, including aborted ones
  double threshold = 0.0;  // s * tau
  Schedule schedule;
  Transcript transcript;

  static std::string name(Decision d) {
    switch (d) {
      case Decision::local: return "local";
      case Decision::far: return "far";
      default: return "inconclusive";
    }
  }
};

/// One trial of the postselection primitive against a black-box oracle.
/// Aborted trials are charged only for the queries issued before the abort.
inline TrialOutcome run_primitive(EvolutionOracle& oracle, const ProjectorD& proj,
                                  const Schedule& sched, Rng& rng) {
  const int n = oracle.n();
  BellScratch ws(n);
  Vector bell;
  DoubledState state = sigma_identity(n);
  for (long step = 0; step < sched.m; ++step) {
    oracle.query(state, sched.alpha_eff, Direction::forward, /*controlled=*/false, ws);
    const double p_in = project_into(state, proj, bell, ws);
    if (!rng.bernoulli(p_in)) return TrialOutcome::aborted;
    state.v /= std::sqrt(p_in);
    state.unnormalized = false;
  }
  // Bell measurement collapsed to "identity or not".
  const Complex id_amp = sigma_identity(n).v.dot(state.v);
  return rng.bernoulli(std::norm(id_amp)) ? TrialOutcome::zero : TrialOutcome::one;
}

struct PrimitiveExact {
  double p_abort = 0.0;
  double p_zero = 0.0;
  double p_one = 0.0;
  DoubledState final_conditional;  // state just before the Bell measurement

  double p_one_conditional() const { return p_one / (1.0 - p_abort); }
};

/// White-box closed form of the primitive's branching process: propagates the
/// unnormalized projected state, whose squared norm telescopes into the
/// survival probability.
inline PrimitiveExact primitive_probabilities(const HamiltonianSpec& h, const ProjectorD& proj,
                                              const Schedule& sched) {
  const int n = h.n();
  BellScratch ws(n);
  Vector bell;
  const Matrix u = evolve(h, sched.alpha_eff);
  DoubledState state = sigma_identity(n);
  for (long step = 0; step < sched.m; ++step) {
    apply_right_unitary_into(state, u, ws);
    project_into(state, proj, bell, ws);
  }
  PrimitiveExact out;
  const double p_surv = state.norm_sq();
  const Complex id_amp = sigma_identity(n).v.dot(state.v);
  out.p_abort = 1.0 - p_surv;
  out.p_zero = std::norm(id_amp);
  out.p_one = p_surv - out.p_zero;
  out.final_conditional = std::move(state);
  if (p_surv > 0.0) {
    out.final_conditional.v /= std::sqrt(p_surv);
    out.final_conditional.unnormalized = false;
  }
  return out;
}

/// Full Theorem-style decision procedure. Trials are independent with
/// per-index RNG streams; results and transcripts are merged in trial-index
/// order, so the verdict is identical for every worker count.
inline TrotterVerdict run_tester(const EvolutionOracle& prototype, const TestSpec& spec,
                                 std::uint64_t master_seed, int workers = 1) {
  const Schedule sched = plan_schedule(spec);
  if (spec.k >= prototype.n())
    throw std::invalid_argument("locality parameter k must be below the qubit count");
  const ProjectorD proj = make_projector_D(prototype.n(), spec.k);

  EvolutionOracle warm_proto = prototype.fresh_clone();
  warm_proto.warm(sched.alpha_eff);

  struct Trial {
    TrialOutcome outcome = TrialOutcome::aborted;
    Transcript transcript;
  };
  auto job = [&](std::size_t index) {
    EvolutionOracle oracle = warm_proto.fresh_clone();
    Rng rng = Rng::derive(master_seed, RngStream::trotter_trials, index);
    Trial tr;
    tr.outcome = run_primitive(oracle, proj, sched, rng);
    tr.transcript = oracle.take_transcript();
    return tr;
  };

  long successes = 0;
  auto scan = [&](const Trial& tr) {
    if (tr.outcome != TrialOutcome::aborted) ++successes;
    return successes >= sched.s;
  };
  std::vector<Trial> trials =
      run_until<Trial>(static_cast<std::size_t>(sched.s_prime), workers, job, scan);

  TrotterVerdict v;
  v.schedule = sched;
  v.trials_run = static_cast<long>(trials.size());
  v.threshold = static_cast<double>(sched.s) * sched.tau;
  for (const auto& tr : trials) {
    v.transcript.append(tr.transcript);
    if (tr.outcome == TrialOutcome::aborted) continue;
    ++v.successes;
    if (tr.outcome == TrialOutcome::one) ++v.ones;
  }
  if (v.successes < sched.s) {
    v.decision = TrotterVerdict::Decision::inconclusive;
  } else {
    v.decision = (static_cast<double>(v.ones) >= v.threshold)
                     ? TrotterVerdict::Decision::far
                     : TrotterVerdict::Decision::local;
  }
  return v;
}

}  // namespace loctest
