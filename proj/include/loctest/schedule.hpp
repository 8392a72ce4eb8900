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
 * The tolerant-test instance (eps1, eps2, delta, k) and the full constant
 * schedule of the Trotterized-postselection tester: step size, total
 * evolution time, iteration and repetition counts, and the acceptance
 * thresholds upsilon/lambda/tau/xi.
 */

#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loctest {

struct TestSpec {
  double eps1 = 0.0;
  double eps2 = 1.0;
  double delta = 1.0 / 3.0;
  int k = 1;

  void check() const {
    if (!(eps1 >= 0.0 && eps1 < 1.0)) throw std::invalid_argument("require 0 <= eps1 < 1");
    if (!(eps2 > eps1 && eps2 <= 1.0)) throw std::invalid_argument("require eps1 < eps2 <= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("require 0 < delta < 1");
    if (k < 0) throw std::invalid_argument("require k >= 0");
  }

  double gap() const { return eps2 - eps1; }

  nlohmann::json to_json() const {
    return {{"eps1", eps1}, {"eps2", eps2}, {"delta", delta}, {"k", k}};
  }
};

/// All derived constants for one test instance. alpha is the nominal step
/// size; the iteration count is rounded up, so the realized step alpha_eff =
/// t/m is slightly smaller, which only tightens every bound that alpha enters
/// (t is preserved exactly). upsilon/lambda/tau/xi are evaluated at alpha_eff
/// because they must describe the algorithm actually run.
struct Schedule {
  TestSpec spec;
  double alpha = 0.0;      // (eps2^2 - eps1^2) / (100 eps2)
  double t = 0.0;          // sqrt(eps2^2 - eps1^2) / (2 eps2), the per-trial evolution time
  long m = 0;              // ceil(50 / sqrt(eps2^2 - eps1^2)) postselection steps
  double alpha_eff = 0.0;  // t / m
  long s = 0;              // successful trials needed
  long s_prime = 0;        // trial budget
  double upsilon = 0.0;    // far-side lower bound on E[X_i | success]
  double lambda = 0.0;     // close-side upper bound
  double tau = 0.0;        // decision threshold (upsilon + lambda)/2
  double xi = 0.0;         // half-gap (upsilon - lambda)/2

  nlohmann::json to_json() const {
    return {{"alpha", alpha},   {"t", t},        {"m", m},
            {"alpha_eff", alpha_eff}, {"s", s},  {"s_prime", s_prime},
            {"upsilon", upsilon}, {"lambda", lambda}, {"tau", tau}, {"xi", xi}};
  }
};

struct AcceptanceBounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bounds on Pr[trial outputs 1 | no abort] for a Hamiltonian at nonlocal
/// distance eps, evaluated with the schedule's realized step size. The eps2
/// term in the upper bound is part of the bound, not a typo: the close-side
/// error floor is set by the tested instance's eps2.
inline AcceptanceBounds conditional_acceptance_bounds(double eps, const Schedule& sched) {
  const double t = sched.t, t2 = t * t, a = sched.alpha_eff, e2 = sched.spec.eps2;
  const double lo =
      eps * eps * t2 * (1.0 - t2 / 10.0 - (13.0 / 50.0) * eps * eps * t2) -
      (7.0 / 2.0) * eps * a * t2;
  const double hi = eps * eps * t2 * (1.0 + t2 / 10.0) +
                    (287.0 / 80.0) * eps * a * t2 + (49.0 / 1600.0) * e2 * a * t2;
  return {std::max(0.0, lo), hi};
}

inline Schedule plan_schedule(const TestSpec& spec) {
  spec.check();
  Schedule sc;
  sc.spec = spec;
  const double gap2 = spec.eps2 * spec.eps2 - spec.eps1 * spec.eps1;
  sc.alpha = gap2 / (100.0 * spec.eps2);
  sc.t = std::sqrt(gap2) / (2.0 * spec.eps2);
  sc.m = static_cast<long>(std::ceil(50.0 / std::sqrt(gap2)));
  sc.alpha_eff = sc.t / static_cast<double>(sc.m);
  const double log_term = std::log(2.0 / spec.delta);
  const double rate = spec.eps2 * spec.eps2 * spec.eps2 * spec.eps2 / (gap2 * gap2 * gap2);
  sc.s = static_cast<long>(std::ceil(78.0 * rate * log_term));
  sc.s_prime = static_cast<long>(std::ceil(157.0 * rate * log_term));
  sc.upsilon = conditional_acceptance_bounds(spec.eps2, sc).lo;
  sc.lambda = conditional_acceptance_bounds(spec.eps1, sc).hi;
  sc.tau = 0.5 * (sc.upsilon + sc.lambda);
  sc.xi = 0.5 * (sc.upsilon - sc.lambda);
  return sc;
}

/// Total-evolution-time budget of the full tester: 79 sqrt(eps2/(eps2-eps1)^5) log(2/delta).
inline double trotter_time_budget(const TestSpec& spec) {
  const double gap = spec.gap();
  return 79.0 * std::sqrt(spec.eps2 / (gap * gap * gap * gap * gap)) *
         std::log(2.0 / spec.delta);
}

/// Query budget: 7850 sqrt(eps2/(eps2-eps1)^7) log(2/delta).
inline double trotter_query_budget(const TestSpec& spec) {
  const double gap = spec.gap();
  return 7850.0 * std::sqrt(spec.eps2 / std::pow(gap, 7)) * std::log(2.0 / spec.delta);
}

}  // namespace loctest
