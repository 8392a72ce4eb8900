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
 * The diagonal-pair hardness laboratory. The pair H_i = eps_i * Z_{1:k'}
 * (Z on the first k' qubits) sits at nonlocal distance exactly eps_i from the
 * k-local family, for every norm in pauli.hpp, whenever k < k'. Because the
 * pair is diagonal, the phase-minimized spectral distance between their time
 * evolutions has the closed form
 *
 *   2 min(|sin((eps2-eps1) t / 2)|, |cos((eps2-eps1) t / 2)|)  <=  (eps2-eps1) t,
 *
 * which brackets the diamond distance and hence caps how fast any tester can
 * tell the two apart. The experiments here measure realized tester cost
 * against that cap; they exhibit consistency with the impossibility
 * statement, they cannot prove it.
 */

#pragma once

#include "loctest/ae.hpp"
#include "loctest/linalg.hpp"
#include "loctest/trotter.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace loctest {

struct ZChainPair {
  int n = 0;
  int k_prime = 0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  HamiltonianSpec h1;  // eps1 * Z_{1:k'}
  HamiltonianSpec h2;  // eps2 * Z_{1:k'}
};

inline PauliString z_chain(int n, int k_prime) {
  if (k_prime < 1 || k_prime > n) throw std::invalid_argument("need 1 <= k' <= n");
  return PauliString(n, 0, (1ULL << k_prime) - 1);
}

inline HamiltonianSpec z_chain_hamiltonian(int n, int k_prime, double eps) {
  std::vector<std::pair<PauliString, double>> terms;
  if (eps != 0.0) terms.emplace_back(z_chain(n, k_prime), eps);
  return HamiltonianSpec::validate(n, terms);  // eps = 0 is the zero Hamiltonian
}

inline ZChainPair make_zchain_pair(int n, int k_prime, double eps1, double eps2) {
  if (!(0.0 <= eps1 && eps1 <= eps2 && eps2 <= 1.0))
    throw std::invalid_argument("need 0 <= eps1 <= eps2 <= 1");
  return {n, k_prime, eps1, eps2, z_chain_hamiltonian(n, k_prime, eps1),
          z_chain_hamiltonian(n, k_prime, eps2)};
}

/// Closed form of the phase-minimized spectral distance between the diagonal
/// pair's time evolutions.
inline double diagonal_pair_distance(double eps1, double eps2, double t) {
  if (!(0.0 <= eps1 && eps1 <= eps2) || t < 0.0)
    throw std::invalid_argument("need 0 <= eps1 <= eps2 and t >= 0");
  const double half = 0.5 * (eps2 - eps1) * t;
  return 2.0 * std::min(std::abs(std::sin(half)), std::abs(std::cos(half)));
}

struct Lemma6Row {
  double t = 0.0;
  double generic = 0.0;      // min_phase_spectral_distance of the evolved pair
  double closed_form = 0.0;  // diagonal_pair_distance
  double linear_bound = 0.0; // (eps2 - eps1) t
  double diamond_hi = 0.0;
  bool agree = false;        // |generic - closed_form| <= 1e-9
  bool below_linear = false; // closed_form <= linear_bound
  bool diamond_ok = false;   // diamond_hi <= 2 (eps2 - eps1) t
};

struct Lemma6Report {
  ZChainPair pair;
  std::vector<Lemma6Row> rows;
  bool all_pass = true;
};

/// Cross-checks the generic phase-minimized distance against the closed form
/// and the linear evolution-time cap on a time grid.
inline Lemma6Report verify_lemma6(const ZChainPair& pair, const std::vector<double>& t_grid) {
  Lemma6Report rep;
  rep.pair = pair;
  for (double t : t_grid) {
    Lemma6Row row;
    row.t = t;
    row.closed_form = diagonal_pair_distance(pair.eps1, pair.eps2, t);
    if (t == 0.0) {
      row.generic = 0.0;
      row.diamond_hi = 0.0;
    } else {
      const Matrix u1 = evolve(pair.h1, t);
      const Matrix u2 = evolve(pair.h2, t);
      row.generic = min_phase_spectral_distance(u1, u2);
      row.diamond_hi = diamond_interval(u1, u2).hi;
    }
    row.linear_bound = (pair.eps2 - pair.eps1) * t;
    row.agree = std::abs(row.generic - row.closed_form) <= 1e-9;
    row.below_linear = row.closed_form <= row.linear_bound + 1e-12;
    row.diamond_ok = row.diamond_hi <= 2.0 * row.linear_bound + 1e-12;
    rep.all_pass = rep.all_pass && row.agree && row.below_linear && row.diamond_ok;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Distinguishability experiments

enum class TesterId { trotter, ae, baseline };

inline std::string tester_name(TesterId id) {
  switch (id) {
    case TesterId::trotter: return "trotter";
    case TesterId::ae: return "ae";
    default: return "baseline";
  }
}

struct SweepPoint {
  double gap = 0.0;  // eps2 - eps1
  double eps2 = 0.0;
  double mean_time = 0.0;
  double mean_queries = 0.0;
  double success_rate = 0.0;
};

struct SweepCurve {
  TesterId tester = TesterId::trotter;
  std::vector<SweepPoint> points;
  double fitted_exponent = 0.0;  // OLS slope of log mean_time vs log gap
};

/// Ordinary least squares slope of log(y) against log(x).
inline double fit_log_log_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("exponent fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

/// Runs one tester `reps` times on each side of the hidden pair and reports
/// the realized cost and correct-verdict rate for one gap value. Repetition
/// seeds derive from (master, point index, rep index), so sweeps are
/// reproducible for any worker count.
inline SweepPoint distinguishability_point(TesterId tester, const TestSpec& spec, int n,
                                           int k_prime, int reps, double c,
                                           std::uint64_t master_seed, std::uint64_t point_index,
                                           int workers) {
  const ZChainPair pair = make_zchain_pair(n, k_prime, spec.eps1, spec.eps2);
  const AccessFlags flags =
      (tester == TesterId::ae) ? AccessFlags::full() : AccessFlags::forward_only();
  const EvolutionOracle proto_local(pair.h1, flags);
  const EvolutionOracle proto_far(pair.h2, flags);

  struct RunResult {
    bool correct = false;
    double time = 0.0;
    double queries = 0.0;
  };
  // Jobs 0..reps-1 run the far instance, reps..2*reps-1 the local one.
  auto job = [&](std::size_t index) {
    const bool far_side = index < static_cast<std::size_t>(reps);
    const EvolutionOracle& proto = far_side ? proto_far : proto_local;
    const std::uint64_t run_seed =
        Rng::derive_seed(master_seed, RngStream::sweep_points, (point_index << 32) ^ index);
    RunResult rr;
    switch (tester) {
      case TesterId::trotter: {
        const TrotterVerdict v = run_tester(proto, spec, run_seed, 1);
        rr.correct = far_side ? v.decision == TrotterVerdict::Decision::far
                              : v.decision == TrotterVerdict::Decision::local;
        rr.time = v.transcript.total_evolution_time();
        rr.queries = static_cast<double>(v.transcript.query_count());
        break;
      }
      case TesterId::ae: {
        const AeVerdict v = run_ae_tester(proto, spec, AEConfig{c}, run_seed, 1);
        rr.correct = far_side == v.far;
        rr.time = v.transcript.total_evolution_time();
        rr.queries = static_cast<double>(v.transcript.query_count());
        break;
      }
      case TesterId::baseline: {
        const BaselineVerdict v = run_baseline_tester(proto, spec, AEConfig{c}, run_seed, 1);
        rr.correct = far_side == v.far;
        rr.time = v.transcript.total_evolution_time();
        rr.queries = static_cast<double>(v.transcript.query_count());
        break;
      }
    }
    return rr;
  };
  const std::vector<RunResult> results =
      run_indexed<RunResult>(static_cast<std::size_t>(2 * reps), workers, job);

  SweepPoint pt;
  pt.gap = spec.gap();
  pt.eps2 = spec.eps2;
  for (const auto& rr : results) {
    pt.mean_time += rr.time;
    pt.mean_queries += rr.queries;
    pt.success_rate += rr.correct ? 1.0 : 0.0;
  }
  const double total = static_cast<double>(results.size());
  pt.mean_time /= total;
  pt.mean_queries /= total;
  pt.success_rate /= total;
  return pt;
}

inline SweepCurve distinguishability_experiment(TesterId tester, double eps1,
                                                const std::vector<double>& eps2_values,
                                                double delta, int k, int n, int k_prime,
                                                int reps, double c, std::uint64_t master_seed,
                                                int workers = 1) {
  if (eps2_values.size() < 2)
    throw std::invalid_argument("sweep needs at least two gap points");
  SweepCurve curve;
  curve.tester = tester;
  std::vector<double> gaps, times;
  for (std::size_t i = 0; i < eps2_values.size(); ++i) {
    const TestSpec spec{eps1, eps2_values[i], delta, k};
    const SweepPoint pt = distinguishability_point(tester, spec, n, k_prime, reps, c,
                                                   master_seed, i, workers);
    gaps.push_back(pt.gap);
    times.push_back(pt.mean_time);
    curve.points.push_back(pt);
  }
  curve.fitted_exponent = fit_log_log_exponent(gaps, times);
  return curve;
}

}  // namespace loctest
