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
 * The doubled 2n-qubit Bell-basis machinery.
 *
 * Basis state sigma_P := (I tensor P) sigma_I, with sigma_I the maximally
 * entangled state 2^{-n/2} sum_x |x>|x>. The phase convention is exactly that
 * product — including Y's imaginary entries — so the Bell transform of
 * (I tensor U) sigma_I reads off U's Pauli coefficients verbatim.
 *
 * Register layout: amplitude index a*2^n + b, with a the left (reference)
 * register and b the right (evolved) register. Writing P = i^{#Y} X^x Z^z,
 * sigma_P has amplitude 2^{-n/2} * i^{#Y} * (-1)^{a.z} at |a>|a xor x>, and
 * the Bell coefficient of a state s at pauli index (x<<n)|z is
 *
 *   <sigma_P|s> = 2^{-n/2} (-i)^{#Y} sum_a (-1)^{a.z} s[a*2^n + (a xor x)],
 *
 * a per-x Walsh-Hadamard transform. Projectors act as index masks here; the
 * dense forms live in bell_dense.hpp and are used only by tests and the
 * verification battery.
 */

#pragma once

#include "loctest/pauli.hpp"
#include "loctest/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace loctest {

/// Amplitudes over the doubled space, dim 4^n. Intermediates produced by
/// projections are unnormalized and flagged as such.
struct DoubledState {
  int n = 0;
  Vector v;
  bool unnormalized = false;

  double norm_sq() const { return v.squaredNorm(); }
};

/// sigma_I: amplitude 2^{-n/2} on every |x>|x>.
inline DoubledState sigma_identity(int n) {
  const std::int64_t dim = 1LL << n;
  DoubledState s{n, Vector::Zero(dim * dim), false};
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::int64_t x = 0; x < dim; ++x) s.v[(x << n) | x] = amp;
  return s;
}

/// sigma_P = (I tensor P) sigma_I as an explicit vector.
inline DoubledState sigma_state(const PauliString& p) {
  const std::int64_t dim = 1LL << p.n;
  DoubledState s{p.n, Vector::Zero(dim * dim), false};
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::int64_t a = 0; a < dim; ++a)
    s.v[(a << p.n) | (a ^ static_cast<std::int64_t>(p.x))] =
        amp * pauli_phase(p, static_cast<std::uint64_t>(a));
  return s;
}

/// In-place unnormalized Walsh-Hadamard transform.
inline void fwht(Complex* a, std::size_t size) {
  for (std::size_t len = 1; len < size; len <<= 1)
    for (std::size_t i = 0; i < size; i += len << 1)
      for (std::size_t j = i; j < i + len; ++j) {
        const Complex u = a[j], w = a[j + len];
        a[j] = u + w;
        a[j + len] = u - w;
      }
}

/// Reusable scratch for the Bell transforms and the evolved-register matmul;
/// one per trial worker.
struct BellScratch {
  std::vector<Complex> g;  // 2^n gather buffer
  Matrix tmp;              // 2^n x 2^n matmul buffer

  explicit BellScratch(int n)
      : g(static_cast<std::size_t>(1) << n),
        tmp(1LL << n, 1LL << n) {}
};

/// Bell coefficients <sigma_P|s> for all 4^n words, indexed by pauli index.
inline void bell_transform_into(const DoubledState& s, Vector& bell, BellScratch& ws) {
  const int n = s.n;
  const std::uint64_t dim = 1ULL << n;
  bell.resize(static_cast<std::int64_t>(dim * dim));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::uint64_t u = 0; u < dim; ++u) {
    for (std::uint64_t a = 0; a < dim; ++a)
      ws.g[a] = s.v[static_cast<std::int64_t>((a << n) | (a ^ u))];
    fwht(ws.g.data(), dim);
    for (std::uint64_t z = 0; z < dim; ++z) {
      const Complex phase = imag_unit_pow(-std::popcount(u & z));  // (-i)^{#Y}
      bell[static_cast<std::int64_t>((u << n) | z)] = scale * phase * ws.g[z];
    }
  }
}

inline Vector bell_transform(const DoubledState& s) {
  BellScratch ws(s.n);
  Vector bell;
  bell_transform_into(s, bell, ws);
  return bell;
}

/// Inverse of bell_transform: reassembles the doubled state from Bell
/// coefficients.
inline void bell_inverse_into(int n, const Vector& bell, DoubledState& s, BellScratch& ws) {
  const std::uint64_t dim = 1ULL << n;
  s.n = n;
  s.v.resize(static_cast<std::int64_t>(dim * dim));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::uint64_t u = 0; u < dim; ++u) {
    for (std::uint64_t z = 0; z < dim; ++z)
      ws.g[z] = imag_unit_pow(std::popcount(u & z)) *
                bell[static_cast<std::int64_t>((u << n) | z)];
    fwht(ws.g.data(), dim);
    for (std::uint64_t a = 0; a < dim; ++a)
      s.v[static_cast<std::int64_t>((a << n) | (a ^ u))] = scale * ws.g[a];
  }
}

inline DoubledState bell_inverse(int n, const Vector& bell) {
  BellScratch ws(n);
  DoubledState s;
  bell_inverse_into(n, bell, s, ws);
  return s;
}

/// Applies (I tensor U) to the doubled state: one 2^n x 2^n matmul on the
/// evolved register.
inline void apply_right_unitary_into(DoubledState& s, const Matrix& u, BellScratch& ws) {
  const std::int64_t dim = 1LL << s.n;
  Eigen::Map<Matrix> m(s.v.data(), dim, dim);  // column a holds the |a> block
  ws.tmp.noalias() = u * m;
  m = ws.tmp;
}

inline DoubledState apply_right_unitary(const DoubledState& s, const Matrix& u) {
  DoubledState out = s;
  BellScratch ws(s.n);
  apply_right_unitary_into(out, u, ws);
  return out;
}

/// Exact Bell-measurement distribution |<sigma_P|s>|^2 indexed by pauli index.
inline std::vector<double> bell_distribution(const DoubledState& s) {
  const Vector bell = bell_transform(s);
  std::vector<double> probs(static_cast<std::size_t>(bell.size()));
  for (std::int64_t i = 0; i < bell.size(); ++i)
    probs[static_cast<std::size_t>(i)] = std::norm(bell[i]);
  return probs;
}

/// One Bell-basis measurement. The state must be normalized to 1e-6.
inline PauliString sample_bell(const DoubledState& s, Rng& rng) {
  const std::vector<double> probs = bell_distribution(s);
  double total = 0.0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-6)
    throw std::invalid_argument("sample_bell: state norm deviates from 1 by more than 1e-6");
  const std::size_t idx = sample_discrete(probs, rng);
  return PauliString::from_index(s.n, static_cast<std::uint64_t>(idx));
}

// ---------------------------------------------------------------------------
// Projectors onto Bell index sets

/// Index mask for span{ sigma_P : P in the kept set }. With include_identity,
/// this is the postselection subspace D = {identity} u {|P| > k}; without it,
/// the strict nonlocal subspace {|P| > k} used by the amplitude-estimation
/// tester. The two differ exactly on the identity index.
struct ProjectorD {
  int n = 0;
  int k = 0;
  bool include_identity = true;
  std::vector<std::uint8_t> keep;  // size 4^n, indexed by pauli index

  bool keeps(std::uint64_t pauli_index) const { return keep[pauli_index] != 0; }
};

inline ProjectorD make_projector(int n, int k, bool include_identity) {
  ProjectorD proj{n, k, include_identity, {}};
  proj.keep.resize(1ULL << (2 * n));
  for (std::uint64_t idx = 0; idx < proj.keep.size(); ++idx) {
    const int w = weight_of_index(n, idx);
    proj.keep[idx] = (w > k || (include_identity && idx == 0)) ? 1 : 0;
  }
  return proj;
}

inline ProjectorD make_projector_D(int n, int k) { return make_projector(n, k, true); }
inline ProjectorD make_projector_strict(int n, int k) { return make_projector(n, k, false); }

/// Projects s onto the mask's span in place and returns the outcome
/// probability ||Pi s||^2. The state is left unnormalized.
inline double project_into(DoubledState& s, const ProjectorD& proj, Vector& bell,
                           BellScratch& ws) {
  bell_transform_into(s, bell, ws);
  double p_in = 0.0;
  for (std::int64_t i = 0; i < bell.size(); ++i) {
    if (proj.keep[static_cast<std::uint64_t>(i)])
      p_in += std::norm(bell[i]);
    else
      bell[i] = Complex(0.0, 0.0);
  }
  bell_inverse_into(s.n, bell, s, ws);
  s.unnormalized = true;
  return p_in;
}

struct ProjectionResult {
  DoubledState state;  // Pi s, unnormalized
  double p_in = 0.0;   // probability of the Pi outcome
};

inline ProjectionResult project_D(const DoubledState& s, const ProjectorD& proj) {
  ProjectionResult r{s, 0.0};
  BellScratch ws(s.n);
  Vector bell;
  r.p_in = project_into(r.state, proj, bell, ws);
  return r;
}

/// A s = Pi_D (I tensor H) Pi_D s. Diagnostic path; the tester itself only
/// ever applies the oracle unitary followed by the index mask.
inline DoubledState apply_A(const Matrix& h_dense, const ProjectorD& proj,
                            const DoubledState& s) {
  BellScratch ws(s.n);
  Vector bell;
  DoubledState out = s;
  project_into(out, proj, bell, ws);
  apply_right_unitary_into(out, h_dense, ws);  // (I tensor H); H need not be unitary
  project_into(out, proj, bell, ws);
  out.unnormalized = true;
  return out;
}

inline DoubledState apply_A(const HamiltonianSpec& h, const ProjectorD& proj,
                            const DoubledState& s) {
  return apply_A(assemble(h), proj, s);
}

/// <sigma_P| (I tensor M) |sigma_Q>, computed vectorially in O(2^n); equals
/// tr(P M Q)/2^n (the dense trace form is the test oracle in bell_dense.hpp).
inline Complex sigma_overlap(const PauliString& p, const Matrix& m, const PauliString& q) {
  if (p.n != q.n || m.rows() != (1LL << p.n) || m.cols() != m.rows())
    throw std::invalid_argument("sigma_overlap: dimension mismatch");
  const std::int64_t dim = 1LL << p.n;
  Complex acc = 0.0;
  for (std::int64_t a = 0; a < dim; ++a) {
    const Complex php = pauli_phase(p, static_cast<std::uint64_t>(a));
    const Complex phq = pauli_phase(q, static_cast<std::uint64_t>(a));
    acc += std::conj(php) * phq *
           m(a ^ static_cast<std::int64_t>(p.x), a ^ static_cast<std::int64_t>(q.x));
  }
  return acc / static_cast<double>(dim);
}

}  // namespace loctest
