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
 * Dense doubled-space builders: the Bell basis matrix, projectors as 4^n x 4^n
 * matrices, the effective operator A, and I tensor M. These are cross-check
 * oracles for the index-mask implementations in bell.hpp — used by tests and
 * the verification battery, never inside the testers' hot loops.
 */

#pragma once

#include "loctest/bell.hpp"
#include "loctest/linalg.hpp"

namespace loctest {

/// Column p (pauli index) holds the amplitudes of sigma_P.
inline Matrix bell_basis_matrix(int n) {
  const std::int64_t dim2 = 1LL << (2 * n);
  Matrix b(dim2, dim2);
  for (std::int64_t idx = 0; idx < dim2; ++idx)
    b.col(idx) = sigma_state(PauliString::from_index(n, static_cast<std::uint64_t>(idx))).v;
  return b;
}

/// I_{2^n} tensor M on the doubled space.
inline Matrix right_tensor(int n, const Matrix& m) {
  const std::int64_t dim = 1LL << n;
  Matrix out = Matrix::Zero(dim * dim, dim * dim);
  for (std::int64_t a = 0; a < dim; ++a)
    out.block(a << n, a << n, dim, dim) = m;
  return out;
}

/// Dense form of the index-mask projector.
inline Matrix dense_projector(const ProjectorD& proj) {
  const Matrix b = bell_basis_matrix(proj.n);
  const std::int64_t dim2 = b.rows();
  Vector diag(dim2);
  for (std::int64_t i = 0; i < dim2; ++i)
    diag[i] = proj.keep[static_cast<std::uint64_t>(i)] ? 1.0 : 0.0;
  return b * diag.asDiagonal() * b.adjoint();
}

/// Dense A = Pi_D (I tensor H) Pi_D.
inline Matrix dense_A(const HamiltonianSpec& h, const ProjectorD& proj) {
  const Matrix pi = dense_projector(proj);
  return pi * right_tensor(h.n(), assemble(h)) * pi;
}

/// Trace-form oracle for sigma_overlap: tr(P M Q) / 2^n.
inline Complex sigma_overlap_trace(const PauliString& p, const Matrix& m, const PauliString& q) {
  const Matrix prod = pauli_matrix(p) * m * pauli_matrix(q);
  return prod.trace() / static_cast<double>(1LL << p.n);
}

}  // namespace loctest
