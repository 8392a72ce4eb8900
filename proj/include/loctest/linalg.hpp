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
 * Exact dense complex linear algebra: time-evolution unitaries via Hermitian
 * eigendecomposition, spectral norms, and the phase-minimized distance
 * between unitaries together with the diamond-norm bracket it induces.
 */

#pragma once

#include "loctest/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace loctest {

/// Largest singular value, computed as sqrt(lambda_max(M^dagger M)).
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline bool is_unitary(const Matrix& m, double tol = 1e-9) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return ((m.adjoint() * m) - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// exp(-i H t) for a dense Hermitian H, via H = V diag(w) V^dagger.
/// Exact up to eigensolver accuracy, so lemma checks see no stepper error.
inline Matrix evolve_matrix(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd w = es.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j)
    phases[j] = std::exp(Complex(0.0, -w[j] * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(-i H t) for a term-map Hamiltonian. Negative t gives the inverse
/// oracle's unitary.
inline Matrix evolve(const HamiltonianSpec& h, double t) {
  if (h.empty()) {
    const std::int64_t dim = 1LL << h.n();
    return Matrix::Identity(dim, dim);
  }
  return evolve_matrix(assemble(h), t);
}

/// min over theta of || e^{i theta} U - V ||_inf, the global-phase-quotiented
/// spectral distance between unitaries. Since U, V are unitary this equals
/// min_theta max_j |e^{i theta} - mu_j| over the eigenvalues mu_j of V U^dagger,
/// which a golden-section search over a fine initial grid pins down to the
/// requested theta tolerance.
inline double min_phase_spectral_distance(const Matrix& u, const Matrix& v,
                                          double theta_tol = 1e-9) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("unitaries must have equal dimension");
  if (!is_unitary(u) || !is_unitary(v))
    throw std::invalid_argument("min_phase_spectral_distance requires unitary inputs");

  Eigen::ComplexEigenSolver<Matrix> es(v * u.adjoint(), /*computeEigenvectors=*/false);
  std::vector<double> phases(static_cast<std::size_t>(es.eigenvalues().size()));
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
    phases[static_cast<std::size_t>(j)] = std::arg(es.eigenvalues()[j]);

  // max_j |e^{i theta} - e^{i phi_j}| = 2 max_j |sin((theta - phi_j)/2)|
  auto objective = [&](double theta) {
    double worst = 0.0;
    for (double phi : phases)
      worst = std::max(worst, std::abs(std::sin(0.5 * (theta - phi))));
    return 2.0 * worst;
  };

  constexpr int kGrid = 4096;
  const double two_pi = 2.0 * std::numbers::pi;
  double best_theta = 0.0, best = objective(0.0);
  for (int g = 1; g < kGrid; ++g) {
    const double theta = two_pi * g / kGrid;
    const double val = objective(theta);
    if (val < best) {
      best = val;
      best_theta = theta;
    }
  }

  double lo = best_theta - two_pi / kGrid;
  double hi = best_theta + two_pi / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = objective(a), fb = objective(b);
  while (hi - lo > theta_tol * 1e-3) {
    if (fa < fb) {
      hi = b; b = a; fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = objective(a);
    } else {
      lo = a; a = b; fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = objective(b);
    }
  }
  return std::min({best, fa, fb, objective(0.5 * (lo + hi))});
}

struct DiamondInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bracket for the diamond distance between the channels of two unitaries:
/// the true value lies in [d, 2d] for d the phase-minimized spectral distance.
inline DiamondInterval diamond_interval(const Matrix& u, const Matrix& v) {
  const double d = min_phase_spectral_distance(u, v);
  return {d, 2.0 * d};
}

}  // namespace loctest
