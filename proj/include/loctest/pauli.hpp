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
 * Pauli-string algebra and Hamiltonian representation: n-qubit Pauli words,
 * real-weighted term maps with spectral-norm validation, locality splits,
 * distance-to-k-local under several norms, and dense (de)composition.
 *
 * Conventions fixed here and relied on everywhere else:
 *  - A Pauli word is stored as two n-bit masks. Bit i describes the letter on
 *    qubit i+1: (x,z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
 *  - In text form qubit 1 is the leftmost character.
 *  - As a matrix, P = i^{#Y} X^x Z^z, so P|b> = i^{#Y} (-1)^{b.z} |b xor x>.
 *  - pauli index := (x << n) | z, a bijection onto [0, 4^n).
 */

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace loctest {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense back-ends allocate 2^n x 2^n (and the doubled-space test oracles
/// 4^n x 4^n) matrices; 6 qubits means a 4096-dimensional doubled space
/// (64 KiB per state vector, 256 MiB per dense doubled-space operator).
inline constexpr int kDefaultMaxQubits = 6;

// ---------------------------------------------------------------------------
// PauliString

struct PauliString {
  int n = 0;
  std::uint64_t x = 0;  // X/Y positions
  std::uint64_t z = 0;  // Z/Y positions

  PauliString() = default;
  PauliString(int n_, std::uint64_t x_, std::uint64_t z_) : n(n_), x(x_), z(z_) {}

  static PauliString identity(int n) { return PauliString(n, 0, 0); }

  /// Letter on qubit q (1-based): 'I', 'X', 'Y' or 'Z'.
  char letter(int q) const {
    const bool bx = (x >> (q - 1)) & 1;
    const bool bz = (z >> (q - 1)) & 1;
    return bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }

  bool is_identity() const { return x == 0 && z == 0; }

  /// Bell/basis index of this word: (x << n) | z.
  std::uint64_t index() const { return (x << n) | z; }

  static PauliString from_index(int n, std::uint64_t idx) {
    const std::uint64_t mask = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    return PauliString(n, idx >> n, idx & mask);
  }

  static PauliString from_string(const std::string& word) {
    if (word.empty() || word.size() > 63)
      throw std::invalid_argument("pauli word must have 1..63 letters");
    PauliString p(static_cast<int>(word.size()), 0, 0);
    for (std::size_t i = 0; i < word.size(); ++i) {
      switch (word[i]) {
        case 'I': break;
        case 'X': p.x |= 1ULL << i; break;
        case 'Y': p.x |= 1ULL << i; p.z |= 1ULL << i; break;
        case 'Z': p.z |= 1ULL << i; break;
        default:
          throw std::invalid_argument(std::string("invalid pauli letter '") +
                                      word[i] + "' in \"" + word + "\"");
      }
    }
    return p;
  }

  std::string str() const {
    std::string s(static_cast<std::size_t>(n), 'I');
    for (int q = 1; q <= n; ++q) s[q - 1] = letter(q);
    return s;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Number of non-identity letters.
inline int weight(const PauliString& p) {
  return std::popcount(p.x | p.z);
}

/// Weight of the word with pauli index idx on n qubits.
inline int weight_of_index(int n, std::uint64_t idx) {
  const std::uint64_t mask = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  return std::popcount((idx >> n) | (idx & mask));
}

/// i^k for k mod 4.
inline Complex imag_unit_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Phase of P acting on basis state |b>: P|b> = pauli_phase(P,b) |b xor P.x>.
inline Complex pauli_phase(const PauliString& p, std::uint64_t b) {
  const int y_count = std::popcount(p.x & p.z);
  const int sign = std::popcount(b & p.z) & 1;
  Complex ph = imag_unit_pow(y_count);
  return sign ? -ph : ph;
}

/// Dense 2^n x 2^n matrix of the Pauli word.
inline Matrix pauli_matrix(const PauliString& p) {
  const std::int64_t dim = 1LL << p.n;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b)
    m(b ^ static_cast<std::int64_t>(p.x), b) = pauli_phase(p, static_cast<std::uint64_t>(b));
  return m;
}

// ---------------------------------------------------------------------------
// Norm selection

enum class NormKind { frobenius_normalized, spectral, schatten_normalized, pauli_p };

struct Norm {
  NormKind kind = NormKind::frobenius_normalized;
  double p = 2.0;  // order for the Schatten / Pauli families

  static Norm frobenius() { return {NormKind::frobenius_normalized, 2.0}; }
  static Norm spectral() { return {NormKind::spectral, 0.0}; }
  static Norm schatten(double p) { return {NormKind::schatten_normalized, p}; }
  static Norm pauli(double p) { return {NormKind::pauli_p, p}; }
};

// ---------------------------------------------------------------------------
// HamiltonianSpec

using TermMap = std::map<std::uint64_t, double>;  // pauli index -> coefficient

/// A validated traceless Hamiltonian H = sum_P a_P P with ||H||_inf <= 1.
/// Immutable after construction; safe to share across trial workers.
class HamiltonianSpec {
 public:
  /// Validates raw terms: merges duplicate words, strips any identity term
  /// (recorded in stripped_identity()), and checks the exact spectral norm
  /// (dense Hermitian eigendecomposition) against 1 + 1e-9.
  static HamiltonianSpec validate(int n, const std::vector<std::pair<PauliString, double>>& raw,
                                  int max_qubits = kDefaultMaxQubits);

  /// Wraps terms that are already known to satisfy the invariants (used for
  /// locality splits of a validated Hamiltonian; skips the norm gate).
  static HamiltonianSpec unchecked(int n, TermMap terms) {
    HamiltonianSpec h;
    h.n_ = n;
    h.terms_ = std::move(terms);
    return h;
  }

  int n() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool stripped_identity() const { return stripped_identity_; }
  double spectral_norm() const { return spectral_norm_; }
  bool empty() const { return terms_.empty(); }

  double coefficient(const PauliString& p) const {
    auto it = terms_.find(p.index());
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// sum_P a_P^2 — the squared normalized Frobenius norm.
  double coefficient_norm_sq() const {
    double s = 0.0;
    for (const auto& [idx, a] : terms_) s += a * a;
    return s;
  }

 private:
  int n_ = 0;
  TermMap terms_;
  bool stripped_identity_ = false;
  double spectral_norm_ = 0.0;

  friend HamiltonianSpec rescale_terms(const HamiltonianSpec&, double);
};

/// Dense 2^n x 2^n matrix of a term map.
inline Matrix assemble(int n, const TermMap& terms) {
  const std::int64_t dim = 1LL << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [idx, a] : terms) {
    const PauliString p = PauliString::from_index(n, idx);
    for (std::int64_t b = 0; b < dim; ++b)
      m(b ^ static_cast<std::int64_t>(p.x), b) += a * pauli_phase(p, static_cast<std::uint64_t>(b));
  }
  return m;
}

inline Matrix assemble(const HamiltonianSpec& h) { return assemble(h.n(), h.terms()); }

/// Largest |eigenvalue| of a Hermitian matrix.
inline double hermitian_spectral_norm(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline HamiltonianSpec HamiltonianSpec::validate(
    int n, const std::vector<std::pair<PauliString, double>>& raw, int max_qubits) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  if (n > max_qubits) {
    std::ostringstream os;
    os << "qubit count " << n << " exceeds the dense-backend limit " << max_qubits
       << " (a doubled-space operator at n qubits needs 16^n bytes; n=" << max_qubits
       << " is " << (1ULL << (4 * max_qubits)) << " bytes)";
    throw std::invalid_argument(os.str());
  }
  HamiltonianSpec h;
  h.n_ = n;
  for (const auto& [p, a] : raw) {
    if (p.n != n) throw std::invalid_argument("all pauli words must share one qubit count");
    if (!std::isfinite(a)) throw std::invalid_argument("coefficient must be finite and real");
    if (p.is_identity()) {
      h.stripped_identity_ = true;  // trace part only shifts the global phase
      continue;
    }
    h.terms_[p.index()] += a;
  }
  for (auto it = h.terms_.begin(); it != h.terms_.end();)
    it = (it->second == 0.0) ? h.terms_.erase(it) : std::next(it);
  h.spectral_norm_ = h.terms_.empty() ? 0.0 : hermitian_spectral_norm(assemble(h));
  if (h.spectral_norm_ > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "spectral norm " << h.spectral_norm_ << " exceeds 1 (+1e-9 tolerance)";
    throw std::invalid_argument(os.str());
  }
  return h;
}

/// Multiplies every coefficient; used by the random-Hamiltonian generator to
/// hit an exact target spectral norm before validation.
inline HamiltonianSpec rescale_terms(const HamiltonianSpec& h, double factor) {
  HamiltonianSpec out;
  out.n_ = h.n_;
  out.stripped_identity_ = h.stripped_identity_;
  for (const auto& [idx, a] : h.terms_) out.terms_[idx] = a * factor;
  out.spectral_norm_ = h.spectral_norm_ * std::abs(factor);
  return out;
}

// ---------------------------------------------------------------------------
// Locality

/// Partition of h into (weight <= k, weight > k); the two parts reconstruct h
/// term-for-term.
inline std::pair<HamiltonianSpec, HamiltonianSpec> locality_split(const HamiltonianSpec& h, int k) {
  TermMap leq, gt;
  for (const auto& [idx, a] : h.terms())
    (weight_of_index(h.n(), idx) <= k ? leq : gt)[idx] = a;
  return {HamiltonianSpec::unchecked(h.n(), std::move(leq)),
          HamiltonianSpec::unchecked(h.n(), std::move(gt))};
}

/// Singular values of the dense matrix of a term map (Hermitian, so |eig|).
inline Eigen::VectorXd term_singular_values(int n, const TermMap& terms) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble(n, terms), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs();
}

/// Distance from h to the k-local family under the selected norm; the closest
/// k-local Hamiltonian is the weight-<=k part, so this is a norm of h_{>k}.
inline double distance_to_klocal(const HamiltonianSpec& h, int k, const Norm& norm) {
  auto [leq, gt] = locality_split(h, k);
  switch (norm.kind) {
    case NormKind::frobenius_normalized:
      return std::sqrt(gt.coefficient_norm_sq());
    case NormKind::spectral:
      return gt.empty() ? 0.0 : hermitian_spectral_norm(assemble(gt));
    case NormKind::schatten_normalized: {
      if (norm.p < 1.0) throw std::invalid_argument("schatten norm needs p >= 1");
      if (gt.empty()) return 0.0;
      const Eigen::VectorXd sv = term_singular_values(h.n(), gt.terms());
      const double dim = static_cast<double>(sv.size());
      double acc = 0.0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv[i], norm.p);
      return std::pow(acc / dim, 1.0 / norm.p);
    }
    case NormKind::pauli_p: {
      if (norm.p < 1.0) throw std::invalid_argument("pauli norm needs p >= 1");
      double acc = 0.0;
      for (const auto& [idx, a] : gt.terms()) acc += std::pow(std::abs(a), norm.p);
      return std::pow(acc, 1.0 / norm.p);
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Dense decomposition (test oracle for the Bell machinery, and the inverse of
// assemble())

/// Pauli coefficients a_P = tr(P M) / 2^n of a Hermitian matrix.
inline std::vector<std::pair<PauliString, double>> decompose_hermitian(const Matrix& m) {
  const std::int64_t dim = m.rows();
  if (dim == 0 || dim != m.cols() || (dim & (dim - 1)) != 0)
    throw std::invalid_argument("matrix dimension must be a power of two");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("decompose_hermitian: input is not Hermitian");
  int n = 0;
  while ((1LL << n) < dim) ++n;

  std::vector<std::pair<PauliString, double>> out;
  for (std::uint64_t idx = 0; idx < (1ULL << (2 * n)); ++idx) {
    const PauliString p = PauliString::from_index(n, idx);
    Complex tr = 0.0;
    // tr(P M) = sum_b <b| P M |b>; row <b|P is the conjugate phase at b xor x.
    for (std::int64_t b = 0; b < dim; ++b) {
      const std::int64_t bx = b ^ static_cast<std::int64_t>(p.x);
      tr += pauli_phase(p, static_cast<std::uint64_t>(bx)) * m(bx, b);
    }
    const Complex a = tr / static_cast<double>(dim);
    if (std::abs(a) > 1e-13) out.emplace_back(p, a.real());
  }
  return out;
}

// ---------------------------------------------------------------------------
// File format: one `<pauli-word> <real coefficient>` record per line,
// `#` starts a comment, qubit count inferred from the shared word length.

struct ParsedHamiltonianFile {
  int n = 0;
  std::vector<std::pair<PauliString, double>> terms;
};

inline ParsedHamiltonianFile parse_hamiltonian_text(std::istream& in,
                                                    const std::string& origin = "<input>") {
  ParsedHamiltonianFile out;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << lineno << ": " << what;
    throw std::invalid_argument(os.str());
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;  // blank / comment-only line
    double coef = 0.0;
    if (!(ls >> coef)) fail("expected `<pauli-word> <real coefficient>`");
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
    PauliString p;
    try {
      p = PauliString::from_string(word);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (out.n == 0) out.n = p.n;
    if (p.n != out.n) fail("pauli word length differs from earlier records");
    out.terms.emplace_back(p, coef);
  }
  if (out.terms.empty()) throw std::invalid_argument(origin + ": no records found");
  return out;
}

inline ParsedHamiltonianFile parse_hamiltonian_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open hamiltonian file: " + path);
  return parse_hamiltonian_text(in, path);
}

inline std::string format_hamiltonian(const HamiltonianSpec& h) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [idx, a] : h.terms())
    os << PauliString::from_index(h.n(), idx).str() << " " << a << "\n";
  return os.str();
}

}  // namespace loctest
