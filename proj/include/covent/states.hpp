#pragma once

// Bipartite pure and mixed states used throughout: the Bell state, Werner
// mixtures, x-polarized spin-coherent ensembles in the Dicke basis and the
// S^z_A S^z_B one-axis-twisting evolution.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "covent/matrix.hpp"

namespace covent {

/// A normalized vector on C^{dim_a} (x) C^{dim_b}, flat index a*dim_b + b.
class PureState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  PureState(ComplexVector amplitudes, int dim_a, int dim_b)
      : amplitudes_(std::move(amplitudes)), dim_a_(dim_a), dim_b_(dim_b) {
    detail::require_bipartition(amplitudes_.size(), dim_a, dim_b, "PureState");
    if (!amplitudes_.allFinite()) throw ValidationError("PureState: non-finite amplitude");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
      throw ValidationError("PureState: norm " + std::to_string(norm) + " is not 1");
    }
  }

  /// Rescales to unit norm first; rejects the zero vector.
  static PureState normalized(ComplexVector amplitudes, int dim_a, int dim_b) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0)) throw ValidationError("PureState: cannot normalize a zero vector");
    amplitudes /= norm;
    return PureState(std::move(amplitudes), dim_a, dim_b);
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim() const { return dim_a_ * dim_b_; }

  Complex amplitude(int a, int b) const { return amplitudes_(a * dim_b_ + b); }

  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
  int dim_a_;
  int dim_b_;
};

/// Hermitian, unit-trace, positive semidefinite matrix on a bipartite space.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Full validation: Hermiticity, unit trace and a nonnegative spectrum.
  static DensityMatrix from_matrix(const ComplexMatrix& m, int dim_a, int dim_b) {
    detail::require_square(m, "DensityMatrix");
    detail::require_bipartition(m.rows(), dim_a, dim_b, "DensityMatrix");
    ComplexMatrix h = hermitian_part(m, kTolerance);
    check_trace(h);
    const double min_eig = hermitian_eigenvalues(h)(0);
    if (min_eig < -kTolerance) {
      throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
    return DensityMatrix(std::move(h), dim_a, dim_b);
  }

  static DensityMatrix from_pure(const PureState& psi) {
    return DensityMatrix(psi.projector(), psi.dim_a(), psi.dim_b());
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim() const { return dim_a_ * dim_b_; }

  /// Positive semidefinite by construction (convex mixtures of valid states);
  /// only the cheap trace and Hermiticity checks run.
  static DensityMatrix from_convex_mixture(ComplexMatrix m, int dim_a, int dim_b) {
    detail::require_bipartition(m.rows(), dim_a, dim_b, "DensityMatrix");
    ComplexMatrix h = hermitian_part(m, kTolerance);
    check_trace(h);
    return DensityMatrix(std::move(h), dim_a, dim_b);
  }

 private:
  DensityMatrix(ComplexMatrix m, int dim_a, int dim_b)
      : matrix_(std::move(m)), dim_a_(dim_a), dim_b_(dim_b) {}

  static void check_trace(const ComplexMatrix& h) {
    const Complex tr = h.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTolerance) {
      throw ValidationError("DensityMatrix: trace " + std::to_string(tr.real()) + " is not 1");
    }
  }

  ComplexMatrix matrix_;
  int dim_a_;
  int dim_b_;
};

/// (|00> + |11>)/sqrt(2).
inline PureState bell_state() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), 2, 2);
}

/// (1 - mu)/D * I + mu |psi><psi|.
inline DensityMatrix werner_mix(const PureState& psi, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw ValidationError("werner_mix: mixing parameter " + std::to_string(mu) + " outside [0, 1]");
  }
  const int d = psi.dim();
  ComplexMatrix m = mu * psi.projector();
  m.diagonal().array() += (1.0 - mu) / d;
  return DensityMatrix::from_convex_mixture(std::move(m), psi.dim_a(), psi.dim_b());
}

namespace detail {

// sqrt(C(n, k)) / 2^{n/2}, exact integer binomials while they fit comfortably.
inline double coherent_amplitude(int n, int k) {
  if (n <= 30) {
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return std::sqrt(static_cast<double>(c)) * std::pow(2.0, -0.5 * n);
  }
  const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(0.5 * log_c - 0.5 * n * std::log(2.0));
}

}  // namespace detail

/// Maximally S^x-polarized state of M qubits in the Dicke basis, k = 0..M,
/// where basis index k has S^z eigenvalue M - 2k.
inline ComplexVector spin_coherent_x(int m) {
  if (m < 1) throw ValidationError("spin_coherent_x: ensemble size must be >= 1");
  ComplexVector v(m + 1);
  for (int k = 0; k <= m; ++k) v(k) = detail::coherent_amplitude(m, k);
  return v;
}

/// |S^x_A = M>|S^x_B = M> on the (M+1)^2 symmetric space.
inline PureState polarized_ensembles(int m) {
  return PureState::normalized(kron(spin_coherent_x(m), spin_coherent_x(m)), m + 1, m + 1);
}

/// Applies exp(i S^z_A S^z_B t); each side is a Dicke space with M = dim - 1.
inline PureState szsz_evolve(const PureState& psi, double t) {
  const int ma = psi.dim_a() - 1, mb = psi.dim_b() - 1;
  ComplexVector out = psi.amplitudes();
  for (int j = 0; j <= ma; ++j) {
    const double sz_a = ma - 2.0 * j;
    for (int k = 0; k <= mb; ++k) {
      const double sz_b = mb - 2.0 * k;
      out(j * psi.dim_b() + k) *= std::polar(1.0, sz_a * sz_b * t);
    }
  }
  return PureState::normalized(std::move(out), psi.dim_a(), psi.dim_b());
}

/// Werner mixture of the twisted two-ensemble state.
inline DensityMatrix spin_ensemble_state(int m, double mu, double t) {
  return werner_mix(szsz_evolve(polarized_ensembles(m), t), mu);
}

/// Haar-random pure state (normalized complex Gaussian vector).
template <class Rng>
PureState random_pure_state(int dim_a, int dim_b, Rng& rng) {
  std::normal_distribution<double> gauss;
  ComplexVector v(dim_a * dim_b);
  for (auto& x : v) x = Complex(gauss(rng), gauss(rng));
  return PureState::normalized(std::move(v), dim_a, dim_b);
}

/// Random mixed state G G^dagger / Tr with G a dim x rank Ginibre matrix.
template <class Rng>
DensityMatrix random_density_matrix(int dim_a, int dim_b, int rank, Rng& rng) {
  std::normal_distribution<double> gauss;
  const int d = dim_a * dim_b;
  ComplexMatrix g(d, rank);
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::from_convex_mixture(std::move(m), dim_a, dim_b);
}

}  // namespace covent
