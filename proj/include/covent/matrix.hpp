#pragma once

// Dense complex matrix primitives: Kronecker products, partial transposes,
// Hermitian spectra and PSD projection. Every routine is a pure function.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "covent/error.hpp"

namespace covent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Relative Frobenius tolerance applied to Hermiticity checks.
inline constexpr double kHermiticityTolerance = 1e-9;

enum class Subsystem { A, B };

inline const char* to_string(Subsystem s) { return s == Subsystem::A ? "A" : "B"; }

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": matrix has non-finite entries");
}

inline void require_bipartition(Eigen::Index dim, int dim_a, int dim_b, const char* what) {
  if (dim_a <= 0 || dim_b <= 0 || static_cast<Eigen::Index>(dim_a) * dim_b != dim) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(dim) +
                         " does not factor as " + std::to_string(dim_a) + "x" +
                         std::to_string(dim_b));
  }
}

// Index of entry ((a,b),(a',b')) after transposing one factor of the flat
// row-major bipartite index i = a*dim_b + b.
struct PartialTransposeIndex {
  int dim_b;
  Subsystem which;

  std::pair<Eigen::Index, Eigen::Index> operator()(Eigen::Index row, Eigen::Index col) const {
    const Eigen::Index a = row / dim_b, b = row % dim_b;
    const Eigen::Index ap = col / dim_b, bp = col % dim_b;
    if (which == Subsystem::B) return {a * dim_b + bp, ap * dim_b + b};
    return {ap * dim_b + b, a * dim_b + bp};
  }
};

}  // namespace detail

/// Kronecker product; A indexes blocks, B indexes within a block.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_square(a, "kron");
  detail::require_square(b, "kron");
  const Eigen::Index na = a.rows(), nb = b.rows();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
  }
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Transposes the indices of one tensor factor of a (dim_a*dim_b)-square matrix.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, int dim_a, int dim_b,
                                       Subsystem which = Subsystem::B) {
  detail::require_square(m, "partial_transpose");
  detail::require_bipartition(m.rows(), dim_a, dim_b, "partial_transpose");
  const detail::PartialTransposeIndex map{dim_b, which};
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const auto [r2, c2] = map(r, c);
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

inline SparseComplexMatrix partial_transpose(const SparseComplexMatrix& m, int dim_a, int dim_b,
                                             Subsystem which = Subsystem::B) {
  detail::require_bipartition(m.rows(), dim_a, dim_b, "partial_transpose");
  const detail::PartialTransposeIndex map{dim_b, which};
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseComplexMatrix::InnerIterator it(m, k); it; ++it) {
      const auto [r2, c2] = map(it.row(), it.col());
      entries.emplace_back(static_cast<int>(r2), static_cast<int>(c2), it.value());
    }
  }
  SparseComplexMatrix out(m.rows(), m.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

/// ||m - m^dagger||_F / ||m||_F (zero for the zero matrix).
inline double hermiticity_defect(const ComplexMatrix& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.adjoint()).norm() / norm;
}

/// Checks Hermiticity within `tol` and returns the symmetrized (m + m^dagger)/2.
inline ComplexMatrix hermitian_part(const ComplexMatrix& m, double tol = kHermiticityTolerance) {
  detail::require_square(m, "hermitian_part");
  detail::require_finite(m, "hermitian_part");
  const double defect = hermiticity_defect(m);
  if (defect > tol) throw NotHermitianError(defect, tol);
  return 0.5 * (m + m.adjoint());
}

/// Real spectrum of a Hermitian matrix, ascending; element 0 is the minimum.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m,
                                        double tol = kHermiticityTolerance) {
  const ComplexMatrix h = hermitian_part(m, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  return solver.eigenvalues();
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clipped to zero.
inline ComplexMatrix psd_project(const ComplexMatrix& m, double tol = kHermiticityTolerance) {
  const ComplexMatrix h = hermitian_part(m, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  const RealVector clipped = solver.eigenvalues().cwiseMax(0.0);
  const ComplexMatrix& vecs = solver.eigenvectors();
  ComplexMatrix out = vecs * clipped.cast<Complex>().asDiagonal() * vecs.adjoint();
  return 0.5 * (out + out.adjoint());
}

/// Product of the real eigenvalues.
inline double hermitian_determinant(const ComplexMatrix& m, double tol = kHermiticityTolerance) {
  return hermitian_eigenvalues(m, tol).prod();
}

namespace detail {

// Tr(rho * X) for sparse X: sum over nonzeros X(r,c) * rho(c,r).
inline Complex trace_product(const ComplexMatrix& rho, const SparseComplexMatrix& x) {
  Complex acc{0.0, 0.0};
  for (int k = 0; k < x.outerSize(); ++k) {
    for (SparseComplexMatrix::InnerIterator it(x, k); it; ++it) acc += rho(it.col(), it.row()) * it.value();
  }
  return acc;
}

// Tr(rho * X^{T_B}) without materializing the partial transpose.
inline Complex trace_product_pt(const ComplexMatrix& rho, const SparseComplexMatrix& x, int dim_b) {
  const PartialTransposeIndex map{dim_b, Subsystem::B};
  Complex acc{0.0, 0.0};
  for (int k = 0; k < x.outerSize(); ++k) {
    for (SparseComplexMatrix::InnerIterator it(x, k); it; ++it) {
      const auto [r, c] = map(it.row(), it.col());
      acc += rho(c, r) * it.value();
    }
  }
  return acc;
}

// Re Tr(rho * op) for dense op.
inline double expect(const ComplexMatrix& rho, const ComplexMatrix& op) {
  return (rho.array() * op.transpose().array()).sum().real();
}

inline Complex expect_product(const ComplexMatrix& rho, const ComplexMatrix& a, const ComplexMatrix& b) {
  return (rho * a).cwiseProduct(b.transpose()).sum();
}

}  // namespace detail

}  // namespace covent
