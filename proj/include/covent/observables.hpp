#pragma once

// Observable sets: Pauli products, collective spins, Holstein-Primakoff
// quadratures and SO(3)-rotated spin triples. Spin operators use the Pauli-sum
// convention S = sum_l sigma_l, so S^z has eigenvalues M - 2k in the Dicke basis.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "covent/matrix.hpp"

namespace covent {

enum class Support { A, B, Joint };

inline const char* to_string(Support s) {
  switch (s) {
    case Support::A: return "A";
    case Support::B: return "B";
    default: return "JOINT";
  }
}

using Rotation3 = Eigen::Matrix3d;

/// A Hermitian operator on the joint space with a label, a support tag and an
/// optional parity under partial transposition of B.
class Observable {
 public:
  static constexpr double kTolerance = 1e-10;

  Observable(std::string label, ComplexMatrix matrix, Support support,
             std::optional<int> pt_parity, int dim_a, int dim_b)
      : label_(std::move(label)),
        matrix_(std::move(matrix)),
        support_(support),
        pt_parity_(pt_parity),
        dim_a_(dim_a),
        dim_b_(dim_b) {
    detail::require_square(matrix_, "Observable");
    detail::require_bipartition(matrix_.rows(), dim_a, dim_b, "Observable");
    const double scale = std::max(1.0, matrix_.norm());
    if ((matrix_ - matrix_.adjoint()).norm() > kTolerance * scale) {
      throw NotHermitianError(hermiticity_defect(matrix_), kTolerance);
    }
    if (pt_parity_) {
      if (*pt_parity_ != 1 && *pt_parity_ != -1) {
        throw ValidationError("Observable " + label_ + ": parity must be +1 or -1");
      }
      const ComplexMatrix pt = partial_transpose(matrix_, dim_a, dim_b, Subsystem::B);
      if ((pt - static_cast<double>(*pt_parity_) * matrix_).norm() > kTolerance * scale) {
        throw ValidationError("Observable " + label_ + ": partial transpose parity " +
                              std::to_string(*pt_parity_) + " does not hold");
      }
    }
    sparse_ = matrix_.sparseView();
  }

  /// op (x) I_B. Partial transposition of B leaves it invariant.
  static Observable local_a(std::string label, const ComplexMatrix& op, int dim_b) {
    const int dim_a = static_cast<int>(op.rows());
    return Observable(std::move(label), kron(op, ComplexMatrix::Identity(dim_b, dim_b)), Support::A,
                      1, dim_a, dim_b);
  }

  /// I_A (x) op, with parity +1/-1 when op^T = +op/-op, none otherwise.
  static Observable local_b(std::string label, const ComplexMatrix& op, int dim_a) {
    const int dim_b = static_cast<int>(op.rows());
    return Observable(std::move(label), kron(ComplexMatrix::Identity(dim_a, dim_a), op), Support::B,
                      transpose_parity(op), dim_a, dim_b);
  }

  static std::optional<int> transpose_parity(const ComplexMatrix& op) {
    const double scale = std::max(1.0, op.norm());
    if ((op.transpose() - op).norm() <= kTolerance * scale) return 1;
    if ((op.transpose() + op).norm() <= kTolerance * scale) return -1;
    return std::nullopt;
  }

  const std::string& label() const { return label_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  const SparseComplexMatrix& sparse() const { return sparse_; }
  Support support() const { return support_; }
  std::optional<int> pt_parity() const { return pt_parity_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }

 private:
  std::string label_;
  ComplexMatrix matrix_;
  SparseComplexMatrix sparse_;
  Support support_;
  std::optional<int> pt_parity_;
  int dim_a_;
  int dim_b_;
};

/// Ordered observables sharing one bipartition; labels are unique.
class ObservableSet {
 public:
  ObservableSet(std::vector<Observable> observables, int dim_a, int dim_b)
      : observables_(std::move(observables)), dim_a_(dim_a), dim_b_(dim_b) {
    if (observables_.empty()) throw ValidationError("ObservableSet: empty set");
    std::set<std::string> seen;
    for (const auto& o : observables_) {
      if (o.dim_a() != dim_a || o.dim_b() != dim_b) {
        throw DimensionError("ObservableSet: " + o.label() + " lives on a different bipartition");
      }
      if (!seen.insert(o.label()).second) {
        throw ValidationError("ObservableSet: duplicate label " + o.label());
      }
    }
  }

  std::size_t size() const { return observables_.size(); }
  const Observable& operator[](std::size_t i) const { return observables_[i]; }
  auto begin() const { return observables_.begin(); }
  auto end() const { return observables_.end(); }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim() const { return dim_a_ * dim_b_; }

  /// Subset in the given order.
  ObservableSet select(const std::vector<std::size_t>& indices) const {
    std::vector<Observable> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(observables_.at(i));
    return ObservableSet(std::move(out), dim_a_, dim_b_);
  }

 private:
  std::vector<Observable> observables_;
  int dim_a_;
  int dim_b_;
};

namespace pauli {

inline ComplexMatrix x() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline ComplexMatrix y() { return (ComplexMatrix(2, 2) << 0, -kI, kI, 0).finished(); }
inline ComplexMatrix z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }

}  // namespace pauli

struct SpinTriple {
  ComplexMatrix x, y, z;
};

/// Collective spin of M qubits on the (M+1)-dimensional Dicke space. S^x is
/// real symmetric, S^y purely imaginary antisymmetric, S^z = diag(M - 2k).
inline SpinTriple collective_spin(int m) {
  if (m < 1) throw ValidationError("collective_spin: ensemble size must be >= 1");
  const int d = m + 1;
  const double j = 0.5 * m;
  // J+ raises the magnetic number m_z = j - k, i.e. maps index k to k - 1.
  RealMatrix raise = RealMatrix::Zero(d, d);
  for (int k = 1; k < d; ++k) {
    const double mz = j - k;
    raise(k - 1, k) = std::sqrt(j * (j + 1.0) - mz * (mz + 1.0));
  }
  SpinTriple s;
  s.x = (raise + raise.transpose()).cast<Complex>();
  s.y = -kI * (raise - raise.transpose()).cast<Complex>();
  s.z = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) s.z(k, k) = static_cast<double>(m - 2 * k);
  return s;
}

/// R applied to the triple: S'_i = sum_j R_ij S_j.
inline SpinTriple rotate(const SpinTriple& s, const Rotation3& r) {
  const ComplexMatrix* in[3] = {&s.x, &s.y, &s.z};
  SpinTriple out{ComplexMatrix::Zero(s.x.rows(), s.x.cols()), ComplexMatrix::Zero(s.x.rows(), s.x.cols()),
                 ComplexMatrix::Zero(s.x.rows(), s.x.cols())};
  ComplexMatrix* dst[3] = {&out.x, &out.y, &out.z};
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) *dst[i] += r(i, k) * *in[k];
  }
  return out;
}

inline void require_orthogonal(const Rotation3& r) {
  if (!r.allFinite() || (r.transpose() * r - Rotation3::Identity()).norm() > 1e-10) {
    throw ValidationError("rotation matrix is not orthogonal (R^T R != I)");
  }
}

/// Rotation taking (S^x, S^y) to ((S^x + S^y)/sqrt2, (S^y - S^x)/sqrt2), S^z fixed.
inline Rotation3 diagonal_rotation() {
  const double h = 1.0 / std::sqrt(2.0);
  return (Rotation3() << h, h, 0, -h, h, 0, 0, 0, 1).finished();
}

/// {sigma^x (x) sigma^x, sigma^y (x) sigma^y, sigma^z (x) sigma^z}.
inline ObservableSet pauli_product_set() {
  // Parity of a product is the transpose parity of its B factor.
  std::vector<Observable> obs;
  obs.emplace_back("XX", kron(pauli::x(), pauli::x()), Support::Joint, 1, 2, 2);
  obs.emplace_back("YY", kron(pauli::y(), pauli::y()), Support::Joint, -1, 2, 2);
  obs.emplace_back("ZZ", kron(pauli::z(), pauli::z()), Support::Joint, 1, 2, 2);
  return ObservableSet(std::move(obs), 2, 2);
}

/// (S^x_A, S^y_A, S^z_A, S^x_B, S^y_B, S^z_B) on (M+1)^2 dimensions.
inline ObservableSet collective_spin_set(int m) {
  const SpinTriple s = collective_spin(m);
  const int d = m + 1;
  std::vector<Observable> obs;
  obs.push_back(Observable::local_a("Sx_A", s.x, d));
  obs.push_back(Observable::local_a("Sy_A", s.y, d));
  obs.push_back(Observable::local_a("Sz_A", s.z, d));
  obs.push_back(Observable::local_b("Sx_B", s.x, d));
  obs.push_back(Observable::local_b("Sy_B", s.y, d));
  obs.push_back(Observable::local_b("Sz_B", s.z, d));
  return ObservableSet(std::move(obs), d, d);
}

/// Holstein-Primakoff quadratures (x_A, p_A, x_B, p_B) = (S^y_A, S^z_A, S^y_B, S^z_B)/sqrt(2M),
/// built from spin axes rotated by `r` (identity for the optimal axes).
inline ObservableSet hp_quadrature_set(int m, const Rotation3& r = Rotation3::Identity()) {
  require_orthogonal(r);
  const SpinTriple s = rotate(collective_spin(m), r);
  const int d = m + 1;
  const double scale = 1.0 / std::sqrt(2.0 * m);
  std::vector<Observable> obs;
  obs.push_back(Observable::local_a("x_A", scale * s.y, d));
  obs.push_back(Observable::local_a("p_A", scale * s.z, d));
  obs.push_back(Observable::local_b("x_B", scale * s.y, d));
  obs.push_back(Observable::local_b("p_B", scale * s.z, d));
  return ObservableSet(std::move(obs), d, d);
}

/// Applies R (+) R to a set laid out as (x,y,z)_A, (x,y,z)_B. Rotated members
/// carry no parity tag.
inline ObservableSet rotate_so3(const ObservableSet& set, const Rotation3& r) {
  require_orthogonal(r);
  if (set.size() != 6) throw ValidationError("rotate_so3: expected six observables (x,y,z)_A,(x,y,z)_B");
  for (std::size_t i = 0; i < 6; ++i) {
    const Support want = i < 3 ? Support::A : Support::B;
    if (set[i].support() != want) {
      throw ValidationError("rotate_so3: observable " + set[i].label() + " has the wrong support");
    }
  }
  std::vector<Observable> obs;
  for (std::size_t block = 0; block < 2; ++block) {
    for (std::size_t i = 0; i < 3; ++i) {
      ComplexMatrix acc = ComplexMatrix::Zero(set.dim(), set.dim());
      for (std::size_t k = 0; k < 3; ++k) acc += r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * set[3 * block + k].matrix();
      const Observable& src = set[3 * block + i];
      obs.emplace_back(src.label() + "'", std::move(acc), src.support(), std::nullopt, set.dim_a(),
                       set.dim_b());
    }
  }
  return ObservableSet(std::move(obs), set.dim_a(), set.dim_b());
}

}  // namespace covent
