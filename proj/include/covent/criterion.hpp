#pragma once

// Covariance / commutation matrices of an observable set, the uncertainty
// matrix V + (i/2) Omega, and its partially transposed counterpart whose
// negative eigenvalues certify entanglement.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "covent/matrix.hpp"
#include "covent/observables.hpp"
#include "covent/states.hpp"

namespace covent {

/// V_jk = <{xi_j, xi_k}>/2 - <xi_j><xi_k>, real symmetric.
struct CovarianceMatrix {
  RealMatrix values;
};

/// Omega_jk = -i <[xi_j, xi_k]>, real antisymmetric.
struct CommutationMatrix {
  RealMatrix values;
};

enum class Verdict { Entangled, Undetected };

inline const char* to_string(Verdict v) { return v == Verdict::Entangled ? "ENTANGLED" : "UNDETECTED"; }

inline constexpr double kVerdictTolerance = 1e-9;

struct CriterionReport {
  RealVector eigenvalues;  // ascending
  double min_eigenvalue = 0.0;
  double determinant = 0.0;
  Verdict verdict = Verdict::Undetected;
  double tolerance = kVerdictTolerance;

  bool entangled() const { return verdict == Verdict::Entangled; }
  int negative_count() const { return static_cast<int>((eigenvalues.array() < -tolerance).count()); }
};

/// Measured first and second moments of locally supported, parity-definite
/// observables. Omega vanishes between operators on different subsystems.
struct CorrelationData {
  std::vector<std::string> labels;
  std::vector<Subsystem> partition;
  std::vector<int> pt_parity;
  RealVector means;
  RealMatrix covariance;
  RealMatrix commutation;

  std::size_t size() const { return labels.size(); }

  /// Throws ValidationError naming the violated invariant.
  void validate(double tol = 1e-9) const {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (n == 0) throw ValidationError("CorrelationData: no observables");
    if (partition.size() != labels.size() || pt_parity.size() != labels.size() || means.size() != n) {
      throw ValidationError("CorrelationData: labels, partition, pt_parity and means differ in length");
    }
    if (covariance.rows() != n || covariance.cols() != n) {
      throw ValidationError("CorrelationData: V is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (commutation.rows() != n || commutation.cols() != n) {
      throw ValidationError("CorrelationData: Omega is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!means.allFinite() || !covariance.allFinite() || !commutation.allFinite()) {
      throw ValidationError("CorrelationData: non-finite entries");
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw ValidationError("CorrelationData: duplicate label " + l);
    }
    for (auto s : pt_parity) {
      if (s != 1 && s != -1) throw ValidationError("CorrelationData: pt_parity entries must be +1 or -1");
    }
    const double v_scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    const double w_scale = std::max(1.0, commutation.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        const auto at = "(" + std::to_string(j) + "," + std::to_string(k) + ")";
        if (std::abs(covariance(j, k) - covariance(k, j)) > tol * v_scale) {
          throw ValidationError("CorrelationData: V is not symmetric at " + at);
        }
        if (std::abs(commutation(j, k) + commutation(k, j)) > tol * w_scale) {
          throw ValidationError("CorrelationData: Omega is not antisymmetric at " + at);
        }
        if (partition[j] != partition[k] && std::abs(commutation(j, k)) > tol * w_scale) {
          throw ValidationError("CorrelationData: Omega" + at + " is nonzero across partitions (" +
                                labels[j] + " on " + to_string(partition[j]) + ", " + labels[k] +
                                " on " + to_string(partition[k]) + ")");
        }
      }
    }
  }
};

namespace detail {

inline void require_same_space(const DensityMatrix& rho, const ObservableSet& set, const char* what) {
  if (rho.dim_a() != set.dim_a() || rho.dim_b() != set.dim_b()) {
    throw DimensionError(std::string(what) + ": state is " + std::to_string(rho.dim_a()) + "x" +
                         std::to_string(rho.dim_b()) + " but observables act on " +
                         std::to_string(set.dim_a()) + "x" + std::to_string(set.dim_b()));
  }
}

struct Moments {
  ComplexVector first;   // <xi_j>
  ComplexMatrix second;  // <xi_j xi_k>
};

// Moments against rho, or with each operator product partially transposed
// on B before averaging when `transpose_b` is set.
inline Moments moments(const DensityMatrix& rho, const ObservableSet& set, bool transpose_b) {
  const auto n = static_cast<Eigen::Index>(set.size());
  const ComplexMatrix& r = rho.matrix();
  const int dim_b = rho.dim_b();
  auto average = [&](const SparseComplexMatrix& x) {
    return transpose_b ? trace_product_pt(r, x, dim_b) : trace_product(r, x);
  };
  Moments out{ComplexVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) out.first(j) = average(set[j].sparse());
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const SparseComplexMatrix product = set[j].sparse() * set[k].sparse();
      out.second(j, k) = average(product);
    }
  }
  return out;
}

}  // namespace detail

inline CovarianceMatrix covariance_matrix(const DensityMatrix& rho, const ObservableSet& set) {
  detail::require_same_space(rho, set, "covariance_matrix");
  const auto mo = detail::moments(rho, set, false);
  const ComplexMatrix anti = 0.5 * (mo.second + mo.second.transpose());
  const RealVector mean = mo.first.real();
  RealMatrix v = anti.real() - mean * mean.transpose();
  return {0.5 * (v + v.transpose())};
}

inline CommutationMatrix commutation_matrix(const DensityMatrix& rho, const ObservableSet& set) {
  detail::require_same_space(rho, set, "commutation_matrix");
  const auto mo = detail::moments(rho, set, false);
  const ComplexMatrix comm = -kI * (mo.second - mo.second.transpose());
  RealMatrix w = comm.real();
  return {0.5 * (w - w.transpose())};
}

/// V + (i/2) Omega, Hermitian and PSD for every physical state.
inline ComplexMatrix uncertainty_matrix(const CovarianceMatrix& v, const CommutationMatrix& omega) {
  return v.values.cast<Complex>() + 0.5 * kI * omega.values.cast<Complex>();
}

inline ComplexMatrix uncertainty_matrix(const DensityMatrix& rho, const ObservableSet& set) {
  return uncertainty_matrix(covariance_matrix(rho, set), commutation_matrix(rho, set));
}

/// Entry (j,k) = Tr[rho PT_B(xi_j xi_k)] - Tr[rho PT_B(xi_j)] Tr[rho PT_B(xi_k)];
/// the transpose acts on each operator product, so joint operators without
/// a definite parity are handled too.
inline ComplexMatrix criterion_matrix(const DensityMatrix& rho, const ObservableSet& set) {
  detail::require_same_space(rho, set, "criterion_matrix");
  const auto mo = detail::moments(rho, set, true);
  ComplexMatrix c = mo.second - mo.first * mo.first.transpose();
  return 0.5 * (c + c.adjoint());
}

/// Same matrix evaluated as ordinary second moments against rho^{T_B}.
inline ComplexMatrix criterion_matrix_transposed_state(const DensityMatrix& rho, const ObservableSet& set) {
  detail::require_same_space(rho, set, "criterion_matrix_transposed_state");
  const ComplexMatrix rt = partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b(), Subsystem::B);
  const auto n = static_cast<Eigen::Index>(set.size());
  ComplexVector mean(n);
  std::vector<ComplexMatrix> weighted;
  weighted.reserve(set.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    weighted.push_back(rt * set[j].matrix());
    mean(j) = weighted.back().trace();
  }
  ComplexMatrix c(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      c(j, k) = (weighted[j].array() * set[k].matrix().transpose().array()).sum() - mean(j) * mean(k);
    }
  }
  return 0.5 * (c + c.adjoint());
}

/// Extracts measurable data from a simulated state. Every observable must be
/// supported on A or B and carry a parity tag.
inline CorrelationData correlation_data(const DensityMatrix& rho, const ObservableSet& set) {
  CorrelationData data;
  for (const auto& o : set) {
    if (o.support() == Support::Joint) {
      throw ValidationError("correlation_data: " + o.label() + " is a joint operator");
    }
    if (!o.pt_parity()) throw ValidationError("correlation_data: " + o.label() + " has no parity tag");
    data.labels.push_back(o.label());
    data.partition.push_back(o.support() == Support::A ? Subsystem::A : Subsystem::B);
    data.pt_parity.push_back(*o.pt_parity());
  }
  const auto mo = detail::moments(rho, set, false);
  data.means = mo.first.real();
  data.covariance = covariance_matrix(rho, set).values;
  data.commutation = commutation_matrix(rho, set).values;
  // Cross-partition commutators vanish identically; drop rounding residue.
  for (std::size_t j = 0; j < set.size(); ++j) {
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (data.partition[j] != data.partition[k]) data.commutation(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = 0.0;
    }
  }
  return data;
}

/// Rebuilds the criterion matrix from moments alone using locality and the
/// parities s_j (PT_B xi_j = s_j xi_j, and (X_B Y_B)^{T_B} = Y_B^{T_B} X_B^{T_B}):
///   A,A: V + (i/2) Omega     A,B: s_k V     B,A: s_j V     B,B: s_j s_k (V - (i/2) Omega)
inline ComplexMatrix criterion_matrix_from_data(const CorrelationData& data) {
  data.validate();
  const auto n = static_cast<Eigen::Index>(data.size());
  ComplexMatrix c(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double v = data.covariance(j, k);
      const double w = data.commutation(j, k);
      const double sj = data.pt_parity[j], sk = data.pt_parity[k];
      const bool ja = data.partition[j] == Subsystem::A, ka = data.partition[k] == Subsystem::A;
      if (ja && ka) {
        c(j, k) = Complex(v, 0.5 * w);
      } else if (ja) {
        c(j, k) = sk * v;
      } else if (ka) {
        c(j, k) = sj * v;
      } else {
        c(j, k) = sj * sk * Complex(v, -0.5 * w);
      }
    }
  }
  return 0.5 * (c + c.adjoint());
}

/// Eigenvalue test: ENTANGLED iff the minimum eigenvalue is below -tol.
inline CriterionReport detect(const ComplexMatrix& m, double tol = kVerdictTolerance,
                              double hermiticity_tol = kHermiticityTolerance) {
  CriterionReport report;
  report.eigenvalues = hermitian_eigenvalues(m, hermiticity_tol);
  report.min_eigenvalue = report.eigenvalues(0);
  report.determinant = report.eigenvalues.prod();
  report.tolerance = tol;
  report.verdict = report.min_eigenvalue < -tol ? Verdict::Entangled : Verdict::Undetected;
  return report;
}

}  // namespace covent
