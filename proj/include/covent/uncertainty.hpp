#pragma once

// N-operator Schrodinger uncertainty residuals and their identification with
// the principal-minor invariants of the uncertainty matrix.

#include <map>
#include <string>
#include <vector>

#include "covent/criterion.hpp"

namespace covent {

namespace detail {

inline void require_operator(const DensityMatrix& rho, const ComplexMatrix& op, const char* what) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
    throw DimensionError(std::string(what) + ": operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + ", state dimension is " + std::to_string(rho.dim()));
  }
}

// (xi - <xi>)|psi>.
inline ComplexVector deviation(const PureState& psi, const ComplexMatrix& op) {
  const ComplexVector& v = psi.amplitudes();
  const ComplexVector applied = op * v;
  return applied - v.dot(applied) * v;
}

}  // namespace detail

/// sigma1^2 sigma2^2 - |<{x1,x2}>/2 - <x1><x2>|^2 - |<[x1,x2]>/(2i)|^2.
inline double schrodinger_I2(const DensityMatrix& rho, const ComplexMatrix& xi1, const ComplexMatrix& xi2) {
  detail::require_operator(rho, xi1, "schrodinger_I2");
  detail::require_operator(rho, xi2, "schrodinger_I2");
  const ComplexMatrix& r = rho.matrix();
  const double m1 = detail::expect(r, xi1), m2 = detail::expect(r, xi2);
  const Complex g12 = detail::expect_product(r, xi1, xi2);
  const Complex g21 = detail::expect_product(r, xi2, xi1);
  const double var1 = detail::expect_product(r, xi1, xi1).real() - m1 * m1;
  const double var2 = detail::expect_product(r, xi2, xi2).real() - m2 * m2;
  const double cov = (0.5 * (g12 + g21)).real() - m1 * m2;
  const double comm = std::abs((g12 - g21) / (2.0 * kI));
  return var1 * var2 - cov * cov - comm * comm;
}

/// Three-operator residual from the deviation vectors |f_i> of a pure state:
/// the full expansion of det <f_j|f_k>, with both cyclic triple products added.
inline double schrodinger_I3(const PureState& psi, const ComplexMatrix& xi1, const ComplexMatrix& xi2,
                             const ComplexMatrix& xi3) {
  for (const auto* op : {&xi1, &xi2, &xi3}) {
    if (op->rows() != psi.dim() || op->cols() != psi.dim()) {
      throw DimensionError("schrodinger_I3: operator does not act on the state's space");
    }
  }
  const ComplexVector f[3] = {detail::deviation(psi, xi1), detail::deviation(psi, xi2),
                              detail::deviation(psi, xi3)};
  auto g = [&](int j, int k) { return f[j].dot(f[k]); };  // <f_j|f_k>
  const double n1 = g(0, 0).real(), n2 = g(1, 1).real(), n3 = g(2, 2).real();
  const Complex cyc = g(0, 1) * g(1, 2) * g(2, 0) + g(1, 0) * g(2, 1) * g(0, 2);
  return n1 * n2 * n3 - n1 * std::norm(g(1, 2)) - n2 * std::norm(g(2, 0)) - n3 * std::norm(g(0, 1)) + cyc.real();
}

/// Mixed-state three-operator residual: determinant of the 3x3 uncertainty matrix.
inline double schrodinger_I3(const DensityMatrix& rho, const ComplexMatrix& xi1, const ComplexMatrix& xi2,
                             const ComplexMatrix& xi3) {
  std::vector<Observable> obs;
  const char* labels[3] = {"xi1", "xi2", "xi3"};
  const ComplexMatrix* ops[3] = {&xi1, &xi2, &xi3};
  for (int i = 0; i < 3; ++i) {
    detail::require_operator(rho, *ops[i], "schrodinger_I3");
    obs.emplace_back(labels[i], *ops[i], Support::Joint, std::nullopt, rho.dim_a(), rho.dim_b());
  }
  const ComplexMatrix u = uncertainty_matrix(rho, ObservableSet(std::move(obs), rho.dim_a(), rho.dim_b()));
  return u.determinant().real();
}

/// Sum of all k x k principal minors of a Hermitian matrix (order-k invariant).
inline double invariant_decomposition(const ComplexMatrix& m, int k) {
  detail::require_square(m, "invariant_decomposition");
  const int n = static_cast<int>(m.rows());
  if (k < 1 || k > n) {
    throw ValidationError("invariant_decomposition: order " + std::to_string(k) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  const ComplexMatrix h = hermitian_part(m);
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  double total = 0.0;
  ComplexMatrix minor(k, k);
  while (true) {
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) minor(r, c) = h(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    }
    total += minor.determinant().real();
    // Next k-combination of {0..n-1} in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return total;
}

struct UncertaintyReport {
  int n = 0;
  std::map<std::vector<int>, double> residuals;  // I_j, I_jk, I_jkl keyed by sorted indices
  std::vector<double> invariant_sums;           // order k = 1..N at position k-1
};

/// Residuals up to three operators plus every order-k invariant of V + (i/2) Omega.
inline UncertaintyReport uncertainty_report(const DensityMatrix& rho, const ObservableSet& set) {
  UncertaintyReport out;
  out.n = static_cast<int>(set.size());
  const ComplexMatrix u = uncertainty_matrix(rho, set);
  for (int j = 0; j < out.n; ++j) {
    out.residuals[{j}] = u(j, j).real();
    for (int k = j + 1; k < out.n; ++k) {
      out.residuals[{j, k}] = schrodinger_I2(rho, set[static_cast<std::size_t>(j)].matrix(),
                                             set[static_cast<std::size_t>(k)].matrix());
      for (int l = k + 1; l < out.n; ++l) {
        out.residuals[{j, k, l}] = schrodinger_I3(rho, set[static_cast<std::size_t>(j)].matrix(),
                                                  set[static_cast<std::size_t>(k)].matrix(),
                                                  set[static_cast<std::size_t>(l)].matrix());
      }
    }
  }
  for (int k = 1; k <= out.n; ++k) out.invariant_sums.push_back(invariant_decomposition(u, k));
  return out;
}

}  // namespace covent
