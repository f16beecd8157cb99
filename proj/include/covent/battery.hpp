#pragma once

// Randomized property battery for the uncertainty machinery: positivity of
// V + (i/2) Omega, its Gram-matrix form on pure states, the symmetry of the
// moment matrices and the principal-minor reading of the residuals.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "covent/uncertainty.hpp"

namespace covent {

struct PropertyCheck {
  std::string name;
  double tolerance = 0.0;
  long evaluated = 0;
  long failures = 0;
  double worst = 0.0;  // largest violation seen (0 when every value is within bounds)

  bool passed() const { return evaluated > 0 && failures == 0; }

  void record(double violation) {
    ++evaluated;
    worst = std::max(worst, violation);
    if (violation > tolerance) ++failures;
  }
};

struct BatteryResult {
  int trials = 0;
  std::vector<PropertyCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed(); });
  }
};

/// Random Hermitian operator with unit Frobenius norm.
template <class Rng>
ComplexMatrix random_hermitian(int dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
  }
  ComplexMatrix h = g + g.adjoint();
  return h / h.norm();
}

/// `trials` random mixed states on 2x2 .. 3x3 with N in [1, max_n] random operators.
inline BatteryResult run_uncertainty_battery(int trials, int max_n, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("uncertainty battery: trials must be >= 1");
  if (max_n < 1) throw ValidationError("uncertainty battery: max N must be >= 1");
  enum { kPsd, kGram, kSymmetry, kOrder1, kOrder2, kOrder3, kPureOrder3, kInvariants };
  BatteryResult out;
  out.trials = trials;
  out.checks = {{"uncertainty matrix PSD (min eigenvalue >= -tol)", 1e-9},
                {"pure-state Gram matrix equals V + (i/2) Omega", 1e-10},
                {"V symmetric and Omega antisymmetric from ordered moments", 1e-10},
                {"order-1 invariant equals sum of I_j", 1e-9},
                {"order-2 invariant equals sum of I_jk", 1e-9},
                {"order-3 invariant equals I_123 (mixed)", 1e-9},
                {"order-3 invariant equals I_123 from deviation vectors (pure)", 1e-9},
                {"every invariant and residual >= -tol", 1e-9}};

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(2, 3);
  std::uniform_int_distribution<int> count(1, max_n);
  for (int trial = 0; trial < trials; ++trial) {
    const int da = side(rng), db = side(rng), d = da * db;
    const int n = count(rng);
    std::uniform_int_distribution<int> rank_dist(1, d);
    const DensityMatrix rho = random_density_matrix(da, db, rank_dist(rng), rng);
    const PureState psi = random_pure_state(da, db, rng);
    const DensityMatrix pure = DensityMatrix::from_pure(psi);

    std::vector<Observable> obs;
    for (int k = 0; k < n; ++k) {
      obs.emplace_back("op" + std::to_string(k), random_hermitian(d, rng), Support::Joint, std::nullopt, da, db);
    }
    const ObservableSet set(std::move(obs), da, db);

    const ComplexMatrix u = uncertainty_matrix(rho, set);
    out.checks[kPsd].record(-hermitian_eigenvalues(u)(0));

    // <f_j|f_k> against V + (i/2) Omega on a pure state.
    const ComplexMatrix u_pure = uncertainty_matrix(pure, set);
    std::vector<ComplexVector> f;
    for (const auto& o : set) f.push_back(detail::deviation(psi, o.matrix()));
    double gram_gap = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) gram_gap = std::max(gram_gap, std::abs(f[j].dot(f[k]) - u_pure(j, k)));
    }
    out.checks[kGram].record(gram_gap);

    // Each ordered pair evaluated independently, no symmetrization.
    double sym_gap = 0.0;
    auto v_entry = [&](int j, int k) {
      const auto& a = set[j].matrix();
      const auto& b = set[k].matrix();
      return 0.5 * (detail::expect_product(rho.matrix(), a, b) + detail::expect_product(rho.matrix(), b, a)) -
             detail::expect(rho.matrix(), a) * detail::expect(rho.matrix(), b);
    };
    auto w_entry = [&](int j, int k) {
      const auto& a = set[j].matrix();
      const auto& b = set[k].matrix();
      return -kI * (detail::expect_product(rho.matrix(), a, b) - detail::expect_product(rho.matrix(), b, a));
    };
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Complex vjk = v_entry(j, k), wjk = w_entry(j, k);
        sym_gap = std::max({sym_gap, std::abs(vjk - v_entry(k, j)), std::abs(wjk + w_entry(k, j)),
                            std::abs(vjk.imag()), std::abs(wjk.imag())});
      }
    }
    out.checks[kSymmetry].record(sym_gap);

    const UncertaintyReport report = uncertainty_report(rho, set);
    double sum1 = 0.0, sum2 = 0.0, floor = 0.0;
    for (const auto& [idx, value] : report.residuals) {
      if (idx.size() == 1) sum1 += value;
      if (idx.size() == 2) sum2 += value;
      floor = std::max(floor, -value);
    }
    for (double s : report.invariant_sums) floor = std::max(floor, -s);
    out.checks[kInvariants].record(floor);
    out.checks[kOrder1].record(std::abs(report.invariant_sums[0] - sum1));
    if (n >= 2) out.checks[kOrder2].record(std::abs(report.invariant_sums[1] - sum2));
    if (n == 3) out.checks[kOrder3].record(std::abs(report.invariant_sums[2] - report.residuals.at({0, 1, 2})));
    if (n >= 3) {
      const ObservableSet triple = set.select({0, 1, 2});
      const double minor3 = invariant_decomposition(uncertainty_matrix(pure, triple), 3);
      out.checks[kPureOrder3].record(
          std::abs(minor3 - schrodinger_I3(psi, triple[0].matrix(), triple[1].matrix(), triple[2].matrix())));
    }
  }
  return out;
}

}  // namespace covent
