#pragma once

// Reference criteria used for cross-validation: the full PPT test, the
// Duan-Simon quadrature instance of the criterion matrix, and a simulated
// annealing search for decomposable entanglement witnesses built from
// {I, S^x, S^y, S^z}_A (x) {I, S^x, S^y, S^z}_B.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "covent/criterion.hpp"

namespace covent {

/// Minimum eigenvalue of rho^{T_B}; negative means entangled.
inline double ppt_min_eigenvalue(const DensityMatrix& rho) {
  return hermitian_eigenvalues(partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b(), Subsystem::B))(0);
}

/// Criterion matrix of the Holstein-Primakoff quadratures built on axes rotated by `r`.
inline CriterionReport duan_simon_report(const DensityMatrix& rho, int m, double tol = kVerdictTolerance,
                                         const Rotation3& r = Rotation3::Identity()) {
  if (rho.dim_a() != m + 1 || rho.dim_b() != m + 1) {
    throw DimensionError("duan_simon_report: state is not on the (M+1)^2 symmetric space for M=" +
                         std::to_string(m));
  }
  return detect(criterion_matrix(rho, hp_quadrature_set(m, r)), tol);
}

struct AnnealParams {
  double initial_temperature = 1.0;
  double decay = 0.98;           // geometric factor per sweep
  int sweeps = 300;
  int moves_per_sweep = 15;      // one proposal per free coefficient on average
  double box = -1.0;             // |c_ij| bound; negative selects 10 / (M+1)^2
  double step_scale = 0.1;       // proposal sigma = step_scale * box * sqrt(T)
  double projection_tolerance = 1e-8;
  int max_projection_iterations = 500;
  double residual_threshold = 1e-6;

  void validate() const {
    if (!(initial_temperature > 0.0)) throw ValidationError("AnnealParams: initial temperature must be > 0");
    if (!(decay > 0.0 && decay <= 1.0)) throw ValidationError("AnnealParams: decay must lie in (0, 1]");
    if (sweeps < 1) throw ValidationError("AnnealParams: sweeps must be >= 1");
    if (moves_per_sweep < 1) throw ValidationError("AnnealParams: moves per sweep must be >= 1");
    if (box == 0.0 || !std::isfinite(box)) throw ValidationError("AnnealParams: box must be positive");
    if (!(step_scale > 0.0)) throw ValidationError("AnnealParams: step scale must be > 0");
    if (!(projection_tolerance > 0.0) || max_projection_iterations < 1 || !(residual_threshold > 0.0)) {
      throw ValidationError("AnnealParams: projection settings must be positive");
    }
  }

  double box_for(int m) const { return box > 0.0 ? box : 10.0 / ((m + 1.0) * (m + 1.0)); }
};

struct WitnessResult {
  double min_expectation = 0.0;
  RealMatrix coefficients;  // 4x4, rows a_i, columns b_j, index 0 = identity
  double feasibility_residual = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;       // proposals evaluated
  int accepted = 0;

  bool detects(double threshold = 1e-6) const { return min_expectation < -threshold; }
};

/// The 16 local products a_i (x) b_j on the (M+1)^2 space.
inline std::array<ComplexMatrix, 16> witness_basis(int m) {
  const SpinTriple s = collective_spin(m);
  const ComplexMatrix id = ComplexMatrix::Identity(m + 1, m + 1);
  const ComplexMatrix* local[4] = {&id, &s.x, &s.y, &s.z};
  std::array<ComplexMatrix, 16> out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[static_cast<std::size_t>(4 * i + j)] = kron(*local[i], *local[j]);
  }
  return out;
}

inline ComplexMatrix witness_operator(const RealMatrix& c, const std::array<ComplexMatrix, 16>& basis) {
  ComplexMatrix w = ComplexMatrix::Zero(basis[0].rows(), basis[0].cols());
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) w += c(i, j) * basis[static_cast<std::size_t>(4 * i + j)];
  }
  return w;
}

struct Decomposition {
  bool feasible = false;
  ComplexMatrix p;          // PSD part
  ComplexMatrix q;          // PSD part entering as Q^{T_A}
  double residual = 0.0;    // ||W - P - Q^{T_A}||_F for the returned pair
  int iterations = 0;
};

/// Searches W = P + Q^{T_A} with P, Q >= 0 by alternating projections between
/// {P >= 0} and {P : (W - P)^{T_A} >= 0}, starting from `start`. Iteration stops
/// when the step ||P - Pi2(Pi1(P))||_F drops to `tolerance`; the iterate is then
/// feasible only if the gap between the two sets, ||Pi1(P) - P||_F, is at most
/// `residual_threshold` (disjoint sets also produce a fixed point). The search
/// gives up early once the observed linear rate cannot reach `tolerance`
/// within `max_iterations`.
inline Decomposition decompose_witness(const ComplexMatrix& w, int dim_a, int dim_b, const ComplexMatrix& start,
                                       double tolerance = 1e-8, int max_iterations = 500,
                                       double residual_threshold = 1e-6) {
  constexpr int kRateWindow = 10;
  auto project_second = [&](const ComplexMatrix& p) {
    ComplexMatrix q = psd_project(partial_transpose(w - p, dim_a, dim_b, Subsystem::A));
    ComplexMatrix next = w - partial_transpose(q, dim_a, dim_b, Subsystem::A);
    return std::pair{std::move(next), std::move(q)};
  };
  Decomposition out;
  ComplexMatrix p = start;
  std::array<double, kRateWindow> history{};
  for (int it = 1; it <= max_iterations; ++it) {
    auto [next, q] = project_second(psd_project(p));
    const double step = (p - next).norm();
    p = std::move(next);
    out.iterations = it;
    if (step <= tolerance) {
      // p lies in the second set exactly; clipping it to PSD gives the certificate.
      out.p = psd_project(p);
      out.q = std::move(q);
      out.residual = (out.p - p).norm();
      out.feasible = out.residual <= residual_threshold;
      return out;
    }
    double& slot = history[static_cast<std::size_t>(it % kRateWindow)];
    if (it > kRateWindow) {
      const double rate = std::pow(step / slot, 1.0 / kRateWindow);
      if (!(rate < 1.0)) break;  // stalled at the gap between disjoint sets
      const double needed = std::log(tolerance / step) / std::log(rate);
      if (it + needed > max_iterations) break;
    }
    slot = step;
  }
  out.p = std::move(p);
  return out;
}

/// Minimizes <W> = Tr(rho W) over c_ij with c_00 = 1/(M+1)^2 (so Tr W = 1),
/// |c_ij| <= box, and W decomposable. Metropolis acceptance on <W>; infeasible
/// proposals are rejected. Deterministic for a given seed.
inline WitnessResult witness_optimize(const DensityMatrix& rho, int m, const AnnealParams& params,
                                      std::uint64_t seed) {
  params.validate();
  if (m < 1) throw ValidationError("witness_optimize: ensemble size must be >= 1");
  if (rho.dim_a() != m + 1 || rho.dim_b() != m + 1) {
    throw DimensionError("witness_optimize: state is not on the (M+1)^2 symmetric space for M=" + std::to_string(m));
  }
  const int d = m + 1;
  const double box = params.box_for(m);
  const auto basis = witness_basis(m);
  RealMatrix corr(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      corr(i, j) = detail::expect(rho.matrix(), basis[static_cast<std::size_t>(4 * i + j)]);
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, 15);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  RealMatrix c = RealMatrix::Zero(4, 4);
  c(0, 0) = 1.0 / (static_cast<double>(d) * d);
  double energy = (c.array() * corr.array()).sum();
  ComplexMatrix p = witness_operator(c, basis);  // W = I/D is P itself

  WitnessResult best;
  best.seed = seed;
  best.coefficients = c;
  best.min_expectation = energy;
  best.feasibility_residual = 0.0;

  double temperature = params.initial_temperature;
  for (int sweep = 0; sweep < params.sweeps; ++sweep) {
    const double sigma = params.step_scale * box * std::sqrt(temperature);
    for (int move = 0; move < params.moves_per_sweep; ++move) {
      const int flat = pick(rng);
      const int i = flat / 4, j = flat % 4;
      const double delta = sigma * gauss(rng);
      const double u = unit(rng);
      ++best.iterations;
      const double proposed = c(i, j) + delta;
      if (std::abs(proposed) > box) continue;
      const double trial_energy = energy + delta * corr(i, j);
      if (trial_energy > energy && u >= std::exp(-(trial_energy - energy) / temperature)) continue;

      RealMatrix trial = c;
      trial(i, j) = proposed;
      const ComplexMatrix w = witness_operator(trial, basis);
      const Decomposition dec = decompose_witness(w, d, d, p, params.projection_tolerance,
                                                  params.max_projection_iterations, params.residual_threshold);
      if (!dec.feasible) continue;

      c = std::move(trial);
      energy = trial_energy;
      p = dec.p;
      ++best.accepted;
      if (energy < best.min_expectation) {
        best.min_expectation = energy;
        best.coefficients = c;
        best.feasibility_residual = dec.residual;
      }
    }
    temperature *= params.decay;
  }
  return best;
}

}  // namespace covent
